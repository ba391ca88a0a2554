#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kaczmarz::cli {

enum ExitCode : int {
    kConverged = 0,
    kError = 1,
    kBudgetExhausted = 2,  // max iterations (or the wall-clock cap) reached
};

// Entry point shared by main() and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest round-trip decimal, independent of the global locale; "nan", "inf", "-inf".
std::string format_number(double x);

// "a:b:c" -> a, a+b, ..., up to c (inclusive, with a small tolerance).
std::vector<double> parse_grid(const std::string& spec);

}  // namespace kaczmarz::cli
