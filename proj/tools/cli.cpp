#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kaczmarz/error.hpp"
#include "kaczmarz/io.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/problems.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
            throw InvalidArgument("bad number '" + item + "' in grid '" + spec + "'");
        }
        parts.push_back(v);
    }
    if (parts.size() != 3) throw InvalidArgument("grid must look like start:step:stop");
    const double start = parts[0], step = parts[1], stop = parts[2];
    if (!(step > 0.0) || stop < start) throw InvalidArgument("grid needs step > 0 and stop >= start");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
        out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Flag groups

struct SolverFlags {
    std::string method = "grbk";
    std::size_t tau1 = 0;  // 0: min(dim, 20)
    std::size_t tau2 = 0;
    double eta = kNan;     // NaN: method default
    std::string weights = "frobenius";
    std::size_t max_iters = 50000;
    double tol = 1e-6;
    std::size_t trace_every = 1;
    std::uint64_t seed = 0;
    double time_limit = 120.0;
    bool serial = false;
    bool extended = false;
    bool cache_pinv = false;
};

void add_solver_flags(CLI::App* app, SolverFlags& f, bool with_method = true) {
    if (with_method) {
        app->add_option("--method", f.method, "grk | grbk | grabk-c | grabk-a | rk-kron")
            ->check(CLI::IsMember({"grk", "grbk", "grabk-c", "grabk-a", "rk-kron"}))
            ->capture_default_str();
    }
    app->add_option("--tau1", f.tau1, "row block size of A (default min(m, 20))");
    app->add_option("--tau2", f.tau2, "column block size of B (default min(n, 20))");
    app->add_option("--eta", f.eta, "stepsize factor in (0, 2)");
    app->add_option("--weights", f.weights, "GRABK weights")
        ->check(CLI::IsMember({"frobenius", "uniform"}))
        ->capture_default_str();
    app->add_option("--max-iters", f.max_iters)->capture_default_str();
    app->add_option("--tol", f.tol, "stop when RE (or relative residual) drops below this")
        ->capture_default_str();
    app->add_option("--trace-every", f.trace_every)->capture_default_str();
    app->add_option("--seed", f.seed, "sampling seed")->capture_default_str();
    app->add_option("--time-limit", f.time_limit, "wall-clock cap in seconds, 0 disables")
        ->capture_default_str();
    app->add_flag("--serial", f.serial, "use the serial reference kernels");
    app->add_flag("--allow-extended-stepsize", f.extended, "let grabk-c take eta >= 2");
    app->add_flag("--cache-pinv", f.cache_pinv, "cache block pseudoinverses in grbk");
}

Method method_from(const std::string& name) {
    const auto m = parse_method(name);
    if (!m) throw InvalidArgument("unknown method '" + name + "'");
    return *m;
}

SolverConfig make_config(const SolverFlags& f, const Problem& pr, Method method, double eta) {
    SolverConfig cfg;
    cfg.method = method;
    cfg.tau1 = f.tau1 ? f.tau1 : std::min<std::size_t>(pr.m(), 20);
    cfg.tau2 = f.tau2 ? f.tau2 : std::min<std::size_t>(pr.n(), 20);
    if (!std::isnan(eta)) cfg.eta = eta;
    cfg.weights = *parse_weight_scheme(f.weights);
    cfg.max_iters = f.max_iters;
    cfg.re_tolerance = f.tol;
    cfg.trace_every = f.trace_every;
    cfg.seed = f.seed;
    cfg.time_limit_seconds = f.time_limit;
    cfg.execution = f.serial ? kernels::Execution::serial : kernels::Execution::parallel;
    cfg.allow_extended_stepsize = f.extended;
    cfg.cache_block_pinv = f.cache_pinv;
    return cfg;
}

int exit_code(TerminationReason r) {
    return r == TerminationReason::tolerance ? kConverged : kBudgetExhausted;
}

struct GenFlags {
    bool type1 = false;
    bool type2 = false;
    bool blur = false;
    std::size_t m = 100, p = 40, r1 = 20, q = 40, n = 100, r2 = 40;
    std::size_t size = 64;
    std::size_t tile = 8;
    std::string image;
    std::size_t r = 3;
    double sigma = 7.0;
    std::uint64_t seed = 0;
};

void add_generation_flags(CLI::App* app, GenFlags& g) {
    auto* kinds = app->add_option_group("kind");
    kinds->add_flag("--type1", g.type1, "low-rank A = U D V^T with singular values in (1, 2)");
    kinds->add_flag("--type2", g.type2, "standard-normal A and B");
    kinds->add_flag("--blur", g.blur, "Toeplitz blur of an image");
    kinds->require_option(0, 1);
    app->add_option("--m", g.m)->capture_default_str();
    app->add_option("--p", g.p)->capture_default_str();
    app->add_option("--r1", g.r1)->capture_default_str();
    app->add_option("--q", g.q)->capture_default_str();
    app->add_option("--n", g.n)->capture_default_str();
    app->add_option("--r2", g.r2)->capture_default_str();
    app->add_option("--image", g.image, "PGM image for --blur (default: checkerboard)");
    app->add_option("--size", g.size, "checkerboard side")->capture_default_str();
    app->add_option("--tile", g.tile, "checkerboard tile side")->capture_default_str();
    app->add_option("--r", g.r, "blur bandwidth")->capture_default_str();
    app->add_option("--sigma", g.sigma, "Gaussian blur width")->capture_default_str();
}

struct ProblemBundle {
    Problem problem;
    std::string descriptor;
    std::optional<GrayImage> original;
    std::uint64_t seed = 0;
};

GrayImage source_image(const GenFlags& g) {
    if (!g.image.empty()) return io::read_pgm(fs::path(g.image));
    if (g.tile == 0) throw InvalidArgument("tile must be positive");
    return checkerboard(g.size, g.tile);
}

ProblemBundle generate_bundle(const GenFlags& g) {
    ProblemBundle out;
    out.seed = g.seed;
    std::ostringstream d;
    if (g.blur) {
        GrayImage img = source_image(g);
        if (img.height() != img.width()) throw InvalidArgument("blur needs a square image");
        out.problem = blur_problem(img.to_matrix(), {img.height(), g.r, g.sigma});
        d << "blur:n=" << img.height() << ";r=" << g.r << ";sigma=" << format_number(g.sigma);
        out.original = std::move(img);
    } else if (g.type2) {
        auto ab = gen_type2(g.m, g.p, g.q, g.n, g.seed);
        out.problem = make_problem(std::move(ab.a), std::move(ab.b), g.seed + 1).problem;
        d << "type2:m=" << g.m << ";p=" << g.p << ";q=" << g.q << ";n=" << g.n << ";seed=" << g.seed;
    } else {
        auto ab = gen_type1({g.m, g.p, g.r1, g.q, g.n, g.r2, g.seed});
        out.problem = make_problem(std::move(ab.a), std::move(ab.b), g.seed + 1).problem;
        d << "type1:m=" << g.m << ";p=" << g.p << ";r1=" << g.r1 << ";q=" << g.q << ";n=" << g.n
          << ";r2=" << g.r2 << ";seed=" << g.seed;
    }
    out.descriptor = d.str();
    return out;
}

// Dense storage unless the operand is mostly zeros.
Operand load_operand(const fs::path& path) {
    SparseMatrix s = io::load_matrix_market(path);
    const double fill = s.rows() * s.cols() == 0
                            ? 1.0
                            : static_cast<double>(s.nnz()) / static_cast<double>(s.rows() * s.cols());
    if (fill > 0.25) return s.to_dense();
    return s;
}

ProblemBundle load_bundle(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("problem directory '" + dir.string() + "' not found");
    ProblemBundle out;
    out.problem.a = load_operand(dir / "A.mtx");
    out.problem.b = load_operand(dir / "B.mtx");
    out.problem.c = io::load_matrix_market_dense(dir / "C.mtx");
    if (fs::exists(dir / "X_star.mtx")) out.problem.x_star = io::load_matrix_market_dense(dir / "X_star.mtx");
    out.problem.validate_shapes();
    out.descriptor = dir.string();
    if (fs::exists(dir / "manifest.json")) {
        std::ifstream in(dir / "manifest.json");
        const json m = json::parse(in);
        out.descriptor = m.value("descriptor", out.descriptor);
        out.seed = m.value("seed", std::uint64_t{0});
    }
    if (fs::exists(dir / "original.pgm")) out.original = io::read_pgm(dir / "original.pgm");
    return out;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    return f;
}

void write_trace(const fs::path& path, const ConvergenceReport& report) {
    std::ofstream f = open_output(path);
    f << "iteration,relative_error,relative_residual,elapsed_seconds\n";
    for (const auto& r : report.records) {
        f << r.k << ',' << format_number(r.relative_error) << ',' << format_number(r.relative_residual)
          << ',' << format_number(r.elapsed_seconds) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Run records

struct RunRecord {
    std::string method;
    std::string problem;
    std::size_t tau1 = 0;
    std::size_t tau2 = 0;
    double eta = kNan;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    double final_re = kNan;
    double wall_seconds = 0.0;
    std::string termination;
    std::string message;

    bool converged() const { return termination == "tolerance"; }
};

constexpr const char* kRecordHeader =
    "method,problem,tau1,tau2,eta,seed,iterations,final_re,wall_seconds,termination,message\n";

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

void write_record(std::ostream& out, const RunRecord& r) {
    out << r.method << ',' << csv_field(r.problem) << ',' << r.tau1 << ',' << r.tau2 << ','
        << format_number(r.eta) << ',' << r.seed << ',' << r.iterations << ','
        << format_number(r.final_re) << ',' << format_number(r.wall_seconds) << ',' << r.termination
        << ',' << csv_field(r.message) << '\n';
}

RunRecord record_from(const ProblemBundle& b, const SolverConfig& cfg, const ConvergenceReport& rep) {
    RunRecord r;
    r.method = std::string(to_string(cfg.method));
    r.problem = b.descriptor;
    const bool single = cfg.method == Method::grk || cfg.method == Method::rk_kronecker;
    r.tau1 = single ? 1 : cfg.tau1;
    r.tau2 = single ? 1 : cfg.tau2;
    if (cfg.method == Method::grabk_const || cfg.method == Method::grabk_adaptive)
        r.eta = cfg.eta.value_or(default_eta(cfg.method));
    r.seed = cfg.seed;
    r.iterations = rep.iterations;
    r.final_re = b.problem.x_star ? rep.final_relative_error : rep.final_relative_residual;
    r.wall_seconds = rep.wall_seconds;
    r.termination = std::string(to_string(rep.reason));
    return r;
}

std::string summary_line(const RunRecord& r, double residual) {
    std::ostringstream s;
    s << "method=" << r.method << " tau1=" << r.tau1 << " tau2=" << r.tau2
      << " eta=" << format_number(r.eta) << " seed=" << r.seed << " iterations=" << r.iterations
      << " relative_error=" << format_number(r.final_re)
      << " relative_residual=" << format_number(residual)
      << " wall_seconds=" << format_number(r.wall_seconds) << " termination=" << r.termination;
    return s.str();
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(const GenFlags& g, const std::string& out_dir, std::ostream& out) {
    const ProblemBundle b = generate_bundle(g);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const Problem& pr = b.problem;
    json files = json::array();
    auto save_operand = [&](const Operand& op, const std::string& name) {
        if (g.blur) io::save_matrix_market(dir / name, SparseMatrix::from_dense(to_dense(op)));
        else io::save_matrix_market_array(dir / name, to_dense(op));
        files.push_back(name);
    };
    save_operand(pr.a, "A.mtx");
    save_operand(pr.b, "B.mtx");
    io::save_matrix_market_array(dir / "C.mtx", pr.c);
    files.push_back("C.mtx");
    if (pr.x_star) {
        io::save_matrix_market_array(dir / "X_star.mtx", *pr.x_star);
        files.push_back("X_star.mtx");
    }
    if (b.original) {
        io::write_pgm(dir / "original.pgm", *b.original);
        io::write_pgm(dir / "blurred.pgm", GrayImage::from_matrix(pr.c, b.original->max_value()));
        files.push_back("original.pgm");
        files.push_back("blurred.pgm");
    }
    json manifest = {
        {"descriptor", b.descriptor},
        {"kind", g.blur ? "blur" : (g.type2 ? "type2" : "type1")},
        {"seed", b.seed},
        {"rng", SeededRng::kAlgorithm},
        {"shapes", {{"m", pr.m()}, {"p", pr.p()}, {"q", pr.q()}, {"n", pr.n()}}},
        {"files", files},
    };
    if (!g.blur && !g.type2) manifest["ranks"] = {{"r1", g.r1}, {"r2", g.r2}};
    if (g.blur) manifest["blur"] = {{"r", g.r}, {"sigma", g.sigma}};
    std::ofstream mf = open_output(dir / "manifest.json");
    mf << manifest.dump(2) << '\n';
    out << "wrote " << files.size() + 1 << " files to " << dir.string() << " (" << b.descriptor << ")\n";
    return kConverged;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const std::string& problem_dir, const SolverFlags& f, bool seed_given,
              const std::string& trace_path, const std::string& record_path, std::ostream& out) {
    const ProblemBundle b = load_bundle(problem_dir);
    SolverFlags flags = f;
    if (!seed_given) flags.seed = b.seed;
    const Method method = method_from(flags.method);
    const SolverConfig cfg = make_config(flags, b.problem, method, flags.eta);
    const ConvergenceReport rep = solve(b.problem, cfg);
    if (!trace_path.empty()) write_trace(trace_path, rep);
    const RunRecord rec = record_from(b, cfg, rep);
    if (!record_path.empty()) {
        std::ofstream rf = open_output(record_path);
        rf << kRecordHeader;
        write_record(rf, rec);
    }
    out << summary_line(rec, rep.final_relative_residual) << '\n';
    return exit_code(rep.reason);
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchFlags {
    std::string problem_dir;
    std::vector<std::string> methods;
    std::size_t repeats = 10;
    std::string eta_grid;
    std::size_t parallel_repeats = 0;
    std::string summary_path;
};

struct SummaryRow {
    std::string method;
    double eta;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double mean_iterations = kNan;
    double mean_wall_seconds = kNan;
};

int cmd_benchmark(const BenchFlags& bf, const GenFlags& g, const SolverFlags& f,
                  const std::string& out_path, std::ostream& out) {
    if (bf.repeats == 0) throw InvalidArgument("repeats must be at least 1");
    const ProblemBundle b = bf.problem_dir.empty() ? generate_bundle(g) : load_bundle(bf.problem_dir);
    std::vector<std::string> names = bf.methods.empty() ? std::vector<std::string>{f.method} : bf.methods;
    const std::vector<double> grid = bf.eta_grid.empty() ? std::vector<double>{f.eta} : parse_grid(bf.eta_grid);

    struct Job {
        Method method;
        double eta;
    };
    std::vector<Job> jobs;
    for (const auto& name : names) {
        const Method m = method_from(name);
        const bool eta_method = m == Method::grabk_const || m == Method::grabk_adaptive;
        if (eta_method) {
            for (double e : grid) jobs.push_back({m, e});
        } else {
            jobs.push_back({m, kNan});
        }
    }

    const std::size_t total = jobs.size() * bf.repeats;
    std::vector<RunRecord> records(total);
    const bool concurrent = bf.parallel_repeats > 1;
    auto run_one = [&](std::size_t idx) {
        const Job& job = jobs[idx / bf.repeats];
        const std::size_t rep = idx % bf.repeats;
        SolverFlags run_flags = f;
        run_flags.seed = f.seed + rep;
        if (concurrent) run_flags.serial = true;
        SolverConfig cfg = make_config(run_flags, b.problem, job.method, job.eta);
        try {
            records[idx] = record_from(b, cfg, solve(b.problem, cfg));
        } catch (const std::exception& e) {
            RunRecord r;
            r.method = std::string(to_string(job.method));
            r.problem = b.descriptor;
            r.tau1 = cfg.tau1;
            r.tau2 = cfg.tau2;
            r.eta = job.eta;
            r.seed = cfg.seed;
            r.termination = "error";
            r.message = e.what();
            records[idx] = r;
        }
    };
    if (concurrent) {
        // Whole runs in parallel; each run uses the serial kernels and its own RNG.
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(bf.parallel_repeats))
        for (std::size_t idx = 0; idx < total; ++idx) run_one(idx);
    } else {
        for (std::size_t idx = 0; idx < total; ++idx) run_one(idx);
    }

    if (!out_path.empty()) {
        std::ofstream rf = open_output(out_path);
        rf << kRecordHeader;
        for (const auto& r : records) write_record(rf, r);
    }

    std::vector<SummaryRow> rows;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        SummaryRow s;
        s.method = std::string(to_string(jobs[j].method));
        s.eta = records[j * bf.repeats].eta;
        double it = 0.0, wall = 0.0;
        std::size_t ok = 0;
        for (std::size_t rep = 0; rep < bf.repeats; ++rep) {
            const RunRecord& r = records[j * bf.repeats + rep];
            ++s.runs;
            if (!r.converged()) {
                ++s.failures;
                continue;
            }
            ++ok;
            it += static_cast<double>(r.iterations);
            wall += r.wall_seconds;
        }
        if (ok) {
            s.mean_iterations = it / static_cast<double>(ok);
            s.mean_wall_seconds = wall / static_cast<double>(ok);
        }
        rows.push_back(s);
    }

    std::ostringstream table;
    table << "method,eta,runs,failures,mean_iterations,mean_wall_seconds\n";
    bool any_error = false, any_failure = false;
    for (const auto& s : rows) {
        table << s.method << ',' << format_number(s.eta) << ',' << s.runs << ',' << s.failures << ','
              << format_number(s.mean_iterations) << ',' << format_number(s.mean_wall_seconds) << '\n';
        any_failure |= s.failures > 0;
    }
    for (const auto& r : records) any_error |= r.termination == "error";
    out << table.str();
    if (!bf.summary_path.empty()) {
        std::ofstream sf = open_output(bf.summary_path);
        sf << table.str();
    }
    if (any_error) return kError;
    return any_failure ? kBudgetExhausted : kConverged;
}

// ---------------------------------------------------------------------------
// deblur

struct DeblurFlags {
    std::string image;
    std::size_t size = 64;
    std::size_t tile = 8;
    std::size_t r = 3;
    double sigma = 7.0;
    bool identity = false;
};

int cmd_deblur(const DeblurFlags& d, const SolverFlags& f, const std::string& out_dir,
               std::ostream& out) {
    GenFlags g;
    g.image = d.image;
    g.size = d.size;
    g.tile = d.tile;
    const GrayImage original = source_image(g);
    if (original.height() != original.width()) {
        throw InvalidArgument("deblur needs a square image, got " + std::to_string(original.height()) +
                              "x" + std::to_string(original.width()));
    }
    const std::size_t n = original.height();
    const DenseMatrix x = original.to_matrix();
    Problem pr;
    if (d.identity) {
        pr = Problem{DenseMatrix::identity(n), DenseMatrix::identity(n), x, x};
    } else {
        pr = blur_problem(x, {n, d.r, d.sigma});
    }

    SolverFlags flags = f;
    if (!flags.tau1) flags.tau1 = std::max<std::size_t>(1, n / 2);
    if (!flags.tau2) flags.tau2 = std::max<std::size_t>(1, n / 2);
    const Method method = method_from(flags.method);
    const SolverConfig cfg = make_config(flags, pr, method, flags.eta);
    const ConvergenceReport rep = solve(pr, cfg);

    const double psnr_blurred = psnr(x, pr.c);
    const double psnr_restored = psnr(x, rep.x);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    io::write_pgm(dir / "blurred.pgm", GrayImage::from_matrix(pr.c, original.max_value()));
    io::write_pgm(dir / "restored.pgm", GrayImage::from_matrix(rep.x, original.max_value()));
    write_trace(dir / "trace.csv", rep);

    out << "method=" << to_string(method) << " n=" << n << " tau1=" << cfg.tau1 << " tau2=" << cfg.tau2
        << " iterations=" << rep.iterations << " termination=" << to_string(rep.reason) << '\n';
    out << "psnr_blurred=" << format_number(psnr_blurred)
        << " psnr_restored=" << format_number(psnr_restored) << '\n';
    return exit_code(rep.reason);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Randomized Kaczmarz solvers for A X B = C", "kaczmarz"};
    app.require_subcommand(1);

    GenFlags gen;
    std::string gen_out = ".";
    auto* generate = app.add_subcommand("generate", "write a synthetic or blur problem to a directory");
    add_generation_flags(generate, gen);
    generate->add_option("--seed", gen.seed)->capture_default_str();
    generate->add_option("--out", gen_out, "output directory")->capture_default_str();

    SolverFlags solve_flags;
    std::string problem_dir, trace_path, record_path;
    auto* solve_cmd = app.add_subcommand("solve", "run one solver on a problem directory");
    solve_cmd->add_option("--problem", problem_dir, "directory written by generate")->required();
    add_solver_flags(solve_cmd, solve_flags);
    solve_cmd->add_option("--out", trace_path, "trace CSV path");
    solve_cmd->add_option("--record", record_path, "run-record CSV path");

    BenchFlags bench;
    GenFlags bench_gen;
    SolverFlags bench_flags;
    std::string bench_out;
    auto* bench_cmd = app.add_subcommand("benchmark", "repeat runs over methods and stepsizes");
    bench_cmd->add_option("--problem", bench.problem_dir, "directory written by generate");
    add_generation_flags(bench_cmd, bench_gen);
    add_solver_flags(bench_cmd, bench_flags);
    bench_cmd->add_option("--methods", bench.methods, "comma-separated methods")->delimiter(',');
    bench_cmd->add_option("--repeats", bench.repeats)->capture_default_str();
    bench_cmd->add_option("--eta-grid", bench.eta_grid, "start:step:stop");
    bench_cmd->add_option("--parallel-repeats", bench.parallel_repeats,
                          "run this many repeats concurrently");
    bench_cmd->add_option("--problem-seed", bench_gen.seed, "seed for generated problems")
        ->capture_default_str();
    bench_cmd->add_option("--summary", bench.summary_path, "summary CSV path");
    bench_cmd->add_option("--out", bench_out, "run-record CSV path");

    DeblurFlags deblur;
    SolverFlags deblur_flags;
    std::string deblur_out = ".";
    auto* deblur_cmd = app.add_subcommand("deblur", "blur an image and restore it");
    deblur_cmd->add_option("--image", deblur.image, "square PGM (default: checkerboard)");
    deblur_cmd->add_option("--size", deblur.size, "checkerboard side")->capture_default_str();
    deblur_cmd->add_option("--tile", deblur.tile, "checkerboard tile side")->capture_default_str();
    deblur_cmd->add_option("--r", deblur.r, "blur bandwidth")->capture_default_str();
    deblur_cmd->add_option("--sigma", deblur.sigma, "Gaussian blur width")->capture_default_str();
    deblur_cmd->add_flag("--identity-blur", deblur.identity, "use A = B = I");
    add_solver_flags(deblur_cmd, deblur_flags);
    deblur_cmd->add_option("--out", deblur_out, "output directory")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kConverged : kError;
    }

    try {
        if (*generate) return cmd_generate(gen, gen_out, out);
        if (*solve_cmd)
            return cmd_solve(problem_dir, solve_flags, solve_cmd->count("--seed") > 0, trace_path,
                             record_path, out);
        if (*bench_cmd) return cmd_benchmark(bench, bench_gen, bench_flags, bench_out, out);
        if (*deblur_cmd) return cmd_deblur(deblur, deblur_flags, deblur_out, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

}  // namespace kaczmarz::cli
