// Command-line front end: single runs with optional frequency traces,
// (n, K) sweep tables, and the invariant verification report. All output is
// deterministic for a fixed invocation, including across thread counts.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcga/engine.hpp"
#include "rcga/verify.hpp"

namespace {

std::string fmt(const char* format, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, value);
    return buf;
}

// Writes either to a file or to stdout when the path is "-".
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::uint64_t sweep_cell_seed(std::uint64_t base, int n, double K, rcga::FitnessId fitness,
                              rcga::BorderMode mode) {
    std::uint64_t s = rcga::mix_seed(base, static_cast<std::uint64_t>(n));
    s = rcga::mix_seed(s, static_cast<std::uint64_t>(std::llround(K * 1024.0)));
    s = rcga::mix_seed(s, (fitness == rcga::FitnessId::g_onemax ? 2ULL : 0ULL) +
                              (mode == rcga::BorderMode::bordered ? 1ULL : 0ULL));
    return s;
}

struct RunArgs {
    int n = 100;
    int r = 3;
    double k = 500.0;
    std::string fitness = "r-onemax";
    bool borders = false;
    std::uint64_t seed = 1;
    std::uint64_t max_iters = 10'000'000;
    int trace_pos = -1;
    std::uint64_t trace_stride = 1;
    std::vector<double> monitor_levels;
    std::string out = "-";
};

int cmd_run(const RunArgs& args) {
    rcga::RunConfig cfg;
    cfg.n = args.n;
    cfg.r = args.r;
    cfg.K = args.k;
    cfg.fitness = rcga::parse_fitness_id(args.fitness);
    cfg.borders = args.borders ? rcga::BorderMode::bordered : rcga::BorderMode::unbordered;
    cfg.max_iterations = args.max_iters;
    cfg.monitor_levels = args.monitor_levels;
    if (args.trace_pos >= 0) cfg.trace = rcga::TraceOptions{args.trace_pos, args.trace_stride};

    const rcga::RunResult res = rcga::run(cfg, args.seed);

    std::printf("n=%d\n", cfg.n);
    std::printf("r=%d\n", cfg.r);
    std::printf("k=%s\n", fmt("%.10g", cfg.K).c_str());
    std::printf("fitness=%s\n", rcga::to_string(cfg.fitness));
    std::printf("borders=%d\n", args.borders ? 1 : 0);
    std::printf("seed=%" PRIu64 "\n", args.seed);
    std::printf("found_optimum=%s\n", res.found_optimum ? "true" : "false");
    std::printf("iterations=%" PRIu64 "\n", res.iterations);
    std::printf("evaluations=%" PRIu64 "\n", res.evaluations);
    std::printf("best_fitness=%s\n", fmt("%.10g", res.best_fitness).c_str());
    std::printf("negative_clamp_events=%" PRIu64 "\n", res.negative_clamp_events);
    if (!cfg.monitor_levels.empty())
        std::printf("excursions=%zu\n", res.excursions.size());

    if (cfg.trace) {
        OutputTarget target(args.out);
        std::ostream& os = target.stream();
        os << "iteration,value,frequency\n";
        for (const rcga::TraceRecord& rec : res.trace)
            for (int j = 0; j < cfg.r; ++j)
                os << rec.iteration << ',' << j << ',' << fmt("%.10g", rec.frequencies[j])
                   << '\n';
    }
    return 0;
}

struct SweepArgs {
    int r = 3;
    std::string fitness = "r-onemax";
    bool borders = false;
    int replications = 100;
    std::uint64_t seed = 1;
    int n_min = 100, n_max = 100, n_step = 100;
    double k_min = 200.0, k_max = 1000.0, k_step = 100.0;
    std::uint64_t max_iters = 10'000'000;
    int threads = 0;
    std::string out = "-";
};

int cmd_sweep(const SweepArgs& args) {
    if (args.n_min < 1 || args.n_min > args.n_max || args.n_step < 1)
        throw std::invalid_argument("sweep: bad n grid");
    if (!(args.k_min > 0.0) || args.k_min > args.k_max || !(args.k_step > 0.0))
        throw std::invalid_argument("sweep: bad K grid");

    const rcga::FitnessId fitness = rcga::parse_fitness_id(args.fitness);
    const rcga::BorderMode mode =
        args.borders ? rcga::BorderMode::bordered : rcga::BorderMode::unbordered;

    OutputTarget target(args.out);
    std::ostream& os = target.stream();
    os << "n,r,K,fitness,borders,replications,success_rate,mean_iterations,"
          "std_iterations,median_iterations\n";
    for (int n = args.n_min; n <= args.n_max; n += args.n_step) {
        const int k_cells =
            static_cast<int>(std::floor((args.k_max - args.k_min) / args.k_step + 1e-9)) + 1;
        for (int ki = 0; ki < k_cells; ++ki) {
            const double K = args.k_min + ki * args.k_step;
            rcga::RunConfig cfg;
            cfg.n = n;
            cfg.r = args.r;
            cfg.K = K;
            cfg.fitness = fitness;
            cfg.borders = mode;
            cfg.replications = args.replications;
            cfg.max_iterations = args.max_iters;
            cfg.base_seed = sweep_cell_seed(args.seed, n, K, fitness, mode);
            const rcga::BatchSummary summary = rcga::run_batch(cfg, args.threads);
            os << n << ',' << args.r << ',' << fmt("%.10g", K) << ','
               << rcga::to_string(fitness) << ',' << (args.borders ? 1 : 0) << ','
               << args.replications << ',' << fmt("%.4f", summary.success_rate) << ','
               << fmt("%.3f", summary.mean_iterations) << ','
               << fmt("%.3f", summary.std_iterations) << ','
               << fmt("%.3f", summary.median_iterations) << '\n';
        }
    }
    return 0;
}

struct VerifyArgs {
    rcga::VerifyOptions options;
    std::string out = "-";
};

int cmd_verify(const VerifyArgs& args) {
    const std::vector<rcga::CheckResult> results = rcga::run_verification(args.options);
    OutputTarget target(args.out);
    std::ostream& os = target.stream();
    os << "check_name,params,estimate,bound,pass\n";
    for (const rcga::CheckResult& check : results)
        os << check.name << ',' << check.params << ',' << fmt("%.12g", check.estimate) << ','
           << fmt("%.12g", check.bound) << ',' << rcga::to_string(check.status) << '\n';
    return rcga::all_checks_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"r-valued compact GA simulator and bound verification toolkit"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Single optimization run");
    run->add_option("--n", run_args.n, "Problem size (positions)")->capture_default_str();
    run->add_option("--r", run_args.r, "Values per position")->capture_default_str();
    run->add_option("--k", run_args.k, "Hypothetical population size K")->capture_default_str();
    run->add_option("--fitness", run_args.fitness, "Fitness function: r-onemax or g-onemax")
        ->capture_default_str();
    run->add_flag("--borders", run_args.borders, "Keep frequencies inside the border box");
    run->add_option("--seed", run_args.seed, "Random seed")->capture_default_str();
    run->add_option("--max-iters", run_args.max_iters, "Iteration budget")
        ->capture_default_str();
    run->add_option("--trace-pos", run_args.trace_pos,
                    "Record the frequency row at this position (-1: off)")
        ->capture_default_str();
    run->add_option("--trace-stride", run_args.trace_stride, "Iterations between trace rows")
        ->capture_default_str();
    run->add_option("--monitor-level", run_args.monitor_levels,
                    "Watch p_{i,r-1} for drift excursions below level-1/(2r)");
    run->add_option("--out", run_args.out, "Trace CSV destination (- for stdout)")
        ->capture_default_str();

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Replicated runs over an (n, K) grid");
    sweep->add_option("--r", sweep_args.r, "Values per position")->capture_default_str();
    sweep->add_option("--fitness", sweep_args.fitness, "Fitness function")
        ->capture_default_str();
    sweep->add_flag("--borders", sweep_args.borders, "Keep frequencies inside the border box");
    sweep->add_option("--replications", sweep_args.replications, "Runs per grid cell")
        ->capture_default_str();
    sweep->add_option("--seed", sweep_args.seed, "Base seed")->capture_default_str();
    sweep->add_option("--n-min", sweep_args.n_min, "Smallest n")->capture_default_str();
    sweep->add_option("--n-max", sweep_args.n_max, "Largest n")->capture_default_str();
    sweep->add_option("--n-step", sweep_args.n_step, "n grid step")->capture_default_str();
    sweep->add_option("--k-min", sweep_args.k_min, "Smallest K")->capture_default_str();
    sweep->add_option("--k-max", sweep_args.k_max, "Largest K")->capture_default_str();
    sweep->add_option("--k-step", sweep_args.k_step, "K grid step")->capture_default_str();
    sweep->add_option("--max-iters", sweep_args.max_iters, "Iteration budget per run")
        ->capture_default_str();
    sweep->add_option("--threads", sweep_args.threads, "Worker threads (0: hardware)")
        ->capture_default_str();
    sweep->add_option("--out", sweep_args.out, "CSV destination (- for stdout)")
        ->capture_default_str();

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "Invariant and bound verification report");
    verify->add_option("--n-list", verify_args.options.n_grid, "Problem sizes to test")
        ->delimiter(',')
        ->capture_default_str();
    verify->add_option("--r-list", verify_args.options.r_grid, "Value counts to test")
        ->delimiter(',')
        ->capture_default_str();
    verify->add_option("--k", verify_args.options.K, "Population size K")
        ->capture_default_str();
    verify->add_option("--pzero-samples", verify_args.options.pzero_samples,
                       "Monte Carlo samples for P[D_i = 0]")
        ->capture_default_str();
    verify->add_option("--drift-samples", verify_args.options.drift_samples,
                       "Monte Carlo samples for step drift")
        ->capture_default_str();
    verify->add_option("--random-matrices", verify_args.options.random_matrices,
                       "Random frequency states per cell")
        ->capture_default_str();
    verify->add_option("--model-updates", verify_args.options.model_updates,
                       "Soak updates per model check")
        ->capture_default_str();
    verify->add_option("--seed", verify_args.options.seed, "Random seed")
        ->capture_default_str();
    verify->add_option("--out", verify_args.out, "Report CSV destination (- for stdout)")
        ->capture_default_str();
    verify->add_flag("--corrupt-bounds", verify_args.options.corrupt_bounds,
                     "Self-test hook: corrupt every bound so all checks fail")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (run_args.r < 2) throw std::invalid_argument("run: --r must be >= 2");
            if (run_args.n < 1) throw std::invalid_argument("run: --n must be >= 1");
            if (run_args.trace_pos >= run_args.n)
                throw std::invalid_argument("run: --trace-pos must be below --n");
            return cmd_run(run_args);
        }
        if (sweep->parsed()) {
            if (sweep_args.r < 2) throw std::invalid_argument("sweep: --r must be >= 2");
            return cmd_sweep(sweep_args);
        }
        return cmd_verify(verify_args);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
}
