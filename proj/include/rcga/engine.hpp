#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rcga/fitness.hpp"
#include "rcga/frequency_matrix.hpp"
#include "rcga/parallel.hpp"
#include "rcga/rng.hpp"
#include "rcga/stats.hpp"

namespace rcga {

struct TraceOptions {
    int position = 0;
    std::uint64_t stride = 1;
};

struct RunConfig {
    int n = 100;
    int r = 3;
    double K = 500.0;
    FitnessId fitness = FitnessId::r_onemax;
    BorderMode borders = BorderMode::unbordered;
    std::uint64_t base_seed = 1;
    int replications = 100;
    std::uint64_t max_iterations = 10'000'000;
    // When set, the full frequency row at this position is recorded every
    // `stride` iterations (plus the initial and final states).
    std::optional<TraceOptions> trace;
    // Reference frequency levels watched for genetic-drift excursions of
    // p_{i, r-1}; empty disables tracking.
    std::vector<double> monitor_levels;
};

struct TraceRecord {
    std::uint64_t iteration;
    std::vector<double> frequencies;
};

// First drop below level - 1/(2r) after the watched frequency reached level.
struct DriftExcursion {
    int position;
    double level;
    std::uint64_t iteration;
};

struct RunResult {
    bool found_optimum = false;
    std::uint64_t iterations = 0;
    std::uint64_t evaluations = 0;
    double best_fitness = 0.0;
    std::vector<int> best_values;
    std::vector<TraceRecord> trace;
    std::vector<DriftExcursion> excursions;
    std::uint64_t negative_clamp_events = 0;
};

// Watches one frequency series against a set of reference levels. A level is
// armed once the series reaches it; the first later value below level - gap
// records an excursion for that level, at most once per level.
class ExcursionTracker {
  public:
    ExcursionTracker(std::span<const double> levels, double gap, int position)
        : levels_(levels.begin(), levels.end()),
          gap_(gap),
          position_(position),
          state_(levels_.size(), State::waiting) {
        for (double level : levels_)
            if (!(level > 0.0 && level <= 1.0))
                throw std::invalid_argument("excursion tracker: levels must lie in (0, 1]");
        if (!(gap > 0.0)) throw std::invalid_argument("excursion tracker: gap must be positive");
    }

    void observe(double value, std::uint64_t iteration) {
        for (std::size_t k = 0; k < levels_.size(); ++k) {
            if (state_[k] == State::waiting && value >= levels_[k]) state_[k] = State::armed;
            if (state_[k] == State::armed && value < levels_[k] - gap_) {
                state_[k] = State::recorded;
                found_.push_back({position_, levels_[k], iteration});
            }
        }
    }

    const std::vector<DriftExcursion>& excursions() const { return found_; }

  private:
    enum class State { waiting, armed, recorded };
    std::vector<double> levels_;
    double gap_;
    int position_;
    std::vector<State> state_;
    std::vector<DriftExcursion> found_;
};

// Offline scan of a recorded frequency series (series[t] is the value at
// iteration t) with the r-derived gap 1/(2r).
inline std::vector<DriftExcursion> monitor_excursions(std::span<const double> series,
                                                      std::span<const double> levels, int r,
                                                      int position = 0) {
    if (r < 2) throw std::invalid_argument("monitor_excursions: r must be >= 2");
    ExcursionTracker tracker(levels, 1.0 / (2.0 * r), position);
    for (std::size_t t = 0; t < series.size(); ++t) tracker.observe(series[t], t);
    return tracker.excursions();
}

// One full iteration: sample two offspring, rank them (a tie keeps the first
// as winner), and shift every row one step toward the winner. Returns the
// pair, winner first.
template <typename Urbg>
std::pair<Individual, Individual> step(FrequencyMatrix& m, const FitnessFunction& f, Urbg& rng) {
    Individual x = sample_individual(m, rng);
    Individual y = sample_individual(m, rng);
    evaluate(f, x);
    evaluate(f, y);
    if (x.fitness < y.fitness) std::swap(x, y);
    for (int i = 0; i < m.positions(); ++i) m.apply_update(i, x.values[i], y.values[i]);
    return {std::move(x), std::move(y)};
}

// Full optimization run. Samples two offspring per iteration, stops in the
// first iteration that samples an optimum (that iteration's frequency update
// is skipped), and otherwise runs out the budget; exhausting the budget is a
// result, not an error. Identical (config, seed) pairs give bit-identical
// results. A warm-start matrix, when given, replaces the uniform start and
// must match the config's shape.
inline RunResult run(const RunConfig& cfg, std::uint64_t seed,
                     const FrequencyMatrix* warm_start = nullptr) {
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("run: max_iterations must be >= 1");
    if (cfg.trace) {
        if (cfg.trace->position < 0 || cfg.trace->position >= cfg.n)
            throw std::invalid_argument("run: trace position out of range");
        if (cfg.trace->stride < 1) throw std::invalid_argument("run: trace stride must be >= 1");
    }
    FrequencyMatrix m = warm_start ? *warm_start
                                   : FrequencyMatrix(cfg.n, cfg.r, cfg.K, cfg.borders);
    if (m.positions() != cfg.n || m.values() != cfg.r)
        throw std::invalid_argument("run: warm start shape differs from config");
    const FitnessFunction f(cfg.fitness, cfg.n, cfg.r);
    Rng rng(seed);
    RunResult res;

    std::vector<ExcursionTracker> trackers;
    if (!cfg.monitor_levels.empty()) {
        trackers.reserve(cfg.n);
        for (int i = 0; i < cfg.n; ++i)
            trackers.emplace_back(cfg.monitor_levels, 1.0 / (2.0 * cfg.r), i);
        for (int i = 0; i < cfg.n; ++i) trackers[i].observe(m.at(i, cfg.r - 1), 0);
    }

    const int trace_pos = cfg.trace ? cfg.trace->position : 0;
    std::uint64_t last_recorded = 0;
    auto record_trace = [&](std::uint64_t iteration) {
        const auto row = m.row(trace_pos);
        res.trace.push_back({iteration, {row.begin(), row.end()}});
        last_recorded = iteration;
    };
    if (cfg.trace) record_trace(0);

    Individual x, y;
    res.best_fitness = -std::numeric_limits<double>::infinity();
    std::uint64_t last_update = 0;
    for (std::uint64_t t = 1; t <= cfg.max_iterations; ++t) {
        sample_values_into(m, rng, x.values);
        sample_values_into(m, rng, y.values);
        evaluate(f, x);
        evaluate(f, y);
        const Individual& better = x.fitness >= y.fitness ? x : y;
        if (better.fitness > res.best_fitness) {
            res.best_fitness = better.fitness;
            res.best_values = better.values;
        }
        if (f.is_optimal(x.fitness) || f.is_optimal(y.fitness)) {
            res.found_optimum = true;
            res.iterations = t;
            break;
        }
        if (x.fitness < y.fitness) std::swap(x, y);
        for (int i = 0; i < cfg.n; ++i) m.apply_update(i, x.values[i], y.values[i]);
        last_update = t;
        if (cfg.trace && t % cfg.trace->stride == 0) record_trace(t);
        if (!trackers.empty())
            for (int i = 0; i < cfg.n; ++i) trackers[i].observe(m.at(i, cfg.r - 1), t);
    }
    if (!res.found_optimum) res.iterations = cfg.max_iterations;
    res.evaluations = 2 * res.iterations;
    // Make sure the trace ends with the state after the last applied update.
    if (cfg.trace && last_recorded != last_update) record_trace(last_update);
    for (const auto& tracker : trackers)
        res.excursions.insert(res.excursions.end(), tracker.excursions().begin(),
                              tracker.excursions().end());
    res.negative_clamp_events = m.negative_clamp_events();
    return res;
}

struct BatchSummary {
    int replications = 0;
    int successes = 0;
    double success_rate = 0.0;
    // Iteration statistics over successful runs only; NaN when none succeed.
    double mean_iterations = std::numeric_limits<double>::quiet_NaN();
    double std_iterations = std::numeric_limits<double>::quiet_NaN();
    double median_iterations = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::uint64_t> seeds;
    std::vector<RunResult> results;
};

// Independent replications of run(). Replication s uses the decorrelated
// seed mix_seed(base_seed, s), so the batch is reproducible and can execute
// on any number of threads with identical results.
inline BatchSummary run_batch(const RunConfig& cfg, int threads = 0) {
    if (cfg.replications < 1) throw std::invalid_argument("run_batch: replications must be >= 1");
    BatchSummary summary;
    summary.replications = cfg.replications;
    summary.seeds.resize(cfg.replications);
    summary.results.resize(cfg.replications);
    for (int s = 0; s < cfg.replications; ++s) summary.seeds[s] = mix_seed(cfg.base_seed, s);
    parallel_for(cfg.replications, threads,
                 [&](int s) { summary.results[s] = run(cfg, summary.seeds[s]); });
    std::vector<double> iterations;
    iterations.reserve(cfg.replications);
    for (const RunResult& res : summary.results)
        if (res.found_optimum) iterations.push_back(static_cast<double>(res.iterations));
    summary.successes = static_cast<int>(iterations.size());
    summary.success_rate = static_cast<double>(summary.successes) / cfg.replications;
    if (!iterations.empty()) {
        summary.mean_iterations = mean(iterations);
        summary.std_iterations = sample_std(iterations);
        summary.median_iterations = median(iterations);
    }
    return summary;
}

}  // namespace rcga
