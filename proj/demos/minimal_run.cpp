// Smallest useful program: run the model once on r-OneMax and print how long
// the optimum took to find.

#include <cstdio>

#include "rcga/engine.hpp"

int main() {
    rcga::RunConfig cfg;
    cfg.n = 50;
    cfg.r = 4;
    cfg.K = 300.0;
    cfg.fitness = rcga::FitnessId::r_onemax;
    cfg.borders = rcga::BorderMode::unbordered;
    cfg.max_iterations = 1'000'000;

    const rcga::RunResult res = rcga::run(cfg, /*seed=*/7);
    std::printf("found_optimum=%s iterations=%llu best_fitness=%.0f\n",
                res.found_optimum ? "true" : "false",
                static_cast<unsigned long long>(res.iterations), res.best_fitness);

    // A batch over fresh seeds gives success statistics for the same setup.
    cfg.replications = 20;
    cfg.base_seed = 1;
    const rcga::BatchSummary batch = rcga::run_batch(cfg);
    std::printf("success_rate=%.2f mean_iterations=%.1f\n", batch.success_rate,
                batch.mean_iterations);
    return 0;
}
