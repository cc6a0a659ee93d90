// Compares the exact per-step drift of a frequency entry against its proven
// lower bound, for a handful of states between uniform and nearly converged.

#include <cstdio>

#include "rcga/analysis.hpp"

int main() {
    const int n = 30;
    const int r = 3;
    const double K = 500.0;
    const rcga::FitnessFunction fitness(rcga::FitnessId::g_onemax, n, r);

    std::printf("%-10s %-14s %-14s\n", "p_top", "exact_drift", "lower_bound");
    for (const double p_top : {1.0 / r, 0.5, 0.8, 0.95}) {
        // Every row puts p_top on the best value and splits the rest evenly.
        std::vector<std::vector<double>> rows(n, std::vector<double>(r, (1.0 - p_top) / (r - 1)));
        for (auto& row : rows) row[r - 1] = p_top;
        const rcga::FrequencyMatrix m = rcga::FrequencyMatrix::from_rows(
            rows, K, rcga::BorderMode::unbordered);

        const rcga::ContributionSpec contrib =
            rcga::ContributionSpec::for_fitness(fitness.id, r);
        const double exact = rcga::exact_step_drift(m, /*position=*/0, contrib);
        const double bound = rcga::lemma_drift_bound_gonemax(n, r, K, p_top);
        std::printf("%-10.3f %-14.6e %-14.6e\n", p_top, exact, bound);
    }
    return 0;
}
