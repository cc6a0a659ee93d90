#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rcga/fitness.hpp"
#include "rcga/frequency_matrix.hpp"
#include "rcga/rng.hpp"

namespace rcga {

// Per-position contribution map value -> score. The identity map gives
// g-onemax ranking semantics; the top-value indicator gives r-onemax. Any
// map bounded by [0, r-1] defines a valid ranking for the oracle below.
struct ContributionSpec {
    std::vector<int> table;

    explicit ContributionSpec(std::vector<int> t) : table(std::move(t)) {
        const int r = static_cast<int>(table.size());
        if (r < 2) throw std::invalid_argument("contribution: need at least two values");
        for (int c : table)
            if (c < 0 || c > r - 1)
                throw std::invalid_argument("contribution: entries must lie in [0, r-1]");
    }

    static ContributionSpec identity(int r) {
        std::vector<int> t(r);
        for (int v = 0; v < r; ++v) t[v] = v;
        return ContributionSpec(std::move(t));
    }

    static ContributionSpec indicator_top(int r) {
        std::vector<int> t(r, 0);
        t[r - 1] = 1;
        return ContributionSpec(std::move(t));
    }

    static ContributionSpec for_fitness(FitnessId id, int r) {
        return id == FitnessId::g_onemax ? identity(r) : indicator_top(r);
    }

    int r() const { return static_cast<int>(table.size()); }
    int operator()(int v) const { return table[v]; }

    bool is_identity() const {
        for (int v = 0; v < r(); ++v)
            if (table[v] != v) return false;
        return true;
    }

    // Largest possible |c(a) - c(b)|; r-1 for the identity map.
    int spread() const {
        const auto [lo, hi] = std::minmax_element(table.begin(), table.end());
        return *hi - *lo;
    }
};

// Exact law of D_i = sum_{j != i} (c(x_j) - c(y_j)) for a frozen matrix:
// the scoring advantage the rest of the string hands x over y when both are
// sampled from m. Support is the integer range [-radius, radius].
struct DiDistribution {
    int radius = 0;
    std::vector<double> mass;  // index d + radius

    double at(int d) const {
        return d < -radius || d > radius ? 0.0 : mass[static_cast<std::size_t>(d + radius)];
    }
    double p_zero() const { return mass[static_cast<std::size_t>(radius)]; }
};

// Dynamic-programming convolution of the n-1 per-position difference laws.
// Cost is O(n^2 * spread^2); guarded at n * spread <= 1e4, which covers the
// identity map up to n(r-1) = 1e4.
inline DiDistribution exact_di_distribution(const FrequencyMatrix& m, int position,
                                            const ContributionSpec& c) {
    const int n = m.positions();
    const int r = m.values();
    if (c.r() != r) throw std::invalid_argument("di oracle: contribution arity differs from r");
    if (position < 0 || position >= n)
        throw std::invalid_argument("di oracle: position out of range");
    const int spread = c.spread();
    if (static_cast<long long>(n) * spread > 10'000)
        throw std::invalid_argument("di oracle: n * contribution spread exceeds 1e4");

    DiDistribution dist;
    dist.mass = {1.0};
    if (spread == 0 || n == 1) return dist;

    std::vector<double> diff(static_cast<std::size_t>(2 * spread + 1));
    std::vector<double> next;
    for (int j = 0; j < n; ++j) {
        if (j == position) continue;
        std::fill(diff.begin(), diff.end(), 0.0);
        const auto row = m.row(j);
        for (int a = 0; a < r; ++a) {
            const double pa = row[a];
            if (pa == 0.0) continue;
            for (int b = 0; b < r; ++b) {
                const double pb = row[b];
                if (pb == 0.0) continue;
                diff[static_cast<std::size_t>(c(a) - c(b) + spread)] += pa * pb;
            }
        }
        next.assign(dist.mass.size() + 2 * spread, 0.0);
        for (std::size_t d = 0; d < dist.mass.size(); ++d) {
            const double md = dist.mass[d];
            if (md == 0.0) continue;
            for (int e = 0; e <= 2 * spread; ++e) next[d + e] += md * diff[e];
        }
        dist.mass.swap(next);
        dist.radius += spread;
    }
    return dist;
}

// Closed-form floor on P[D_i = 0] under identity contributions, valid for
// arbitrary frequencies at large n: 4 / (9 (2(r-1) sqrt(3n) + 1)).
inline double lemma_di_zero_bound(int n, int r) {
    return 4.0 / (9.0 * (2.0 * (r - 1) * std::sqrt(3.0 * n) + 1.0));
}

struct DriftReport {
    double estimate = 0.0;
    double standard_error = 0.0;
    long long sample_count = 0;
    double bound = 0.0;
    // estimate >= bound - 3 * standard_error
    bool satisfied = false;
};

// Monte Carlo estimate of P[D_i = 0] with a binomial standard error,
// reported against the closed-form floor.
template <typename Urbg>
DriftReport mc_di_zero(const FrequencyMatrix& m, int position, const ContributionSpec& c,
                       long long samples, Urbg& rng) {
    const int n = m.positions();
    if (c.r() != m.values()) throw std::invalid_argument("mc_di_zero: contribution arity");
    if (position < 0 || position >= n) throw std::invalid_argument("mc_di_zero: position");
    if (samples < 1) throw std::invalid_argument("mc_di_zero: need at least one sample");
    long long zeros = 0;
    for (long long s = 0; s < samples; ++s) {
        long long d = 0;
        for (int j = 0; j < n; ++j) {
            if (j == position) continue;
            const auto row = m.row(j);
            d += c(sample_categorical(row, unit_double(rng)));
            d -= c(sample_categorical(row, unit_double(rng)));
        }
        zeros += (d == 0);
    }
    DriftReport report;
    report.sample_count = samples;
    report.estimate = static_cast<double>(zeros) / static_cast<double>(samples);
    report.standard_error =
        std::sqrt(report.estimate * (1.0 - report.estimate) / static_cast<double>(samples));
    report.bound = lemma_di_zero_bound(n, m.values());
    report.satisfied = report.estimate >= report.bound - 3.0 * report.standard_error;
    return report;
}

// Per-step drift floors for the top-value frequency at 1/K <= p <= 1 - 1/K.
inline double lemma_drift_bound_gonemax(int n, int r, double K, double p) {
    return 8.0 * p * (1.0 - p) / (9.0 * K * (2.0 * (r - 1) * std::sqrt(3.0 * n) + 1.0));
}

// Total sampling variance of the top value: V = sum_i p_{i,r-1}(1 - p_{i,r-1}).
inline double sampling_variance_top(const FrequencyMatrix& m) {
    double v = 0.0;
    const int top = m.values() - 1;
    for (int i = 0; i < m.positions(); ++i) {
        const double p = m.at(i, top);
        v += p * (1.0 - p);
    }
    return v;
}

inline double lemma_drift_bound_ronemax(double K, double p, double V) {
    return (8.0 / 9.0) * p * (1.0 - p) / (K * (2.0 * std::sqrt(3.0 * V) + 1.0));
}

namespace detail {

inline double matching_drift_bound(const FrequencyMatrix& m, const FitnessFunction& f, double p) {
    return f.id == FitnessId::g_onemax
               ? lemma_drift_bound_gonemax(m.positions(), m.values(), m.k(), p)
               : lemma_drift_bound_ronemax(m.k(), p, sampling_variance_top(m));
}

}  // namespace detail

// Monte Carlo estimate of the one-step drift E[delta p_{i,r-1}] from the
// frozen state m: each sample replays a full selection step and reads off
// the raw +-1/K movement of the top-value frequency at `position`. Requires
// 1/K <= p_{i,r-1} <= 1 - 1/K (the degenerate p in {0, 1}, where the drift
// is identically zero, is allowed for completeness checks).
template <typename Urbg>
DriftReport mc_step_drift(const FrequencyMatrix& m, const FitnessFunction& f, int position,
                          long long samples, Urbg& rng) {
    const int n = m.positions();
    const int r = m.values();
    if (f.n != n || f.r != r) throw std::invalid_argument("mc_step_drift: fitness shape");
    if (position < 0 || position >= n) throw std::invalid_argument("mc_step_drift: position");
    if (samples < 1) throw std::invalid_argument("mc_step_drift: need at least one sample");
    const double K = m.k();
    const double p = m.at(position, r - 1);
    if (!(p == 0.0 || p == 1.0) && (p < 1.0 / K - 1e-12 || p > 1.0 - 1.0 / K + 1e-12))
        throw std::invalid_argument("mc_step_drift: p_{i,r-1} outside [1/K, 1-1/K]");

    std::vector<int> x, y;
    const int top = r - 1;
    double sum = 0.0, sum_sq = 0.0;
    for (long long s = 0; s < samples; ++s) {
        sample_values_into(m, rng, x);
        sample_values_into(m, rng, y);
        const double fx = evaluate(f, std::span<const int>(x));
        const double fy = evaluate(f, std::span<const int>(y));
        const bool x_wins = fx >= fy;
        const int w = x_wins ? x[position] : y[position];
        const int l = x_wins ? y[position] : x[position];
        const double delta = (static_cast<double>(w == top) - static_cast<double>(l == top)) / K;
        sum += delta;
        sum_sq += delta * delta;
    }
    DriftReport report;
    report.sample_count = samples;
    report.estimate = sum / static_cast<double>(samples);
    const double var =
        samples > 1
            ? std::max(0.0, (sum_sq - static_cast<double>(samples) * report.estimate *
                                          report.estimate) /
                                static_cast<double>(samples - 1))
            : 0.0;
    report.standard_error = std::sqrt(var / static_cast<double>(samples));
    report.bound = detail::matching_drift_bound(m, f, p);
    report.satisfied = report.estimate >= report.bound - 3.0 * report.standard_error;
    return report;
}

// Exact one-step drift of p_{i,r-1} for the unbordered process, obtained by
// marginalizing position i against the exact D_i law of the rest: x wins
// exactly when D_i + c(x_i) - c(y_i) >= 0 (ties keep x).
inline double exact_step_drift(const FrequencyMatrix& m, int position,
                               const ContributionSpec& c) {
    const int r = m.values();
    const int top = r - 1;
    const double K = m.k();
    const DiDistribution dist = exact_di_distribution(m, position, c);
    const auto row = m.row(position);
    double drift = 0.0;
    for (int a = 0; a < r; ++a) {
        const double pa = row[a];
        if (pa == 0.0) continue;
        for (int b = 0; b < r; ++b) {
            if (a == b || (a != top && b != top)) continue;  // no top movement
            const double pb = row[b];
            if (pb == 0.0) continue;
            const int local = c(a) - c(b);
            double pair_drift = 0.0;
            for (int d = -dist.radius; d <= dist.radius; ++d) {
                const double mass = dist.at(d);
                if (mass == 0.0) continue;
                const bool x_wins = d + local >= 0;
                const int w = x_wins ? a : b;
                const int l = x_wins ? b : a;
                pair_drift +=
                    mass * (static_cast<double>(w == top) - static_cast<double>(l == top));
            }
            drift += pa * pb * pair_drift;
        }
    }
    return drift / K;
}

enum class PotentialVariant { plain, bordered };

struct Potential {
    double value = 0.0;
    PotentialVariant variant = PotentialVariant::plain;
};

// phi = sum_i (1 - p_{i,r-1}): distance of the top-value frequencies from
// fixation. Zero exactly at the degenerate optimum matrix; at most n.
inline Potential potential_phi(const FrequencyMatrix& m) {
    double phi = 0.0;
    const int top = m.values() - 1;
    for (int i = 0; i < m.positions(); ++i) phi += 1.0 - m.at(i, top);
    return {phi, PotentialVariant::plain};
}

// Bordered variant: per position, the gap below 1 - 1/n - 1/K (zero once the
// frequency is within one step of the upper border).
inline Potential potential_phi_bordered(const FrequencyMatrix& m, int n, double K) {
    double phi = 0.0;
    const double threshold = 1.0 - 1.0 / n - 1.0 / K;
    const int top = m.values() - 1;
    for (int i = 0; i < m.positions(); ++i)
        phi += std::max(0.0, threshold - m.at(i, top));
    return {phi, PotentialVariant::bordered};
}

struct PhiDriftBound {
    double value = 0.0;
    // The phi-side precondition (phi >= 1/2 plain, phi >= 1e4 bordered).
    // The derivations additionally assume all p_{i,r-1} >= 1/4, which only
    // the caller can check; the bound value is returned either way for
    // exploratory use.
    bool phi_in_range = false;
};

// Expected per-iteration decrease of phi: sqrt(phi)/(30K) without borders,
// sqrt(phi)/(66K) with them.
inline PhiDriftBound phi_drift_bound(const Potential& phi, double K) {
    if (phi.value < 0.0) throw std::invalid_argument("phi_drift_bound: negative potential");
    if (!(K > 0.0)) throw std::invalid_argument("phi_drift_bound: K must be positive");
    const double denom = (phi.variant == PotentialVariant::plain ? 30.0 : 66.0) * K;
    PhiDriftBound bound;
    bound.value = std::sqrt(phi.value) / denom;
    bound.phi_in_range = phi.variant == PotentialVariant::plain ? phi.value >= 0.5
                                                                : phi.value >= 10'000.0;
    return bound;
}

struct MgfCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

// Sub-Gaussian envelope check for the three-point step model at one
// frequency: delta is +1/K with probability z(1 + K eps/(2z)), -1/K with
// probability z(1 - K eps/(2z)), else 0, where z = p(1-p). Verifies
//   E[exp(lambda (delta - eps))] <= exp(lambda^2/2 (4z/K^2 + 2 eps/K))
// exactly, for 0 <= lambda <= K and |K eps / (2z)| <= 1.
inline MgfCheck mgf_subgaussian_check(double p, double epsilon, double K, double lambda) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mgf check: p outside [0, 1]");
    if (!(K > 0.0)) throw std::invalid_argument("mgf check: K must be positive");
    if (!(lambda >= 0.0 && lambda <= K))
        throw std::invalid_argument("mgf check: lambda outside [0, K]");
    const double z = p * (1.0 - p);
    MgfCheck check;
    if (z == 0.0) {
        if (epsilon != 0.0)
            throw std::invalid_argument("mgf check: degenerate p requires zero drift");
        check.lhs = 1.0;
    } else {
        const double ratio = K * epsilon / (2.0 * z);
        if (std::abs(ratio) > 1.0 + 1e-12)
            throw std::invalid_argument("mgf check: |K eps / (2z)| exceeds 1");
        const double p_up = z * (1.0 + ratio);
        const double p_down = z * (1.0 - ratio);
        const double p_stay = 1.0 - 2.0 * z;
        check.lhs = std::exp(-lambda * epsilon) *
                    (p_up * std::exp(lambda / K) + p_down * std::exp(-lambda / K) + p_stay);
    }
    check.rhs = std::exp(0.5 * lambda * lambda * (4.0 * z / (K * K) + 2.0 * epsilon / K));
    check.satisfied = check.lhs <= check.rhs * (1.0 + 1e-12);
    return check;
}

enum class StepKind { random_walk, biased, neutral };

inline const char* to_string(StepKind kind) {
    switch (kind) {
        case StepKind::random_walk: return "random-walk";
        case StepKind::biased: return "biased";
        default: return "neutral";
    }
}

// Step taxonomy at one position under identity contributions. Neutral when
// the offspring agree there (the frequency cannot move); biased when the
// rest of the string ties, or when the local value gap can overturn a small
// deficit; random-walk when the rest of the string decides the ranking on
// its own.
inline StepKind classify_step(std::span<const int> x, std::span<const int> y, int position,
                              const ContributionSpec& c) {
    if (!c.is_identity())
        throw std::invalid_argument("classify_step: defined for identity contributions only");
    if (x.size() != y.size()) throw std::invalid_argument("classify_step: length mismatch");
    const int n = static_cast<int>(x.size());
    if (position < 0 || position >= n) throw std::invalid_argument("classify_step: position");
    const int r = c.r();
    for (int j = 0; j < n; ++j)
        if (x[j] < 0 || x[j] >= r || y[j] < 0 || y[j] >= r)
            throw std::invalid_argument("classify_step: value out of range");

    if (x[position] == y[position]) return StepKind::neutral;
    long long d = 0;
    for (int j = 0; j < n; ++j)
        if (j != position) d += x[j] - y[j];
    if (d == 0) return StepKind::biased;
    if (d >= r - 1 || d < -(r - 1)) return StepKind::random_walk;
    return y[position] - x[position] > d ? StepKind::biased : StepKind::random_walk;
}

}  // namespace rcga
