#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rcga/individual.hpp"
#include "rcga/rng.hpp"

namespace rcga {

enum class BorderMode { unbordered, bordered };

inline const char* to_string(BorderMode m) {
    return m == BorderMode::unbordered ? "unbordered" : "bordered";
}

struct Borders {
    double lower;
    double upper;
};

// Margins that keep every value sampleable: frequencies are confined to
// [1/((r-1)n), 1 - 1/n]. A row at the upper border for one value still has
// exactly (r-1) * lower = 1/n of mass left for the others.
inline Borders frequency_borders(int n, int r) {
    return {1.0 / (static_cast<double>(r - 1) * n), 1.0 - 1.0 / n};
}

struct UpdateOutcome {
    // Whether any entry of the row moved.
    bool changed = false;
    // Realized gain of the winner's entry, in [0, 1/K]. Falls short of 1/K
    // only when a border (or the zero floor) absorbed part of the step.
    double effective_winner_increment = 0.0;
    // A loser entry would have dropped below -1e-12 and was clamped to zero
    // with the row renormalized. Only reachable in real arithmetic when K
    // is not a multiple of the row's granularity.
    bool negative_clamped = false;
};

namespace detail {

inline void clamp_increment(UpdateOutcome& out, double step) {
    if (out.effective_winner_increment < 0.0) out.effective_winner_increment = 0.0;
    if (out.effective_winner_increment > step) out.effective_winner_increment = step;
}

}  // namespace detail

// Plain +-1/K exchange between the winner and loser entries of one row.
// Real-arithmetic variant; exact integer rows are handled by FrequencyMatrix.
inline UpdateOutcome update_row_unbordered(std::span<double> row, int winner_val,
                                           int loser_val, double K) {
    UpdateOutcome out;
    if (winner_val == loser_val) return out;
    const double step = 1.0 / K;
    const double w0 = row[winner_val];
    const double raw_loser = row[loser_val] - step;
    out.changed = true;
    if (raw_loser < -1e-12) {
        // The loser entry held less than one step of mass. Clamp it to zero,
        // grant the winner the full step, and renormalize the surplus away.
        out.negative_clamped = true;
        row[winner_val] = w0 + step;
        row[loser_val] = 0.0;
        double sum = 0.0;
        for (double v : row) sum += v;
        for (double& v : row) v /= sum;
        out.effective_winner_increment = row[winner_val] - w0;
        detail::clamp_increment(out, step);
        return out;
    }
    row[loser_val] = raw_loser < 0.0 ? 0.0 : raw_loser;  // swallow rounding dust
    row[winner_val] = w0 + step;
    out.effective_winner_increment = step;
    // Rounding moves the row sum by at most an ulp per update; repair once
    // the drift becomes noticeable.
    double sum = 0.0;
    for (double v : row) sum += v;
    if (std::abs(sum - 1.0) > 1e-9) {
        for (double& v : row) v /= sum;
        out.effective_winner_increment = row[winner_val] - w0;
        detail::clamp_increment(out, step);
    }
    return out;
}

// Border-capped exchange. The raw +-1/K step is applied first; then
//  1. a loser entry that crossed the lower border is clamped back, with the
//     deficit taken from the other non-winner entries in proportion to their
//     slack above the border, and any shortfall taken out of the winner's
//     increment (this parks the winner exactly at the upper border);
//  2. a winner entry above the upper border is clamped, with the excess
//     handed to the other entries in proportion to their headroom.
// Only the loser entry can cross the lower border in one update, and the
// redistribution never pushes another entry over either border.
inline UpdateOutcome update_row_bordered(std::span<double> row, int winner_val,
                                         int loser_val, int n, double K) {
    UpdateOutcome out;
    if (winner_val == loser_val) return out;
    const int r = static_cast<int>(row.size());
    const auto [lo, hi] = frequency_borders(n, r);
    const double step = 1.0 / K;
    const double w0 = row[winner_val];
    const double l0 = row[loser_val];
    bool others_moved = false;

    row[winner_val] += step;
    row[loser_val] -= step;

    if (row[loser_val] < lo) {
        const double deficit = lo - row[loser_val];
        row[loser_val] = lo;
        double slack_total = 0.0;
        for (int c = 0; c < r; ++c)
            if (c != winner_val && c != loser_val && row[c] > lo) slack_total += row[c] - lo;
        if (slack_total >= deficit) {
            if (deficit > 0.0) {
                // keep >= 0 by the branch condition; the multiplicative form
                // keeps every donor at or above the border.
                const double keep = 1.0 - deficit / slack_total;
                for (int c = 0; c < r; ++c) {
                    if (c == winner_val || c == loser_val) continue;
                    const double slack = row[c] - lo;
                    if (slack > 0.0) {
                        row[c] = lo + slack * (keep > 0.0 ? keep : 0.0);
                        others_moved = true;
                    }
                }
            }
        } else {
            // Drain all slack; the remainder comes out of the winner's step,
            // which lands it exactly at the upper border.
            for (int c = 0; c < r; ++c) {
                if (c == winner_val || c == loser_val) continue;
                if (row[c] > lo) {
                    row[c] = lo;
                    others_moved = true;
                }
            }
            row[winner_val] -= deficit - slack_total;
        }
    }

    if (row[winner_val] > hi) {
        const double excess = row[winner_val] - hi;
        row[winner_val] = hi;
        double headroom_total = 0.0;
        for (int c = 0; c < r; ++c)
            if (c != winner_val) headroom_total += hi - row[c];
        if (headroom_total > 0.0) {
            const double keep = 1.0 - excess / headroom_total;
            for (int c = 0; c < r; ++c) {
                if (c == winner_val) continue;
                const double headroom = hi - row[c];
                if (headroom > 0.0) {
                    row[c] = hi - headroom * (keep > 0.0 ? keep : 0.0);
                    others_moved = true;
                }
            }
        }
    }

    // Park any accumulated rounding residual on the entry farthest from both
    // borders, so neither border is crossed by the repair.
    double sum = 0.0;
    for (double v : row) sum += v;
    if (std::abs(sum - 1.0) > 1e-9) {
        int best = 0;
        double best_margin = -1.0;
        for (int c = 0; c < r; ++c) {
            const double margin = std::min(row[c] - lo, hi - row[c]);
            if (margin > best_margin) {
                best_margin = margin;
                best = c;
            }
        }
        row[best] += 1.0 - sum;
        others_moved = true;
    }

    out.changed = row[winner_val] != w0 || row[loser_val] != l0 || others_moved;
    out.effective_winner_increment = row[winner_val] - w0;
    detail::clamp_increment(out, step);
    return out;
}

// n rows of r sampling frequencies, initialized uniform at 1/r. Unbordered
// rows with integral K divisible by r are kept as exact integer numerators
// over K (the well-behaved regime, where every frequency stays an exact
// multiple of 1/K and row sums are preserved exactly); bordered rows and
// non-divisible K use 64-bit floating point.
class FrequencyMatrix {
  public:
    FrequencyMatrix(int n, int r, double K, BorderMode mode)
        : n_(n), r_(r), k_(K), mode_(mode) {
        if (n < 1) throw std::invalid_argument("frequency matrix: n must be >= 1");
        if (r < 2) throw std::invalid_argument("frequency matrix: r must be >= 2");
        if (!(K > 0.0)) throw std::invalid_argument("frequency matrix: K must be positive");
        if (mode == BorderMode::bordered) {
            // Degenerate only for n = 1, where the lower border exceeds 1/r.
            [[maybe_unused]] const auto [lo, hi] = frequency_borders(n, r);
            assert(lo <= 1.0 / r && 1.0 / r <= hi);
        }
        exact_ = mode == BorderMode::unbordered && K <= 9.0e15 && K == std::floor(K) &&
                 static_cast<std::int64_t>(K) % r == 0;
        freq_.assign(static_cast<std::size_t>(n) * r, 1.0 / r);
        if (exact_) {
            k_int_ = static_cast<std::int64_t>(K);
            num_.assign(static_cast<std::size_t>(n) * r, k_int_ / r);
        }
    }

    // Non-uniform start (warm starts, frozen test states). Rows must satisfy
    // the mode's invariants; in the well-behaved regime every entry must be
    // a multiple of 1/K.
    static FrequencyMatrix from_rows(const std::vector<std::vector<double>>& rows, double K,
                                     BorderMode mode) {
        if (rows.empty()) throw std::invalid_argument("frequency matrix: no rows");
        const int n = static_cast<int>(rows.size());
        const int r = static_cast<int>(rows.front().size());
        FrequencyMatrix m(n, r, K, mode);
        const auto [lo, hi] = frequency_borders(n, r);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != r)
                throw std::invalid_argument("frequency matrix: ragged rows");
            double sum = 0.0;
            for (int j = 0; j < r; ++j) {
                const double p = rows[i][j];
                const bool in_range = mode == BorderMode::bordered
                                          ? p >= lo - 1e-12 && p <= hi + 1e-12
                                          : p >= 0.0 && p <= 1.0;
                if (!in_range) throw std::invalid_argument("frequency matrix: entry out of range");
                sum += p;
                m.freq_[static_cast<std::size_t>(i) * r + j] = p;
                if (m.exact_) {
                    const double scaled = p * K;
                    const std::int64_t numerator = std::llround(scaled);
                    if (std::abs(scaled - static_cast<double>(numerator)) > 1e-6)
                        throw std::invalid_argument(
                            "frequency matrix: entry is not a multiple of 1/K");
                    m.num_[static_cast<std::size_t>(i) * r + j] = numerator;
                }
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("frequency matrix: row does not sum to 1");
        }
        return m;
    }

    int positions() const { return n_; }
    int values() const { return r_; }
    double k() const { return k_; }
    BorderMode mode() const { return mode_; }
    // Exact integer-numerator storage in effect.
    bool integer_exact() const { return exact_; }
    Borders borders() const { return frequency_borders(n_, r_); }

    double at(int i, int j) const { return freq_[static_cast<std::size_t>(i) * r_ + j]; }

    std::span<const double> row(int i) const {
        return {freq_.data() + static_cast<std::size_t>(i) * r_, static_cast<std::size_t>(r_)};
    }

    // Exact numerator over K; only meaningful when integer_exact().
    std::int64_t numerator(int i, int j) const {
        if (!exact_) throw std::logic_error("frequency matrix: no exact numerators in this mode");
        return num_[static_cast<std::size_t>(i) * r_ + j];
    }

    // Shift row `position` one step toward winner_val, away from loser_val.
    UpdateOutcome apply_update(int position, int winner_val, int loser_val) {
        if (position < 0 || position >= n_)
            throw std::invalid_argument("frequency matrix: position out of range");
        if (winner_val < 0 || winner_val >= r_ || loser_val < 0 || loser_val >= r_)
            throw std::invalid_argument("frequency matrix: value out of range");
        if (exact_) {
            UpdateOutcome out;
            if (winner_val == loser_val) return out;
            const std::size_t base = static_cast<std::size_t>(position) * r_;
            if (num_[base + loser_val] <= 0)
                throw std::logic_error("frequency matrix: loser entry holds no mass");
            ++num_[base + winner_val];
            --num_[base + loser_val];
            freq_[base + winner_val] = static_cast<double>(num_[base + winner_val]) / k_;
            freq_[base + loser_val] = static_cast<double>(num_[base + loser_val]) / k_;
            out.changed = true;
            out.effective_winner_increment = 1.0 / k_;
            return out;
        }
        std::span<double> row{freq_.data() + static_cast<std::size_t>(position) * r_,
                              static_cast<std::size_t>(r_)};
        UpdateOutcome out = mode_ == BorderMode::bordered
                                ? update_row_bordered(row, winner_val, loser_val, n_, k_)
                                : update_row_unbordered(row, winner_val, loser_val, k_);
        if (out.negative_clamped) ++clamp_events_;
        return out;
    }

    // Times a loser entry underflowed zero and was clamped (real mode only).
    std::uint64_t negative_clamp_events() const { return clamp_events_; }

    // Largest |row sum - 1| across rows; exact zero in integer mode.
    double max_row_sum_error() const {
        if (exact_) {
            std::int64_t worst = 0;
            for (int i = 0; i < n_; ++i) {
                std::int64_t sum = 0;
                for (int j = 0; j < r_; ++j) sum += num_[static_cast<std::size_t>(i) * r_ + j];
                worst = std::max(worst, std::abs(sum - k_int_));
            }
            return static_cast<double>(worst) / k_;
        }
        double worst = 0.0;
        for (int i = 0; i < n_; ++i) {
            double sum = 0.0;
            for (int j = 0; j < r_; ++j) sum += freq_[static_cast<std::size_t>(i) * r_ + j];
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        return worst;
    }

  private:
    int n_;
    int r_;
    double k_;
    BorderMode mode_;
    bool exact_ = false;
    std::int64_t k_int_ = 0;
    std::vector<double> freq_;
    std::vector<std::int64_t> num_;
    std::uint64_t clamp_events_ = 0;
};

// Draw values for one individual, one categorical draw per position.
template <typename Urbg>
void sample_values_into(const FrequencyMatrix& m, Urbg& rng, std::vector<int>& out) {
    const int n = m.positions();
    out.resize(n);
    for (int i = 0; i < n; ++i) out[i] = sample_categorical(m.row(i), unit_double(rng));
}

template <typename Urbg>
Individual sample_individual(const FrequencyMatrix& m, Urbg& rng) {
    Individual ind;
    sample_values_into(m, rng, ind.values);
    return ind;
}

}  // namespace rcga
