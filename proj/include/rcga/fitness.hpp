#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "rcga/individual.hpp"

namespace rcga {

enum class FitnessId { r_onemax, g_onemax };

inline const char* to_string(FitnessId id) {
    return id == FitnessId::r_onemax ? "r-onemax" : "g-onemax";
}

inline FitnessId parse_fitness_id(const std::string& name) {
    if (name == "r-onemax") return FitnessId::r_onemax;
    if (name == "g-onemax") return FitnessId::g_onemax;
    throw std::invalid_argument("unknown fitness function: " + name +
                                " (expected r-onemax or g-onemax)");
}

// Multi-valued OneMax family on {0,...,r-1}^n. r-onemax counts positions
// holding the top value r-1; g-onemax sums the values themselves. Both are
// maximized by the all-(r-1)s string, and for r = 2 they coincide.
struct FitnessFunction {
    FitnessId id;
    int n;
    int r;

    FitnessFunction(FitnessId id_, int n_, int r_) : id(id_), n(n_), r(r_) {
        if (n < 1) throw std::invalid_argument("fitness: n must be >= 1");
        if (r < 2) throw std::invalid_argument("fitness: r must be >= 2");
    }

    // Score a single position's value contributes.
    int contribution(int v) const {
        return id == FitnessId::r_onemax ? (v == r - 1 ? 1 : 0) : v;
    }

    double max_fitness() const {
        return id == FitnessId::r_onemax ? static_cast<double>(n)
                                         : static_cast<double>(n) * (r - 1);
    }

    bool is_optimal(double fitness) const { return fitness == max_fitness(); }
};

inline double evaluate(const FitnessFunction& f, std::span<const int> values) {
    if (static_cast<int>(values.size()) != f.n)
        throw std::invalid_argument("evaluate: individual length differs from n");
    long long sum = 0;
    if (f.id == FitnessId::r_onemax) {
        for (int v : values) {
            if (v < 0 || v >= f.r) throw std::invalid_argument("evaluate: value out of range");
            sum += (v == f.r - 1);
        }
    } else {
        for (int v : values) {
            if (v < 0 || v >= f.r) throw std::invalid_argument("evaluate: value out of range");
            sum += v;
        }
    }
    return static_cast<double>(sum);
}

inline double evaluate(const FitnessFunction& f, Individual& ind) {
    ind.fitness = evaluate(f, std::span<const int>(ind.values));
    return ind.fitness;
}

}  // namespace rcga
