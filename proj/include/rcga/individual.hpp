#pragma once

#include <vector>

namespace rcga {

// One sampled offspring. values[i] lies in {0, ..., r-1}; fitness is filled
// in by the evaluating function.
struct Individual {
    std::vector<int> values;
    double fitness = 0.0;
};

}  // namespace rcga
