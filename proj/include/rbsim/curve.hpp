#pragma once

#include <vector>

namespace rbsim {

/// Survival probability vs. circuit depth, optionally with standard errors.
struct DecayCurve {
    std::vector<int> depths;
    std::vector<double> values;
    std::vector<double> stderrs;  // empty for exact methods
};

}  // namespace rbsim
