// verify.hpp — Self-verification battery: every cross-check between the
// independent computation routes, at desk scale.

#pragma once

#include <string>
#include <vector>

namespace rbsim::verify {

struct Check {
    std::string name;
    double tolerance;
    double observed;
    bool pass;
};

std::vector<Check> run_all();

}  // namespace rbsim::verify
