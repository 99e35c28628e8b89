#pragma once

#include "orlicz/young.hpp"

#include <string>
#include <vector>

namespace orlicz {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string function_label;
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

// The growth-and-conjugate inequality battery for one base function:
// splitting bound, scaling sandwich, norm-modular bounds, anchored H and An
// power bounds, doubling inheritance with its induced delta0, and the
// envelope sandwich.  Deterministic (fixed-seed sampling).
SuiteReport run_inequality_suite(const YoungFunction& Y, const std::string& label, int n);

// The six-member built-in family {t^p, t^p log(1+t) : p in 1.5, 2, 2.5}.
std::vector<std::pair<YoungFunction, std::string>> builtin_family();

} // namespace orlicz
