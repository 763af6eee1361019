#ifndef CHIRAL_CHECKS_HPP
#define CHIRAL_CHECKS_HPP

#include "chiral/geometry.hpp"

#include <string>
#include <vector>

namespace chiral {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // measured deviation or statistic
    double tolerance = 0.0;  // bound the value was compared against
    std::string detail;
};

struct CheckOptions {
    bool hermitian_only = false;
    int band_points = 101;
    int band_cutoff = 500;
    int zak_points = 200;
};

// Property suite run by `chiral check`: coupling identities, propagation
// invariants and (for helices) band and Zak-phase constraints.
std::vector<CheckResult> run_invariant_suite(const EmitterGeometry& geom, const CheckOptions& options = {});

}  // namespace chiral

#endif
