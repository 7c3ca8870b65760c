#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace divexp {

/// One family of cross-checks between independent evaluation routes.
struct OracleCheck {
    std::string name;
    bool passed;
    double worst;       ///< largest observed error (relative, or in stderr units)
    double tolerance;
    std::size_t cases;
};

struct OracleOptions {
    std::uint64_t seed = 20090301;
    std::size_t hg_samples = 100000;
};

/// Divided-difference method agreement, Hermite-Genocchi sampling and
/// quadrature, Oshanin-Yor and symmetric-node moments, moment brute force
/// and ODE residuals. Deterministic for a given seed.
std::vector<OracleCheck> run_oracle_suite(const OracleOptions& options = {});

}  // namespace divexp
