#pragma once

#include <cstddef>
#include <vector>

namespace divexp {

/// Exponential Brownian motion S(t) = exp((r - sigma^2/2) t + sigma B(t))
/// observed up to the horizon T.
class GbmParams {
public:
    /// Throws std::invalid_argument unless r is finite, sigma >= 0, T > 0.
    GbmParams(double r, double sigma, double T);

    double r() const { return r_; }
    double sigma() const { return sigma_; }
    double T() const { return T_; }
    double variance_rate() const { return sigma_ * sigma_; }

private:
    double r_;
    double sigma_;
    double T_;
};

/// b_k = k r + sigma^2 k (k - 1) / 2 for k = 0..m, the growth rates of
/// E S(t)^k. Unscaled by T.
std::vector<double> b_nodes(const GbmParams& p, std::size_t m);

}  // namespace divexp
