#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "divexp/gbm.hpp"

namespace divexp {

// Closed forms for S(T) and the time average A(T) = T^-1 int_0^T S(t) dt.
// Every quantity is routed through exp_dd, so r = 0 or sigma = 0 collapse to
// confluent nodes instead of dividing by zero.

double mean_S(const GbmParams& p);  ///< e^{rT}
double mean_A(const GbmParams& p);  ///< exp[0, rT]

/// E S(a) S(b) = exp(a (r + sigma^2) + b r) for 0 <= a <= b.
double pairwise_expectation(const GbmParams& p, double a, double b);

double cross_moment_SA(const GbmParams& p);  ///< exp[rT, (2r+sigma^2)T]
double second_moment_A(const GbmParams& p);  ///< 2 exp[0, rT, (2r+sigma^2)T]

/// The classical two-term expression for E A(T)^2. Throws std::domain_error
/// when r, r + sigma^2 or 2r + sigma^2 vanishes.
double hull_second_moment(const GbmParams& p);

double covariance_SA(const GbmParams& p);  ///< sigma^2 T exp[rT, 2rT, (2r+sigma^2)T]
double var_S(const GbmParams& p);          ///< sigma^2 T exp[2rT, (2r+sigma^2)T]
double var_A(const GbmParams& p);          ///< 2 sigma^2 T exp[0, rT, 2rT, (2r+sigma^2)T]

struct CorrelationReport {
    double R;
    double covariance;
    double var_S;
    double var_A;
    double s_statistic;  ///< S(rT, (2r+sigma^2)T); R = sqrt(S / 2)
};

/// Correlation of S(T) and A(T) from the quotient of exponential divided
/// differences. Throws std::domain_error when sigma = 0.
CorrelationReport correlation(const GbmParams& p);

/// S(r, a) = exp[a,2r,r]^2 / (exp[a,2r] exp[a,2r,r,0]). A pure function of
/// the divided differences: a < 2r is accepted as a formal continuation.
double s_statistic(double r, double a);

struct GridSpec {
    double a_min = -20.0;
    double a_max = 40.0;
    std::size_t na = 121;
    double r_min = 0.1;
    double r_max = 10.0;
    std::size_t nr = 100;
};

struct GridCell {
    double r;
    double a;
    double S;
};

struct GridResult {
    std::vector<GridCell> cells;  ///< row-major: r outer, a inner
    double min_S;
    GridCell argmin;
    /// Adjacent pairs along a (fixed r) where S increases. Reported only.
    std::size_t monotonicity_violations;
};

/// Samples S(r, a) on a uniform grid; a single point per axis sits at the
/// axis minimum. Throws std::invalid_argument for zero step counts.
GridResult grid_scan(const GridSpec& spec);

/// CSV with header "r,a,S", one row per cell, 17 significant digits.
void write_csv(std::ostream& out, const GridResult& grid);

/// E S(t)^k = exp(k r t + sigma^2 t k (k - 1) / 2); k >= 1.
double power_expectation(const GbmParams& p, double t, int k);

/// E S(t_1) ... S(t_m) = exp(sum_k (r + (m - k) sigma^2) t_k) for sorted,
/// nonnegative times.
double ordered_product_expectation(const GbmParams& p, std::span<const double> times);

/// E A(T)^m = m! exp[b_0 T, ..., b_m T].
double moment_A(const GbmParams& p, std::size_t m);

struct QuadratureEstimate {
    double value;
    double error;
};

/// m! times the ordered iterated integral of exp(sum alpha_k t_k) over the
/// unit ordered simplex, alpha_k = (r + (m - k) sigma^2) T, by nested
/// Gauss-Legendre quadrature. Independent check on moment_A; m <= 4.
QuadratureEstimate moment_bruteforce(const GbmParams& p, std::size_t m, std::size_t points = 24);

/// Oshanin-Yor binomial formula for E A(T)^m in the driftless case
/// sigma^2 = 2r, evaluated with compensated summation. Loses roughly
/// m^2 rT log10(e) digits below rT ~ 0.5. Throws for m < 1 or rT <= 0.
double oshanin_yor_moment(std::size_t m, double rT);

/// Driftless moment via the symmetric equispaced nodes:
/// m! g[-m c, ..., 0, ..., m c] with g(z) = exp(z^2), c = sqrt(rT).
double symmetric_node_moment(std::size_t m, double rT);

/// |t e_n'(t) - e_n(t) (c_n t - n) - e_{n-1}(t)| for
/// e_n(t) = exp[0, c_1 t, ..., c_n t], with e_n' from a Richardson-extrapolated
/// central difference at step 1e-3 / max(1, c_n). `c` holds c_1, ..., c_n (at least n entries, strictly
/// increasing and positive). Throws std::invalid_argument otherwise.
double moment_ode_residual(std::size_t n, double t, std::span<const double> c);

}  // namespace divexp
