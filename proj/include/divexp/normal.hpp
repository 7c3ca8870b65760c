#pragma once

namespace divexp {

/// Standard normal distribution function, 0.5 * erfc(-x / sqrt 2).
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1). Rational initial guess refined by one
/// Halley step against normal_cdf; throws std::domain_error outside (0, 1).
double normal_quantile(double p);

}  // namespace divexp
