#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace divexp {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Newton iteration on the Legendre recurrence; exact for polynomials of
/// degree < 2 * points.
GaussLegendreRule gauss_legendre(std::size_t points);

using PointFunction = std::function<double(std::span<const double>)>;

/// Integral over {t in R^n : t_k >= 0, sum t_k <= 1} by nested Gauss-Legendre
/// rules, t_k ranging over [0, 1 - t_1 - ... - t_{k-1}]. Cost points^n.
double integrate_standard_simplex(const PointFunction& f, std::size_t dim, std::size_t points);

/// Integral over {0 <= x_1 <= x_2 <= ... <= x_n <= 1} by nested rules, the
/// outermost variable being x_n. Cost points^n.
double integrate_ordered_simplex(const PointFunction& f, std::size_t dim, std::size_t points);

}  // namespace divexp
