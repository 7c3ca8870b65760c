#include "divexp/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace divexp {

namespace {

// P_n(x) and P_n'(x) via the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
    }
    const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

GaussLegendreRule gauss_legendre(std::size_t points) {
    if (points == 0) throw std::invalid_argument("gauss_legendre: need at least one point");
    GaussLegendreRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const auto n = static_cast<double>(points);
    for (std::size_t i = 0; i < (points + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(points, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(points, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // [-1, 1] -> [0, 1]
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[points - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[points - 1 - i] = 0.5 * w;
    }
    return rule;
}

namespace {

// Standard simplex: coordinate k ranges over [0, remaining].
double nest_standard(const PointFunction& f, const GaussLegendreRule& rule, std::vector<double>& t, std::size_t k,
                     double remaining) {
    if (k == t.size()) return f(t);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        t[k] = remaining * rule.nodes[q];
        acc += rule.weights[q] * nest_standard(f, rule, t, k + 1, remaining - t[k]);
    }
    return remaining * acc;
}

// Ordered simplex: fills x_{k}, ..., x_1 with x_k in [0, upper].
double nest_ordered(const PointFunction& f, const GaussLegendreRule& rule, std::vector<double>& x, std::size_t k,
                    double upper) {
    if (k == 0) return f(x);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        x[k - 1] = upper * rule.nodes[q];
        acc += rule.weights[q] * nest_ordered(f, rule, x, k - 1, x[k - 1]);
    }
    return upper * acc;
}

}  // namespace

double integrate_standard_simplex(const PointFunction& f, std::size_t dim, std::size_t points) {
    const GaussLegendreRule rule = gauss_legendre(points);
    std::vector<double> t(dim, 0.0);
    return nest_standard(f, rule, t, 0, 1.0);
}

double integrate_ordered_simplex(const PointFunction& f, std::size_t dim, std::size_t points) {
    const GaussLegendreRule rule = gauss_legendre(points);
    std::vector<double> x(dim, 0.0);
    return nest_ordered(f, rule, x, dim, 1.0);
}

}  // namespace divexp
