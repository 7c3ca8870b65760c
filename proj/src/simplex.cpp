#include "divexp/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "divexp/quadrature.hpp"
#include "divexp/rng.hpp"
#include "divexp/summation.hpp"

namespace divexp {

namespace {

constexpr std::size_t kMaxNestedOrder = 4;
constexpr double kSingularRatio = 1.0e-12;

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

OracleEstimate sample_simplex(const Derivative& deriv_n, const NodeList& nodes, std::size_t samples,
                              std::uint64_t seed) {
    const std::size_t n1 = nodes.size();
    const double volume = 1.0 / factorial(n1 - 1);
    // Welford running mean and variance of the integrand.
    double mean = 0.0;
    double m2 = 0.0;
    std::vector<double> spacing(n1);
    for (std::size_t s = 0; s < samples; ++s) {
        CounterStream stream(seed, s);
        double total = 0.0;
        for (std::size_t k = 0; k < n1; ++k) {
            spacing[k] = -std::log(stream.uniform());
            total += spacing[k];
        }
        double point = 0.0;
        for (std::size_t k = 0; k < n1; ++k) point += (spacing[k] / total) * nodes[k];
        const double v = deriv_n(point);
        const double delta = v - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (v - mean);
    }
    const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    return {volume * mean, volume * std::sqrt(var / static_cast<double>(samples)), samples, HgScheme::Sampling};
}

OracleEstimate nested_simplex(const Derivative& deriv_n, const NodeList& nodes, std::size_t points) {
    const std::size_t n = nodes.order();
    if (n > kMaxNestedOrder) throw std::invalid_argument("hermite_genocchi_oracle: nested quadrature needs n <= 4");
    const PointFunction integrand = [&](std::span<const double> t) {
        double t0 = 1.0;
        double point = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            t0 -= t[k];
            point += t[k] * nodes[k + 1];
        }
        point += t0 * nodes[0];
        return deriv_n(point);
    };
    const double fine = integrate_standard_simplex(integrand, n, points);
    const std::size_t coarse_points = std::max<std::size_t>(1, (2 * points) / 3);
    const double coarse = integrate_standard_simplex(integrand, n, coarse_points);
    std::size_t evals = 1;
    std::size_t coarse_evals = 1;
    for (std::size_t k = 0; k < n; ++k) {
        evals *= points;
        coarse_evals *= coarse_points;
    }
    return {fine, std::abs(fine - coarse), evals + coarse_evals, HgScheme::NestedQuadrature};
}

}  // namespace

OracleEstimate hermite_genocchi_oracle(const Derivative& deriv_n, const NodeList& nodes, std::size_t budget,
                                       HgScheme scheme, std::uint64_t seed) {
    if (nodes.order() == 0) throw std::invalid_argument("hermite_genocchi_oracle: requires n >= 1");
    if (budget == 0) throw std::invalid_argument("hermite_genocchi_oracle: budget must be positive");
    return scheme == HgScheme::Sampling ? sample_simplex(deriv_n, nodes, budget, seed)
                                        : nested_simplex(deriv_n, nodes, budget);
}

double simplex_exp_integral(const SimplexSpec& spec) {
    const auto n = spec.V.rows();
    if (n == 0 || spec.V.cols() != n || spec.a.size() != n) {
        throw std::invalid_argument("simplex_exp_integral: V must be square and match a");
    }
    if (!spec.V.allFinite() || !spec.a.allFinite()) throw std::invalid_argument("simplex_exp_integral: non-finite input");
    const double det = std::abs(spec.V.partialPivLu().determinant());
    double hadamard = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) hadamard *= spec.V.col(j).norm();
    if (!(hadamard > 0.0) || det < kSingularRatio * hadamard) {
        throw std::invalid_argument("simplex_exp_integral: V is singular");
    }
    const Eigen::VectorXd projected = spec.V.transpose() * spec.a;
    std::vector<double> nodes{0.0};
    for (Eigen::Index k = 0; k < n; ++k) nodes.push_back(projected(k));
    return det * exp_dd(NodeList(std::move(nodes)));
}

double iterated_ordered_exp_integral(std::span<const double> a) {
    if (a.empty()) throw std::invalid_argument("iterated_ordered_exp_integral: need n >= 1");
    std::vector<double> nodes{0.0};
    CompensatedSum partial;
    for (std::size_t k = a.size(); k-- > 0;) {
        partial += a[k];
        nodes.push_back(partial.value());
    }
    return exp_dd(NodeList(std::move(nodes)));
}

}  // namespace divexp
