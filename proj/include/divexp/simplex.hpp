#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "divexp/divdiff.hpp"

namespace divexp {

/// Simplex conv{0, v_1, ..., v_n} (columns of V) and the exponent vector a
/// of the integrand exp(a^T y).
struct SimplexSpec {
    Eigen::MatrixXd V;
    Eigen::VectorXd a;
};

enum class HgScheme { Sampling, NestedQuadrature };

struct OracleEstimate {
    double value;
    double error;  ///< standard error (Sampling) or quadrature error estimate
    std::size_t evaluations;
    HgScheme scheme;
};

/// Evaluator of f^{(n)} at a real point.
using Derivative = std::function<double(double)>;

/// Hermite-Genocchi integral of f^{(n)}(t_0 a_0 + ... + t_n a_n) over the
/// standard n-simplex, an independent route to f[a_0, ..., a_n].
///
/// Sampling draws `budget` uniform simplex points (normalised exponential
/// spacings from a counter-based stream keyed by `seed`) and reports the
/// standard error. NestedQuadrature uses `budget` Gauss-Legendre points per
/// dimension, requires n <= 4, and reports the difference to a rule with
/// two thirds of the points. Throws std::invalid_argument for n = 0 or a zero
/// budget.
OracleEstimate hermite_genocchi_oracle(const Derivative& deriv_n, const NodeList& nodes, std::size_t budget,
                                       HgScheme scheme = HgScheme::Sampling, std::uint64_t seed = 0);

/// Integral of exp(a^T y) over conv{0, v_1, ..., v_n}, i.e.
/// |det V| * exp[0, (V^T a)_1, ..., (V^T a)_n]. Throws std::invalid_argument
/// when |det V| is below 1e-12 times the product of the column norms.
double simplex_exp_integral(const SimplexSpec& spec);

/// Integral of exp(sum a_k x_k) over 0 <= x_1 <= ... <= x_n <= 1, equal to
/// exp[0, a_n, a_n + a_{n-1}, ..., a_n + ... + a_1].
double iterated_ordered_exp_integral(std::span<const double> a);

}  // namespace divexp
