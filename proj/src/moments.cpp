#include "divexp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "divexp/divdiff.hpp"
#include "divexp/quadrature.hpp"
#include "divexp/summation.hpp"

namespace divexp {

GbmParams::GbmParams(double r, double sigma, double T) : r_(r), sigma_(sigma), T_(T) {
    if (!std::isfinite(r)) throw std::invalid_argument("GbmParams: r must be finite");
    if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("GbmParams: sigma must be >= 0");
    if (!std::isfinite(T) || !(T > 0.0)) throw std::invalid_argument("GbmParams: T must be > 0");
}

std::vector<double> b_nodes(const GbmParams& p, std::size_t m) {
    std::vector<double> b(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        const auto kd = static_cast<double>(k);
        b[k] = kd * p.r() + p.variance_rate() * kd * (kd - 1.0) / 2.0;
    }
    return b;
}

namespace {

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

// The recurring nodes rT, 2rT and (2r + sigma^2)T.
struct Nodes {
    double rT;
    double two_rT;
    double top;
};

Nodes nodes_of(const GbmParams& p) {
    return {p.r() * p.T(), 2.0 * p.r() * p.T(), (2.0 * p.r() + p.variance_rate()) * p.T()};
}

}  // namespace

double mean_S(const GbmParams& p) { return std::exp(p.r() * p.T()); }

double mean_A(const GbmParams& p) { return exp_dd({0.0, p.r() * p.T()}); }

double pairwise_expectation(const GbmParams& p, double a, double b) {
    if (!(a >= 0.0) || !(a <= b)) throw std::invalid_argument("pairwise_expectation: requires 0 <= a <= b");
    return std::exp(a * (p.r() + p.variance_rate()) + b * p.r());
}

double cross_moment_SA(const GbmParams& p) {
    const Nodes n = nodes_of(p);
    return exp_dd({n.rT, n.top});
}

double second_moment_A(const GbmParams& p) {
    const Nodes n = nodes_of(p);
    return 2.0 * exp_dd({0.0, n.rT, n.top});
}

double hull_second_moment(const GbmParams& p) {
    const double r = p.r();
    const double s2 = p.variance_rate();
    const double T = p.T();
    if (r == 0.0 || r + s2 == 0.0 || 2.0 * r + s2 == 0.0) {
        throw std::domain_error("hull_second_moment: singular denominator; use second_moment_A");
    }
    return 2.0 * std::exp((2.0 * r + s2) * T) / ((r + s2) * (2.0 * r + s2) * T * T) +
           2.0 / (r * T * T) * (1.0 / (2.0 * r + s2) - std::exp(r * T) / (r + s2));
}

double covariance_SA(const GbmParams& p) {
    const Nodes n = nodes_of(p);
    return p.variance_rate() * p.T() * exp_dd({n.rT, n.two_rT, n.top});
}

double var_S(const GbmParams& p) {
    const Nodes n = nodes_of(p);
    return p.variance_rate() * p.T() * exp_dd({n.two_rT, n.top});
}

double var_A(const GbmParams& p) {
    const Nodes n = nodes_of(p);
    return 2.0 * p.variance_rate() * p.T() * exp_dd({0.0, n.rT, n.two_rT, n.top});
}

CorrelationReport correlation(const GbmParams& p) {
    if (p.sigma() == 0.0) throw std::domain_error("correlation undefined for deterministic paths");
    const Nodes n = nodes_of(p);
    const double num = exp_dd({n.rT, n.two_rT, n.top});
    const double d1 = exp_dd({n.two_rT, n.top});
    const double d2 = exp_dd({0.0, n.rT, n.two_rT, n.top});
    CorrelationReport report{};
    report.R = num / std::sqrt(2.0 * d1 * d2);
    report.covariance = covariance_SA(p);
    report.var_S = var_S(p);
    report.var_A = var_A(p);
    report.s_statistic = s_statistic(n.rT, n.top);
    return report;
}

double s_statistic(double r, double a) {
    // A common shift scales numerator and denominator by e^{2 mu}; shifting
    // by the top node keeps large a or r from overflowing.
    const double mu = std::max({a, 2.0 * r, r, 0.0});
    const double num = exp_dd({a - mu, 2.0 * r - mu, r - mu});
    return num * num / (exp_dd({a - mu, 2.0 * r - mu}) * exp_dd({a - mu, 2.0 * r - mu, r - mu, -mu}));
}

GridResult grid_scan(const GridSpec& spec) {
    if (spec.na == 0 || spec.nr == 0) throw std::invalid_argument("grid_scan: step counts must be positive");
    auto axis = [](double lo, double hi, std::size_t count, std::size_t i) {
        if (count == 1) return lo;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    };

    GridResult result{};
    result.cells.reserve(spec.na * spec.nr);
    result.min_S = std::numeric_limits<double>::infinity();
    for (std::size_t ir = 0; ir < spec.nr; ++ir) {
        const double r = axis(spec.r_min, spec.r_max, spec.nr, ir);
        double previous = 0.0;
        for (std::size_t ia = 0; ia < spec.na; ++ia) {
            const double a = axis(spec.a_min, spec.a_max, spec.na, ia);
            const GridCell cell{r, a, s_statistic(r, a)};
            if (ia > 0 && cell.S > previous * (1.0 + 1e-12)) ++result.monotonicity_violations;
            previous = cell.S;
            if (cell.S < result.min_S) {
                result.min_S = cell.S;
                result.argmin = cell;
            }
            result.cells.push_back(cell);
        }
    }
    return result;
}

void write_csv(std::ostream& out, const GridResult& grid) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << "r,a,S\n" << std::setprecision(17);
    for (const GridCell& c : grid.cells) out << c.r << ',' << c.a << ',' << c.S << '\n';
    out.flags(flags);
    out.precision(precision);
}

double power_expectation(const GbmParams& p, double t, int k) {
    if (k < 1) throw std::invalid_argument("power_expectation: k must be >= 1");
    const auto kd = static_cast<double>(k);
    return std::exp(kd * p.r() * t + p.variance_rate() * t * kd * (kd - 1.0) / 2.0);
}

double ordered_product_expectation(const GbmParams& p, std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("ordered_product_expectation: need at least one time");
    const std::size_t m = times.size();
    if (!(times[0] >= 0.0)) throw std::invalid_argument("ordered_product_expectation: times must be nonnegative");
    CompensatedSum exponent;
    for (std::size_t k = 0; k < m; ++k) {
        if (k > 0 && !(times[k] >= times[k - 1])) {
            throw std::invalid_argument("ordered_product_expectation: times must be nondecreasing");
        }
        // 1-based k + 1: coefficient r + (m - (k + 1)) sigma^2
        exponent += (p.r() + static_cast<double>(m - k - 1) * p.variance_rate()) * times[k];
    }
    return std::exp(exponent.value());
}

double moment_A(const GbmParams& p, std::size_t m) {
    if (m == 0) return 1.0;
    return factorial(m) * exp_dd(NodeList(b_nodes(p, m)), p.T());
}

QuadratureEstimate moment_bruteforce(const GbmParams& p, std::size_t m, std::size_t points) {
    if (m > 4) throw std::invalid_argument("moment_bruteforce: m <= 4 (cost guard)");
    if (m == 0) return {1.0, 0.0};
    std::vector<double> alpha(m);
    for (std::size_t k = 1; k <= m; ++k) {
        alpha[k - 1] = (p.r() + static_cast<double>(m - k) * p.variance_rate()) * p.T();
    }
    const PointFunction integrand = [&](std::span<const double> t) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += alpha[k] * t[k];
        return std::exp(s);
    };
    const double scale = factorial(m);
    const double fine = scale * integrate_ordered_simplex(integrand, m, points);
    const double coarse = scale * integrate_ordered_simplex(integrand, m, std::max<std::size_t>(1, 2 * points / 3));
    return {fine, std::abs(fine - coarse)};
}

double oshanin_yor_moment(std::size_t m, double rT) {
    if (m < 1) throw std::invalid_argument("oshanin_yor_moment: m must be >= 1");
    if (!(rT > 0.0) || !std::isfinite(rT)) throw std::invalid_argument("oshanin_yor_moment: rT must be > 0");
    // Gamma(m) / Gamma(2m) = (m-1)! / (2m-1)!
    double gamma_ratio = 1.0;
    for (std::size_t k = m; k <= 2 * m - 1; ++k) gamma_ratio /= static_cast<double>(k);

    CompensatedSum bracket;
    double binom = 1.0;  // C(2m, l)
    double central = 0.0;
    for (std::size_t l = 0; l <= m; ++l) {
        const double sign = (l % 2 == 0) ? 1.0 : -1.0;
        const auto gap = static_cast<double>(m - l);
        bracket += sign * binom * std::exp(rT * gap * gap);
        if (l == m) central = binom;
        binom = binom * static_cast<double>(2 * m - l) / static_cast<double>(l + 1);
    }
    const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
    bracket += -0.5 * sign_m * central;
    return gamma_ratio * std::pow(rT, -static_cast<double>(m)) * bracket.value();
}

double symmetric_node_moment(std::size_t m, double rT) {
    if (!(rT > 0.0) || !std::isfinite(rT)) throw std::invalid_argument("symmetric_node_moment: rT must be > 0");
    std::vector<double> g(2 * m + 1);
    for (std::size_t k = 0; k <= 2 * m; ++k) {
        const double j = static_cast<double>(k) - static_cast<double>(m);
        g[k] = std::exp(rT * j * j);
    }
    if (m == 0) return 1.0;
    return factorial(m) * symmetric_equispaced_dd(g, std::sqrt(rT), m);
}

double moment_ode_residual(std::size_t n, double t, std::span<const double> c) {
    if (n < 1) throw std::invalid_argument("moment_ode_residual: n must be >= 1");
    if (c.size() < n) throw std::invalid_argument("moment_ode_residual: need c_1..c_n");
    if (!(t > 0.0)) throw std::invalid_argument("moment_ode_residual: t must be > 0");
    for (std::size_t k = 0; k < n; ++k) {
        if (!(c[k] > 0.0)) throw std::invalid_argument("moment_ode_residual: c must be positive");
        if (k > 0 && !(c[k] > c[k - 1])) throw std::invalid_argument("moment_ode_residual: c must be strictly increasing");
    }
    // One fixed method so that e_n is a smooth function of t at the
    // resolution of the difference quotient.
    auto e = [&](std::size_t order, double time) {
        std::vector<double> nodes{0.0};
        nodes.insert(nodes.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(order));
        return exp_dd(NodeList(std::move(nodes)), time, EvalMethod::TaylorMatrix);
    };
    // e_n varies on the time scale 1 / c_n. A step of 1e-3 of that scale
    // balances the O(h^4) truncation of the extrapolated quotient against
    // the eps / h rounding; a fixed h ~ 1e-6 would be rounding dominated.
    const double h = 1e-3 / std::max(1.0, c[n - 1]);
    auto central = [&](double step) { return (e(n, t + step) - e(n, t - step)) / (2.0 * step); };
    const double derivative = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    const double en = e(n, t);
    const double prev = e(n - 1, t);
    const auto nd = static_cast<double>(n);
    return std::abs(t * derivative - en * (c[n - 1] * t - nd) - prev);
}

}  // namespace divexp
