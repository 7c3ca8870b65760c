#include "divexp/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "divexp/divdiff.hpp"
#include "divexp/moments.hpp"
#include "divexp/rng.hpp"
#include "divexp/simplex.hpp"

namespace divexp {

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

class Tally {
public:
    Tally(std::string name, double tolerance) : check_{std::move(name), true, 0.0, tolerance, 0} {}

    void add(double err) {
        ++check_.cases;
        check_.worst = std::max(check_.worst, err);
        if (!(err <= check_.tolerance)) check_.passed = false;
    }

    OracleCheck done() const { return check_; }

private:
    OracleCheck check_;
};

// Well separated nodes: gaps in [0.5, 1.5], start in [-2, 2].
std::vector<double> separated_nodes(CounterStream& u, std::size_t count) {
    std::vector<double> x(count);
    x[0] = -2.0 + 4.0 * u.uniform();
    for (std::size_t k = 1; k < count; ++k) x[k] = x[k - 1] + 0.5 + u.uniform();
    return x;
}

OracleCheck method_agreement(std::uint64_t seed) {
    Tally t("dd method agreement", 1e-9);
    CounterStream u(seed, 0);
    for (std::size_t n = 1; n <= 5; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            const NodeList nodes(separated_nodes(u, n + 1));
            const double ref = exp_dd(nodes, 1.0, EvalMethod::TaylorMatrix);
            t.add(rel_err(exp_dd(nodes, 1.0, EvalMethod::Recurrence), ref));
        }
        for (double h : {0.25, 0.5, 1.0}) {
            std::vector<double> x(n + 1);
            for (std::size_t k = 0; k <= n; ++k) x[k] = -1.0 + h * static_cast<double>(k);
            const NodeList nodes(x);
            t.add(rel_err(exp_dd(nodes, 1.0, EvalMethod::EquispacedForwardDifference),
                          exp_dd(nodes, 1.0, EvalMethod::TaylorMatrix)));
        }
    }
    return t.done();
}

OracleCheck hg_sampling(const OracleOptions& opt) {
    Tally t("Hermite-Genocchi sampling (stderr units)", 4.0);
    CounterStream u(opt.seed, 1);
    const Derivative exp_fn = [](double x) { return std::exp(x); };
    for (std::size_t n = 1; n <= 5; ++n) {
        std::vector<double> x(n + 1);
        for (double& v : x) v = -1.0 + 2.0 * u.uniform();
        const NodeList nodes(x);
        const OracleEstimate est = hermite_genocchi_oracle(exp_fn, nodes, opt.hg_samples, HgScheme::Sampling,
                                                           opt.seed + n);
        t.add(std::abs(est.value - exp_dd(nodes)) / est.error);
    }
    return t.done();
}

OracleCheck hg_quadrature(std::uint64_t seed) {
    Tally t("Hermite-Genocchi quadrature", 1e-10);
    CounterStream u(seed, 2);
    const Derivative exp_fn = [](double x) { return std::exp(x); };
    for (std::size_t n = 1; n <= 4; ++n) {
        std::vector<double> x(n + 1);
        for (double& v : x) v = -1.0 + 2.0 * u.uniform();
        const NodeList nodes(x);
        const OracleEstimate est = hermite_genocchi_oracle(exp_fn, nodes, 16, HgScheme::NestedQuadrature);
        t.add(rel_err(est.value, exp_dd(nodes)));
    }
    return t.done();
}

OracleCheck driftless_moments() {
    Tally t("Oshanin-Yor and symmetric-node moments", 1e-8);
    for (double rT : {0.5, 1.0, 2.0}) {
        const GbmParams p(rT, std::sqrt(2.0 * rT), 1.0);
        for (std::size_t m = 1; m <= 8; ++m) {
            const double ref = moment_A(p, m);
            t.add(rel_err(oshanin_yor_moment(m, rT), ref));
            t.add(rel_err(symmetric_node_moment(m, rT), ref));
        }
    }
    return t.done();
}

OracleCheck moment_quadrature() {
    Tally t("moment theorem vs brute force", 1e-8);
    const GbmParams p(0.05, 0.2, 1.0);
    for (std::size_t m = 1; m <= 4; ++m) t.add(std::abs(moment_A(p, m) - moment_bruteforce(p, m).value));
    return t.done();
}

OracleCheck ode_residuals(std::uint64_t seed) {
    Tally t("ODE recurrence residual", 1e-6);
    const GbmParams p(0.05, 0.2, 1.0);
    const std::vector<double> b = b_nodes(p, 6);
    for (std::size_t n = 1; n <= 6; ++n) {
        t.add(moment_ode_residual(n, p.T(), std::span<const double>(b).subspan(1)));
    }
    CounterStream u(seed, 3);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(u.uniform() * 6.0);
        std::vector<double> c(n);
        double level = 0.0;
        for (double& v : c) v = level += 0.05 + u.uniform();
        const double time = 0.1 + 1.9 * u.uniform();
        t.add(moment_ode_residual(n, time, c));
    }
    return t.done();
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(const OracleOptions& options) {
    return {method_agreement(options.seed), hg_sampling(options), hg_quadrature(options.seed), driftless_moments(),
            moment_quadrature(), ode_residuals(options.seed)};
}

}  // namespace divexp
