#include "divexp/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "divexp/moments.hpp"

namespace divexp {

double LognormalFit::mean() const { return std::exp(mu + 0.5 * s2); }
double LognormalFit::second_moment() const { return std::exp(2.0 * mu + 2.0 * s2); }

LognormalFit lognormal_match(double mean, double second_moment) {
    if (!std::isfinite(mean) || !std::isfinite(second_moment) || !(mean > 0.0)) {
        throw std::invalid_argument("lognormal_match: mean must be positive and finite");
    }
    const double ratio = second_moment / (mean * mean);
    if (ratio < 1.0 - 4e-16) throw std::invalid_argument("lognormal_match: second moment below mean^2");
    const double s2 = ratio > 1.0 ? std::log(ratio) : 0.0;
    return {std::log(mean) - 0.5 * s2, s2};
}

const char* to_string(PriceMethod method) {
    switch (method) {
        case PriceMethod::MargrabeApprox: return "MargrabeApprox";
        case PriceMethod::BlackApprox: return "BlackApprox";
    }
    return "unknown";
}

namespace {

// discount * (F1 Phi(d1) - F2 Phi(d2)) with total volatility s.
double exchange_value(double F1, double F2, double s, double discount) {
    if (F2 == 0.0) return discount * F1;
    if (s == 0.0) return discount * std::max(F1 - F2, 0.0);
    const double d1 = (std::log(F1 / F2) + 0.5 * s * s) / s;
    const double d2 = d1 - s;
    return std::max(discount * (F1 * normal_cdf(d1) - F2 * normal_cdf(d2)), 0.0);
}

void require_sigma(const GbmParams& p, const char* who) {
    if (p.sigma() == 0.0) throw std::domain_error(std::string(who) + ": sigma must be > 0");
}

}  // namespace

PriceQuote margrabe_price(double F1, double F2, double s1, double s2, double rho, double discount) {
    for (double x : {F1, F2, s1, s2, rho, discount}) {
        if (!std::isfinite(x)) throw std::invalid_argument("margrabe_price: non-finite input");
    }
    if (!(F1 > 0.0) || F2 < 0.0 || s1 < 0.0 || s2 < 0.0 || !(discount > 0.0) || rho < -1.0 || rho > 1.0) {
        throw std::invalid_argument("margrabe_price: input out of range");
    }
    // Rounding can push s1^2 + s2^2 - 2 rho s1 s2 slightly negative at rho = 1.
    const double var = std::max(0.0, (s1 - s2) * (s1 - s2) + 2.0 * (1.0 - rho) * s1 * s2);
    const double value = exchange_value(F1, F2, std::sqrt(var), discount);
    return {value,
            PriceMethod::MargrabeApprox,
            {{"F1", F1}, {"F2", F2}, {"s1", s1}, {"s2", s2}, {"rho", rho}, {"discount", discount}}};
}

PriceQuote floating_strike_asian_approx(const GbmParams& p) {
    require_sigma(p, "floating_strike_asian_approx");
    const LognormalFit fit = lognormal_match(mean_A(p), second_moment_A(p));
    const double R = correlation(p).R;
    PriceQuote q = margrabe_price(mean_S(p), fit.mean(), p.sigma() * std::sqrt(p.T()), std::sqrt(fit.s2), R,
                                  std::exp(-p.r() * p.T()));
    q.inputs.insert(q.inputs.begin(), {{"r", p.r()}, {"sigma", p.sigma()}, {"T", p.T()}});
    return q;
}

PriceQuote fixed_strike_asian_approx(const GbmParams& p, double K) {
    require_sigma(p, "fixed_strike_asian_approx");
    if (!std::isfinite(K) || K < 0.0) throw std::invalid_argument("fixed_strike_asian_approx: K must be >= 0");
    const double mean = mean_A(p);
    const LognormalFit fit = lognormal_match(mean, second_moment_A(p));
    const double discount = std::exp(-p.r() * p.T());
    // A call struck at K is the exchange of A for K units of cash.
    const double value = exchange_value(mean, K, std::sqrt(fit.s2), discount);
    return {value,
            PriceMethod::BlackApprox,
            {{"r", p.r()}, {"sigma", p.sigma()}, {"T", p.T()}, {"K", K}, {"mean_A", mean}, {"s2_A", fit.s2},
             {"discount", discount}}};
}

}  // namespace divexp
