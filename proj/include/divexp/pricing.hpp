#pragma once

#include <string>
#include <utility>
#include <vector>

#include "divexp/gbm.hpp"
#include "divexp/normal.hpp"

namespace divexp {

/// Lognormal law exp(N(mu, s2)).
struct LognormalFit {
    double mu;
    double s2;

    double mean() const;
    double second_moment() const;
};

/// Two-moment match. Throws std::invalid_argument unless mean > 0 and
/// second_moment >= mean^2 (a hair of rounding below is clamped to s2 = 0).
LognormalFit lognormal_match(double mean, double second_moment);

enum class PriceMethod { MargrabeApprox, BlackApprox };

const char* to_string(PriceMethod method);

struct PriceQuote {
    double value;
    PriceMethod method;
    std::vector<std::pair<std::string, double>> inputs;
};

/// Value of the option to receive asset 1 in exchange for asset 2, both
/// lognormal with forwards F1, F2, total log-volatilities s1, s2 and log
/// correlation rho. F2 = 0 is accepted as the worthless-leg limit.
/// Throws std::invalid_argument for non-finite or out-of-range inputs.
PriceQuote margrabe_price(double F1, double F2, double s1, double s2, double rho, double discount);

/// Floating-strike Asian call (S(T) - A(T))^+. A(T) is replaced by the
/// lognormal with its first two moments and R is used as the log-space
/// correlation, so both the marginal and the dependence are approximations.
/// Throws std::domain_error for sigma = 0.
PriceQuote floating_strike_asian_approx(const GbmParams& p);

/// Fixed-strike Asian call (A(T) - K)^+ on the lognormal fit of A(T).
/// Throws std::domain_error for sigma = 0, std::invalid_argument for K < 0.
PriceQuote fixed_strike_asian_approx(const GbmParams& p, double K);

}  // namespace divexp
