#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "divexp/gbm.hpp"

namespace divexp {

inline constexpr std::uint64_t kDefaultSeed = 20090301;

/// Quadrature used for the path average. Trapezoid has O(steps^-2) bias,
/// LeftRiemann O(steps^-1).
enum class Averaging { LeftRiemann, Trapezoid };

struct McConfig {
    std::size_t paths = 100000;
    std::size_t steps = 1000;
    std::uint64_t seed = kDefaultSeed;
    Averaging averaging = Averaging::Trapezoid;
    /// Worker threads. Results do not depend on this value.
    unsigned threads = 1;

    /// Throws std::invalid_argument unless paths >= 2, steps >= 1, threads >= 1.
    void validate() const;
};

struct McEstimate {
    double value;
    double std_error;
    std::size_t paths_used;
};

struct PathSample {
    double terminal;  ///< S(T)
    double average;   ///< discretised A(T)
};

/// One path with exact lognormal increments on the uniform grid t_i = iT/steps.
/// Path `index` draws its normals from the counter-based stream (seed, index),
/// so it is reproducible in isolation.
PathSample simulate_path(const GbmParams& p, const McConfig& cfg, std::uint64_t index);

/// All paths in index order.
std::vector<PathSample> simulate_terminal_and_average(const GbmParams& p, const McConfig& cfg);

McEstimate estimate_mean_S(const GbmParams& p, const McConfig& cfg);

/// Sample mean of A^m. Carries the discretisation bias of cfg.averaging.
McEstimate estimate_moment_A(const GbmParams& p, const McConfig& cfg, std::size_t m);

McEstimate estimate_cross_moment_SA(const GbmParams& p, const McConfig& cfg);

/// Pearson correlation of (S(T), A) over all paths; the standard error comes
/// from the spread of per-batch correlations (30 batches when paths >= 60).
/// Throws std::domain_error for sigma = 0 and std::invalid_argument for
/// fewer than 4 paths.
McEstimate estimate_correlation(const GbmParams& p, const McConfig& cfg);

struct Payoff {
    enum class Kind { FloatingStrikeAsianCall, FixedStrikeAsianCall };
    Kind kind;
    double strike = 0.0;

    static Payoff floating_strike() { return {Kind::FloatingStrikeAsianCall, 0.0}; }
    static Payoff fixed_strike(double K) { return {Kind::FixedStrikeAsianCall, K}; }
};

/// e^{-rT} times the sample mean of (S(T) - A)^+ or (A - K)^+.
McEstimate estimate_payoff(const GbmParams& p, const McConfig& cfg, const Payoff& payoff);

/// Sample mean of S(t_1) ... S(t_m). Each time must be a grid point
/// k T / steps (to within 1e-9 T) and the sequence nondecreasing.
McEstimate estimate_ordered_product(const GbmParams& p, const McConfig& cfg, std::span<const double> times);

/// The quantities above from a single pass over the paths.
struct McSummary {
    McEstimate mean_S;
    McEstimate mean_A;
    McEstimate second_moment_A;
    McEstimate cross_moment_SA;
    McEstimate correlation;              ///< NaN value when sigma = 0
    std::vector<McEstimate> moments_A;   ///< E A^m for m = 0..max_m
};

McSummary run_summary(const GbmParams& p, const McConfig& cfg, std::size_t max_m = 2);

}  // namespace divexp
