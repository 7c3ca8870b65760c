#include "divexp/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "divexp/normal.hpp"
#include "divexp/rng.hpp"

namespace divexp {

void McConfig::validate() const {
    if (paths < 2) throw std::invalid_argument("McConfig: paths must be >= 2");
    if (steps < 1) throw std::invalid_argument("McConfig: steps must be >= 1");
    if (threads < 1) throw std::invalid_argument("McConfig: threads must be >= 1");
}

namespace {

constexpr std::size_t kMaxBatches = 30;

// Running means and co-moments (Welford update, Chan et al. merge).
class Accumulator {
public:
    explicit Accumulator(std::size_t dim) : dim_(dim), mean_(dim, 0.0), co_(dim * dim, 0.0), delta_(dim) {}

    void add(std::span<const double> x) {
        ++count_;
        const double inv_n = 1.0 / static_cast<double>(count_);
        for (std::size_t i = 0; i < dim_; ++i) {
            delta_[i] = x[i] - mean_[i];
            mean_[i] += delta_[i] * inv_n;
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) co_[i * dim_ + j] += delta_[i] * (x[j] - mean_[j]);
        }
    }

    static Accumulator merge(const Accumulator& a, const Accumulator& b) {
        if (a.count_ == 0) return b;
        if (b.count_ == 0) return a;
        Accumulator out(a.dim_);
        out.count_ = a.count_ + b.count_;
        const double na = static_cast<double>(a.count_);
        const double nb = static_cast<double>(b.count_);
        const double n = na + nb;
        std::vector<double> d(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) {
            d[i] = b.mean_[i] - a.mean_[i];
            out.mean_[i] = a.mean_[i] + d[i] * (nb / n);
        }
        for (std::size_t i = 0; i < a.dim_; ++i) {
            for (std::size_t j = 0; j < a.dim_; ++j) {
                const std::size_t ij = i * a.dim_ + j;
                out.co_[ij] = a.co_[ij] + b.co_[ij] + d[i] * d[j] * (na * nb / n);
            }
        }
        return out;
    }

    std::size_t count() const { return count_; }
    double mean(std::size_t i) const { return mean_[i]; }
    double variance(std::size_t i) const {
        return count_ > 1 ? co_[i * dim_ + i] / static_cast<double>(count_ - 1) : 0.0;
    }
    double correlation(std::size_t i, std::size_t j) const {
        return co_[i * dim_ + j] / std::sqrt(co_[i * dim_ + i] * co_[j * dim_ + j]);
    }

    McEstimate estimate(std::size_t i) const {
        return {mean(i), std::sqrt(variance(i) / static_cast<double>(count_)), count_};
    }

private:
    std::size_t dim_;
    std::size_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> co_;
    std::vector<double> delta_;
};

using Observer = std::function<void(std::uint64_t path, std::span<double> out)>;

std::size_t batch_count(std::size_t paths) {
    return std::clamp<std::size_t>(paths / 2, 1, kMaxBatches);
}

// Batch b owns paths [b N / B, (b + 1) N / B). Batches are filled
// independently and in path order, so the per-batch results do not depend on
// which thread ran them.
std::vector<Accumulator> run_batches(const McConfig& cfg, std::size_t dim, const Observer& observe) {
    cfg.validate();
    const std::size_t batches = batch_count(cfg.paths);
    std::vector<Accumulator> results(batches, Accumulator(dim));

    auto run_one = [&](std::size_t b) {
        const std::size_t lo = b * cfg.paths / batches;
        const std::size_t hi = (b + 1) * cfg.paths / batches;
        Accumulator acc(dim);
        std::vector<double> values(dim);
        for (std::size_t path = lo; path < hi; ++path) {
            observe(path, values);
            acc.add(values);
        }
        results[b] = std::move(acc);
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(cfg.threads, batches));
    if (workers <= 1) {
        for (std::size_t b = 0; b < batches; ++b) run_one(b);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next.fetch_add(1); b < batches; b = next.fetch_add(1)) run_one(b);
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

// Fixed pairwise reduction tree over batch indices.
Accumulator reduce(const std::vector<Accumulator>& parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return Accumulator::merge(reduce(parts, lo, mid), reduce(parts, mid, hi));
}

Accumulator reduce(const std::vector<Accumulator>& parts) { return reduce(parts, 0, parts.size()); }

// Core path generator; writes S at the requested step indices (ascending).
PathSample simulate_path_recording(const GbmParams& p, const McConfig& cfg, std::uint64_t index,
                                   std::span<const std::size_t> record_steps, std::span<double> recorded) {
    const std::size_t steps = cfg.steps;
    const double T = p.T();
    const double drift = p.r() - 0.5 * p.variance_rate();
    const double sqrt_dt = std::sqrt(T / static_cast<double>(steps));
    CounterStream stream(cfg.seed, index);

    double brownian = 0.0;
    double s = 1.0;
    double sum = cfg.averaging == Averaging::Trapezoid ? 0.5 : 1.0;
    std::size_t next_record = 0;
    while (next_record < record_steps.size() && record_steps[next_record] == 0) recorded[next_record++] = 1.0;

    for (std::size_t i = 1; i <= steps; ++i) {
        brownian += sqrt_dt * normal_quantile(stream.uniform());
        const double t = T * static_cast<double>(i) / static_cast<double>(steps);
        s = std::exp(drift * t + p.sigma() * brownian);
        if (i < steps) {
            sum += s;
        } else if (cfg.averaging == Averaging::Trapezoid) {
            sum += 0.5 * s;
        }
        while (next_record < record_steps.size() && record_steps[next_record] == i) recorded[next_record++] = s;
    }
    return {s, sum / static_cast<double>(steps)};
}

double discount(const GbmParams& p) { return std::exp(-p.r() * p.T()); }

}  // namespace

PathSample simulate_path(const GbmParams& p, const McConfig& cfg, std::uint64_t index) {
    return simulate_path_recording(p, cfg, index, {}, {});
}

std::vector<PathSample> simulate_terminal_and_average(const GbmParams& p, const McConfig& cfg) {
    cfg.validate();
    std::vector<PathSample> out(cfg.paths);
    run_batches(cfg, 1, [&](std::uint64_t path, std::span<double> values) {
        out[path] = simulate_path(p, cfg, path);
        values[0] = 0.0;
    });
    return out;
}

McEstimate estimate_mean_S(const GbmParams& p, const McConfig& cfg) {
    const auto parts = run_batches(cfg, 1, [&](std::uint64_t path, std::span<double> v) {
        v[0] = simulate_path(p, cfg, path).terminal;
    });
    return reduce(parts).estimate(0);
}

McEstimate estimate_moment_A(const GbmParams& p, const McConfig& cfg, std::size_t m) {
    const auto exponent = static_cast<int>(m);
    const auto parts = run_batches(cfg, 1, [&](std::uint64_t path, std::span<double> v) {
        v[0] = std::pow(simulate_path(p, cfg, path).average, exponent);
    });
    return reduce(parts).estimate(0);
}

McEstimate estimate_cross_moment_SA(const GbmParams& p, const McConfig& cfg) {
    const auto parts = run_batches(cfg, 1, [&](std::uint64_t path, std::span<double> v) {
        const PathSample s = simulate_path(p, cfg, path);
        v[0] = s.terminal * s.average;
    });
    return reduce(parts).estimate(0);
}

namespace {

McEstimate correlation_from(const std::vector<Accumulator>& parts, std::size_t i, std::size_t j) {
    const Accumulator total = reduce(parts);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t b = 0; b < parts.size(); ++b) {
        const double c = parts[b].correlation(i, j);
        const double delta = c - mean;
        mean += delta / static_cast<double>(b + 1);
        m2 += delta * (c - mean);
    }
    const auto nb = static_cast<double>(parts.size());
    const double se = std::sqrt(m2 / (nb - 1.0) / nb);
    return {total.correlation(i, j), se, total.count()};
}

}  // namespace

McEstimate estimate_correlation(const GbmParams& p, const McConfig& cfg) {
    if (p.sigma() == 0.0) throw std::domain_error("correlation undefined for deterministic paths");
    cfg.validate();
    if (cfg.paths < 4) throw std::invalid_argument("estimate_correlation: needs at least 4 paths");
    const auto parts = run_batches(cfg, 2, [&](std::uint64_t path, std::span<double> v) {
        const PathSample s = simulate_path(p, cfg, path);
        v[0] = s.terminal;
        v[1] = s.average;
    });
    return correlation_from(parts, 0, 1);
}

McEstimate estimate_payoff(const GbmParams& p, const McConfig& cfg, const Payoff& payoff) {
    const bool floating = payoff.kind == Payoff::Kind::FloatingStrikeAsianCall;
    const auto parts = run_batches(cfg, 1, [&](std::uint64_t path, std::span<double> v) {
        const PathSample s = simulate_path(p, cfg, path);
        v[0] = floating ? std::max(s.terminal - s.average, 0.0) : std::max(s.average - payoff.strike, 0.0);
    });
    McEstimate e = reduce(parts).estimate(0);
    const double df = discount(p);
    e.value *= df;
    e.std_error *= df;
    return e;
}

McEstimate estimate_ordered_product(const GbmParams& p, const McConfig& cfg, std::span<const double> times) {
    cfg.validate();
    if (times.empty()) throw std::invalid_argument("estimate_ordered_product: need at least one time");
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double pos = times[k] / p.T() * static_cast<double>(cfg.steps);
        const double rounded = std::round(pos);
        if (!(rounded >= 0.0) || rounded > static_cast<double>(cfg.steps) ||
            std::abs(rounded / static_cast<double>(cfg.steps) - times[k] / p.T()) > 1e-9) {
            throw std::invalid_argument("estimate_ordered_product: times must be grid points in [0, T]");
        }
        idx.push_back(static_cast<std::size_t>(rounded));
        if (k > 0 && idx[k] < idx[k - 1]) throw std::invalid_argument("estimate_ordered_product: times must be sorted");
    }
    const auto parts = run_batches(cfg, 1, [&](std::uint64_t path, std::span<double> v) {
        std::vector<double> rec(idx.size());
        simulate_path_recording(p, cfg, path, idx, rec);
        double prod = 1.0;
        for (double x : rec) prod *= x;
        v[0] = prod;
    });
    return reduce(parts).estimate(0);
}

McSummary run_summary(const GbmParams& p, const McConfig& cfg, std::size_t max_m) {
    // Layout: [S, S*A, A^1, ..., A^k], k = max(max_m, 2)
    const std::size_t top = std::max<std::size_t>(max_m, 2);
    const std::size_t dim = 2 + top;
    const auto parts = run_batches(cfg, dim, [&](std::uint64_t path, std::span<double> v) {
        const PathSample s = simulate_path(p, cfg, path);
        v[0] = s.terminal;
        v[1] = s.terminal * s.average;
        double power = 1.0;
        for (std::size_t m = 1; m <= top; ++m) {
            power *= s.average;
            v[1 + m] = power;
        }
    });
    const Accumulator total = reduce(parts);

    McSummary out{};
    out.mean_S = total.estimate(0);
    out.cross_moment_SA = total.estimate(1);
    out.mean_A = total.estimate(2);
    out.second_moment_A = total.estimate(3);
    if (p.sigma() > 0.0 && parts.size() > 1) {
        out.correlation = correlation_from(parts, 0, 2);
    } else {
        out.correlation = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                           total.count()};
    }
    out.moments_A.push_back({1.0, 0.0, total.count()});
    for (std::size_t m = 1; m <= max_m; ++m) out.moments_A.push_back(total.estimate(1 + m));
    return out;
}

}  // namespace divexp
