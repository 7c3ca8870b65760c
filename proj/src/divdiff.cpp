#include "divexp/divdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "divexp/summation.hpp"

namespace divexp {

namespace {

// Auto switches to the matrix method below this spread (relative to 1 + max|x|).
constexpr double kClusterFraction = 0.05;
// Largest tolerated Lagrange amplification for the plain recurrence.
constexpr double kMaxRecurrenceAmplification = 50.0;
// Nodes are centred before exponentiating; no shifted node may exceed this,
// so wide node sets cannot overflow. Entries far below it just underflow.
constexpr double kMaxShiftedNode = 700.0;

double centre_offset(double centre, double top) { return std::max(centre, top - kMaxShiftedNode); }

std::vector<double> sorted_scaled(const NodeList& nodes, double scale) {
    if (!std::isfinite(scale)) throw std::invalid_argument("exp_dd: non-finite scale");
    std::vector<double> x(nodes.values().begin(), nodes.values().end());
    for (double& v : x) {
        v *= scale;
        if (!std::isfinite(v)) throw std::invalid_argument("exp_dd: scaled node overflows");
    }
    std::sort(x.begin(), x.end());
    return x;
}

double mean_of(std::span<const double> x) {
    CompensatedSum acc;
    for (double v : x) acc += v;
    return acc.value() / static_cast<double>(x.size());
}

// Newton tableau on sorted (possibly repeated) nodes for f = exp, returning
// the top entry. Runs of equal nodes use exp(x)/k!.
double exp_recurrence_sorted(std::span<const double> d) {
    const std::size_t n1 = d.size();
    std::vector<double> t(n1);
    for (std::size_t i = 0; i < n1; ++i) t[i] = std::exp(d[i]);
    double factorial = 1.0;
    for (std::size_t level = 1; level < n1; ++level) {
        factorial *= static_cast<double>(level);
        for (std::size_t i = 0; i + level < n1; ++i) {
            const double gap = d[i + level] - d[i];
            t[i] = gap == 0.0 ? std::exp(d[i]) / factorial : (t[i + 1] - t[i]) / gap;
        }
    }
    return t[0];
}

double exp_recurrence(std::span<const double> x) {
    const double mu = centre_offset(mean_of(x), x.back());
    std::vector<double> d(x.begin(), x.end());
    for (double& v : d) v -= mu;
    return std::exp(mu) * exp_recurrence_sorted(d);
}

// Exponential of the upper bidiagonal matrix with the nodes on the diagonal
// and ones on the superdiagonal; entry (0, n) is exp[x_0..x_n]. The nodes are
// centred on their midrange and halved until |y| <= 1/2, a Taylor series
// gives exp[y_i..y_j] for all i <= j, and each squaring step applies
// exp[2y_i..2y_j] = 2^-(j-i) * sum_k exp[y_i..y_k] exp[y_k..y_j].
// Every entry is positive, so the squaring steps add without cancellation.
double exp_taylor_matrix(std::span<const double> x) {
    const std::size_t n1 = x.size();
    const double mid = centre_offset(0.5 * (x.front() + x.back()), x.back());
    std::vector<double> y(n1);
    double rho = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        y[i] = x[i] - mid;
        rho = std::max(rho, std::abs(y[i]));
    }
    int squarings = 0;
    while (rho > 0.5) {
        rho *= 0.5;
        ++squarings;
    }
    for (double& v : y) v = std::ldexp(v, -squarings);

    // Upper-triangular storage, row-major n1 x n1 (lower half unused).
    auto at = [n1](std::vector<double>& m, std::size_t i, std::size_t j) -> double& {
        return m[i * n1 + j];
    };
    std::vector<double> power(n1 * n1, 0.0);
    std::vector<double> next(n1 * n1, 0.0);
    std::vector<double> sum(n1 * n1, 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
        at(power, i, i) = 1.0;
        at(sum, i, i) = 1.0;
    }

    const std::size_t max_terms = n1 + 64;
    for (std::size_t k = 1; k <= max_terms; ++k) {
        const double inv_k = 1.0 / static_cast<double>(k);
        bool converged = k >= n1;
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = i; j < n1; ++j) {
                double v = at(power, i, j) * y[j];
                if (j > i) v += at(power, i, j - 1);
                v *= inv_k;
                at(next, i, j) = v;
                double& s = at(sum, i, j);
                s += v;
                if (std::abs(v) > 0x1p-60 * std::abs(s)) converged = false;
            }
        }
        power.swap(next);
        if (converged) break;
    }

    for (int step = 0; step < squarings; ++step) {
        for (std::size_t i = 0; i < n1; ++i) {
            double weight = 1.0;
            for (std::size_t j = i; j < n1; ++j) {
                double acc = 0.0;
                for (std::size_t k = i; k <= j; ++k) acc += at(sum, i, k) * at(sum, k, j);
                at(next, i, j) = acc * weight;
                weight *= 0.5;
            }
        }
        sum.swap(next);
    }
    return std::exp(mid) * at(sum, 0, n1 - 1);
}

bool is_equispaced(std::span<const double> x, double& h) {
    const std::size_t n = x.size() - 1;
    h = (x.back() - x.front()) / static_cast<double>(n);
    if (!(h > 0.0)) return false;
    for (std::size_t k = 1; k <= n; ++k) {
        if (std::abs((x[k] - x[k - 1]) - h) > 1.0e-12 * h) return false;
    }
    return true;
}

double exp_equispaced(std::span<const double> x) {
    double h = 0.0;
    if (!is_equispaced(x, h)) {
        throw std::invalid_argument("exp_dd: EquispacedForwardDifference needs equally spaced nodes");
    }
    const std::size_t n = x.size() - 1;
    const double mid = centre_offset(0.5 * (x.front() + x.back()), x.back());
    const double start = x.front() - mid;
    std::vector<double> f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) f[k] = std::exp(start + static_cast<double>(k) * h);
    return std::exp(mid) * equispaced_dd(f, h, n);
}

// Predicted relative error growth of the recurrence on distinct nodes:
// sum_i e^{x_i} |l_i| over a lower bound of the value, so the estimate stays
// valid even when the recurrence has already lost every digit. exp[x] grows
// in every node, so lowering nodes gives two bounds: all nodes at the
// minimum, e^{x_0} / n!, and all but the top one at the minimum,
// e^{x_n} (1 - P(Poisson(d) < n)) / d^n with d = x_n - x_0. The second is
// the tight one for wide node sets.
double recurrence_amplification(std::span<const double> x) {
    const std::size_t n1 = x.size();
    const std::size_t n = n1 - 1;
    const double lo = x.front();
    double log_bound = lo - std::lgamma(static_cast<double>(n1));
    const double d = x.back() - lo;
    double below = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto kd = static_cast<double>(k);
        below += std::exp(-d + kd * std::log(d) - std::lgamma(kd + 1.0));
    }
    if (below < 1.0 - 1e-8) {
        log_bound = std::max(log_bound, x.back() - static_cast<double>(n) * std::log(d) + std::log1p(-below));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        double log_w = x[i] - log_bound;
        for (std::size_t j = 0; j < n1; ++j) {
            if (j != i) log_w -= std::log(std::abs(x[i] - x[j]));
        }
        total += std::exp(log_w);
    }
    return total;
}

EvalMethod resolve_sorted(std::span<const double> x) {
    const double max_abs = std::max(std::abs(x.front()), std::abs(x.back()));
    if (x.back() - x.front() < kClusterFraction * (1.0 + max_abs)) return EvalMethod::TaylorMatrix;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] == x[i - 1]) return EvalMethod::TaylorMatrix;
    }
    if (!(recurrence_amplification(x) <= kMaxRecurrenceAmplification)) return EvalMethod::TaylorMatrix;
    return EvalMethod::Recurrence;
}

}  // namespace

// ---------------------------------------------------------------------------
// NodeList

NodeList::NodeList(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("NodeList: at least one node is required");
    for (double v : nodes_) {
        if (!std::isfinite(v)) throw std::invalid_argument("NodeList: nodes must be finite");
    }
}

NodeList::NodeList(std::initializer_list<double> nodes) : NodeList(std::vector<double>(nodes)) {}

double NodeList::min() const { return *std::min_element(nodes_.begin(), nodes_.end()); }
double NodeList::max() const { return *std::max_element(nodes_.begin(), nodes_.end()); }

bool NodeList::has_repeats() const {
    std::vector<double> s = nodes_;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
}

std::vector<NodeList::Group> NodeList::distinct() const {
    std::vector<double> s = nodes_;
    std::sort(s.begin(), s.end());
    std::vector<Group> groups;
    for (double v : s) {
        if (!groups.empty() && groups.back().value == v) {
            ++groups.back().multiplicity;
        } else {
            groups.push_back({v, 1});
        }
    }
    return groups;
}

NodeList NodeList::scaled(double factor) const {
    std::vector<double> out = nodes_;
    for (double& v : out) v *= factor;
    return NodeList(std::move(out));
}

NodeList NodeList::shifted(double offset) const {
    std::vector<double> out = nodes_;
    for (double& v : out) v += offset;
    return NodeList(std::move(out));
}

// ---------------------------------------------------------------------------
// DDTable

DDTable::DDTable(NodeList nodes, std::vector<double> entries)
    : nodes_(std::move(nodes)), entries_(std::move(entries)) {
    const std::size_t n1 = nodes_.size();
    if (entries_.size() != n1 * (n1 + 1) / 2) {
        throw std::invalid_argument("DDTable: entry count does not match node count");
    }
}

std::size_t DDTable::index(std::size_t i, std::size_t j) const {
    // Row i holds entries (i, i) .. (i, n).
    const std::size_t n1 = nodes_.size();
    return i * n1 - i * (i - 1) / 2 + (j - i);
}

double DDTable::operator()(std::size_t i, std::size_t j) const {
    if (i > j || j >= nodes_.size()) throw std::out_of_range("DDTable: index outside triangle");
    return entries_[index(i, j)];
}

// ---------------------------------------------------------------------------

const char* to_string(EvalMethod method) {
    switch (method) {
        case EvalMethod::Recurrence: return "Recurrence";
        case EvalMethod::EquispacedForwardDifference: return "EquispacedForwardDifference";
        case EvalMethod::TaylorMatrix: return "TaylorMatrix";
        case EvalMethod::Auto: return "Auto";
    }
    return "?";
}

DDTable newton_table(std::span<const double> values, const NodeList& nodes) {
    const std::size_t n1 = nodes.size();
    if (values.size() != n1) throw std::invalid_argument("newton_table: values and nodes differ in length");
    if (nodes.has_repeats()) throw std::invalid_argument("newton_table: coincident nodes require derivative data");

    std::vector<double> entries(n1 * (n1 + 1) / 2);
    auto slot = [n1](std::size_t i, std::size_t j) { return i * n1 - i * (i - 1) / 2 + (j - i); };
    for (std::size_t i = 0; i < n1; ++i) entries[slot(i, i)] = values[i];
    for (std::size_t level = 1; level < n1; ++level) {
        for (std::size_t i = 0; i + level < n1; ++i) {
            const std::size_t j = i + level;
            entries[slot(i, j)] = (entries[slot(i + 1, j)] - entries[slot(i, j - 1)]) / (nodes[j] - nodes[i]);
        }
    }
    return DDTable(nodes, std::move(entries));
}

EvalMethod resolve_method(const NodeList& nodes) {
    std::vector<double> x(nodes.values().begin(), nodes.values().end());
    std::sort(x.begin(), x.end());
    return resolve_sorted(x);
}

double exp_dd(const NodeList& nodes, double scale, EvalMethod method) {
    const std::vector<double> x = sorted_scaled(nodes, scale);
    if (x.size() == 1) return std::exp(x[0]);
    if (method == EvalMethod::Auto) method = resolve_sorted(x);
    switch (method) {
        case EvalMethod::Recurrence: return exp_recurrence(x);
        case EvalMethod::TaylorMatrix: return exp_taylor_matrix(x);
        case EvalMethod::EquispacedForwardDifference: return exp_equispaced(x);
        case EvalMethod::Auto: break;
    }
    throw std::logic_error("exp_dd: unresolved method");
}

double equispaced_dd(std::span<const double> fvals, double h, std::size_t n) {
    if (!(h > 0.0)) throw std::invalid_argument("equispaced_dd: step must be positive");
    if (fvals.size() != n + 1) throw std::invalid_argument("equispaced_dd: expected n+1 samples");
    CompensatedSum acc;
    double binom = 1.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom * fvals[k];
        binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    double denom = 1.0;
    for (std::size_t k = 1; k <= n; ++k) denom *= static_cast<double>(k) * h;
    return acc.value() / denom;
}

double symmetric_equispaced_dd(std::span<const double> fvals, double h, std::size_t n) {
    if (fvals.size() != 2 * n + 1) throw std::invalid_argument("symmetric_equispaced_dd: expected 2n+1 samples");
    return equispaced_dd(fvals, h, 2 * n);
}

double leibniz_dd(const DDTable& vtable, const DDTable& wtable) {
    if (!(vtable.nodes() == wtable.nodes())) throw std::invalid_argument("leibniz_dd: tables use different nodes");
    const std::size_t n = vtable.size() - 1;
    CompensatedSum acc;
    for (std::size_t k = 0; k <= n; ++k) acc += vtable(0, k) * wtable(k, n);
    return acc.value();
}

SquareNodesResult square_nodes_dd(std::span<const double> fvals, std::span<const double> a) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("square_nodes_dd: need at least one a_i");
    if (fvals.size() != n + 1) throw std::invalid_argument("square_nodes_dd: expected n+1 samples");
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0 || !std::isfinite(a[i])) throw std::invalid_argument("square_nodes_dd: a_i must be nonzero");
        mags[i] = std::abs(a[i]);
    }
    std::sort(mags.begin(), mags.end());
    if (std::adjacent_find(mags.begin(), mags.end()) != mags.end()) {
        throw std::invalid_argument("square_nodes_dd: a_i must be distinct");
    }

    std::vector<double> sq_nodes{0.0};
    for (double ai : a) sq_nodes.push_back(ai * ai);
    const double lhs = newton_table(fvals, NodeList(sq_nodes)).top();

    // Order: -a_n, ..., -a_1, 0, a_1, ..., a_n with g(+-a_i) = f(a_i^2).
    std::vector<double> sym_nodes;
    std::vector<double> sym_vals;
    for (std::size_t i = n; i-- > 0;) {
        sym_nodes.push_back(-a[i]);
        sym_vals.push_back(fvals[i + 1]);
    }
    sym_nodes.push_back(0.0);
    sym_vals.push_back(fvals[0]);
    for (std::size_t i = 0; i < n; ++i) {
        sym_nodes.push_back(a[i]);
        sym_vals.push_back(fvals[i + 1]);
    }
    const double rhs = newton_table(sym_vals, NodeList(sym_nodes)).top();
    return {lhs, rhs};
}

}  // namespace divexp
