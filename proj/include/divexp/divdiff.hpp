#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace divexp {

/// Interpolation abscissae. Repeats are allowed; the order of the entries is
/// preserved as given.
class NodeList {
public:
    struct Group {
        double value;
        std::size_t multiplicity;
    };

    /// Throws std::invalid_argument for an empty list or a non-finite entry.
    explicit NodeList(std::vector<double> nodes);
    NodeList(std::initializer_list<double> nodes);

    std::size_t size() const { return nodes_.size(); }
    /// Order of the divided difference taken over all nodes.
    std::size_t order() const { return nodes_.size() - 1; }
    double operator[](std::size_t i) const { return nodes_[i]; }
    std::span<const double> values() const { return nodes_; }

    double min() const;
    double max() const;
    double spread() const { return max() - min(); }
    bool has_repeats() const;

    /// Distinct values in ascending order with their multiplicities.
    std::vector<Group> distinct() const;

    NodeList scaled(double factor) const;
    NodeList shifted(double offset) const;

    friend bool operator==(const NodeList&, const NodeList&) = default;

private:
    std::vector<double> nodes_;
};

/// Triangular Newton tableau: entry (i, j), i <= j, is f[x_i, ..., x_j].
class DDTable {
public:
    DDTable(NodeList nodes, std::vector<double> entries);

    const NodeList& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    double operator()(std::size_t i, std::size_t j) const;
    /// f[x_0, ..., x_n]
    double top() const { return (*this)(0, size() - 1); }

private:
    std::size_t index(std::size_t i, std::size_t j) const;

    NodeList nodes_;
    std::vector<double> entries_;
};

enum class EvalMethod { Recurrence, EquispacedForwardDifference, TaylorMatrix, Auto };

const char* to_string(EvalMethod method);

/// Builds the full tableau from point values at pairwise distinct nodes.
/// Throws std::invalid_argument on a length mismatch or coincident nodes.
DDTable newton_table(std::span<const double> values, const NodeList& nodes);

/// exp[s*x_0, ..., s*x_n] for arbitrary real nodes, repeats included.
///
/// Recurrence evaluates the Newton tableau (with e^x/k! on confluent runs)
/// after shifting the nodes to their mean. TaylorMatrix reads the corner of
/// the exponential of the bidiagonal matrix with the nodes on its diagonal,
/// computed by a truncated Taylor series and repeated squaring; it keeps
/// full relative accuracy for clustered nodes. EquispacedForwardDifference
/// requires equally spaced distinct nodes and throws otherwise. Auto picks
/// between the first two from the node geometry (see resolve_method).
double exp_dd(const NodeList& nodes, double scale = 1.0, EvalMethod method = EvalMethod::Auto);

/// Concrete method Auto resolves to for these (already scaled) nodes.
/// TaylorMatrix when the spread is below 0.05 * (1 + max|x|), when nodes
/// repeat, or when the Lagrange weights predict a recurrence error above
/// ~1e-13 relative; Recurrence otherwise.
EvalMethod resolve_method(const NodeList& nodes);

/// f[x, x+h, ..., x+nh] from the n+1 samples f(x + kh), via the binomial
/// forward-difference sum. Throws std::invalid_argument for h <= 0 or a
/// sample count other than n+1.
double equispaced_dd(std::span<const double> fvals, double h, std::size_t n);

/// f[-nh, ..., 0, ..., nh] from the 2n+1 samples f((k-n)h), k = 0..2n.
double symmetric_equispaced_dd(std::span<const double> fvals, double h, std::size_t n);

/// Product rule: sum_k v[z_0..z_k] * w[z_k..z_n] = (v w)[z_0..z_n].
/// Both tables must be built on the same nodes.
double leibniz_dd(const DDTable& vtable, const DDTable& wtable);

struct SquareNodesResult {
    double lhs;  ///< f[0, a_1^2, ..., a_n^2]
    double rhs;  ///< g[-a_n, ..., -a_1, 0, a_1, ..., a_n] with g(z) = f(z^2)
};

/// Evaluates both sides of the squared-node identity from the samples
/// fvals = f(0), f(a_1^2), ..., f(a_n^2). The a_i must be distinct, nonzero
/// and distinct in absolute value.
SquareNodesResult square_nodes_dd(std::span<const double> fvals, std::span<const double> a);

}  // namespace divexp
