#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "divexp/divdiff.hpp"
#include "support/ddouble.hpp"
#include "support/fixtures.hpp"

using namespace divexp;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<double> exp_values(std::span<const double> x) {
    std::vector<double> v(x.size());
    std::transform(x.begin(), x.end(), v.begin(), [](double t) { return std::exp(t); });
    return v;
}

// Cumulative gaps in [1, 2], offset in [-3, 3], then shuffled. Keeps the
// plain tableau well conditioned so that only reordering is under test.
std::vector<double> separated_nodes(std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> gap(1.0, 2.0);
    std::uniform_real_distribution<double> offset(-3.0, 3.0);
    std::vector<double> x(count);
    x[0] = 0.0;
    for (std::size_t i = 1; i < count; ++i) x[i] = x[i - 1] + gap(rng);
    const double shift = offset(rng) - x.back() / 2.0;
    for (double& v : x) v += shift;
    std::shuffle(x.begin(), x.end(), rng);
    return x;
}

// n + 1 random nodes with exactly the given spread around a random centre.
std::vector<double> nodes_with_spread(std::mt19937_64& rng, std::size_t n, double spread, double centre) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n + 1);
    for (double& v : x) v = u(rng);
    x[0] = 0.0;
    x[n] = 1.0;
    for (double& v : x) v = centre + spread * (v - 0.5);
    std::shuffle(x.begin(), x.end(), rng);
    return x;
}

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

// Predicted relative error growth of the mean-centred recurrence.
double lagrange_amplification(std::span<const double> x, double value) {
    const double mu = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double w = std::exp(x[i] - mu);
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j != i) w /= std::abs(x[i] - x[j]);
        }
        total += w;
    }
    return total / (value * std::exp(-mu));
}

}  // namespace

TEST_SUITE("NodeList") {
    TEST_CASE("rejects empty and non-finite input") {
        CHECK_THROWS_AS(NodeList(std::vector<double>{}), std::invalid_argument);
        CHECK_THROWS_AS(NodeList({1.0, std::nan("")}), std::invalid_argument);
        CHECK_THROWS_AS(NodeList({HUGE_VAL}), std::invalid_argument);
    }

    TEST_CASE("geometry") {
        const NodeList n{2.0, -1.0, 2.0, 0.5};
        CHECK(n.size() == 4);
        CHECK(n.order() == 3);
        CHECK(n.min() == -1.0);
        CHECK(n.max() == 2.0);
        CHECK(n.spread() == 3.0);
        CHECK(n.has_repeats());
        const auto groups = n.distinct();
        REQUIRE(groups.size() == 3);
        CHECK(groups[0].value == -1.0);
        CHECK(groups[2].value == 2.0);
        CHECK(groups[2].multiplicity == 2);
        CHECK(n[0] == 2.0);  // order preserved
        CHECK(n.scaled(2.0) == NodeList{4.0, -2.0, 4.0, 1.0});
        CHECK(n.shifted(1.0) == NodeList{3.0, 0.0, 3.0, 1.5});
    }
}

TEST_SUITE("newton_table") {
    TEST_CASE("input validation") {
        const NodeList nodes{0.0, 1.0};
        const std::vector<double> one{1.0};
        CHECK_THROWS_AS(newton_table(one, nodes), std::invalid_argument);
        const std::vector<double> two{1.0, 2.0};
        CHECK_THROWS_AS(newton_table(two, NodeList{1.0, 1.0}), std::invalid_argument);
        const DDTable t = newton_table(two, nodes);
        CHECK_THROWS_AS(t(1, 0), std::out_of_range);
        CHECK_THROWS_AS(t(0, 2), std::out_of_range);
    }

    TEST_CASE("tableau entries satisfy the recurrence") {
        const NodeList nodes{-1.0, 0.5, 2.0, 3.5, 4.0};
        const auto vals = exp_values(nodes.values());
        const DDTable t = newton_table(vals, nodes);
        for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(t(i, i) == vals[i]);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                const double expect = (t(i + 1, j) - t(i, j - 1)) / (nodes[j] - nodes[i]);
                CHECK(t(i, j) == doctest::Approx(expect).epsilon(1e-15));
            }
        }
    }

    TEST_CASE("polynomial exactness") {
        std::mt19937_64 rng(7);
        for (std::size_t n = 1; n <= 6; ++n) {
            const NodeList nodes(separated_nodes(rng, n + 1));
            // p(x) = 3 x^n + lower-order terms; q has degree n - 1
            std::vector<double> p(n + 1);
            std::vector<double> q(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                const double x = nodes[i];
                p[i] = 3.0 * std::pow(x, static_cast<double>(n)) - 2.0 * std::pow(x, static_cast<double>(n - 1)) + 1.0;
                q[i] = std::pow(x, static_cast<double>(n - 1)) + 0.5;
            }
            CAPTURE(n);
            CHECK(newton_table(p, nodes).top() == doctest::Approx(3.0).epsilon(1e-11));
            CHECK(std::abs(newton_table(q, nodes).top()) < 1e-11);
        }
    }

    TEST_CASE("permutation invariance over 1000 random node sets") {
        std::mt19937_64 rng(20090301);
        std::uniform_int_distribution<std::size_t> order(1, 8);
        double worst = 0.0;
        for (int rep = 0; rep < 1000; ++rep) {
            const std::size_t n = order(rng);
            std::vector<double> x = separated_nodes(rng, n + 1);
            const double a = newton_table(exp_values(x), NodeList(x)).top();
            std::shuffle(x.begin(), x.end(), rng);
            const double b = newton_table(exp_values(x), NodeList(x)).top();
            worst = std::max(worst, rel(a, b));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_SUITE("exp_dd") {
    TEST_CASE("reference table") {
        for (const auto& c : testsupport::load_fixture("exp_dd.txt")) {
            CAPTURE(c.line);
            const NodeList nodes(c.nodes);
            CHECK(rel(exp_dd(nodes), c.expected) <= c.tolerance);
            CHECK(rel(exp_dd(nodes, 1.0, EvalMethod::TaylorMatrix), c.expected) <= c.tolerance);
        }
    }

    TEST_CASE("benchmark values") {
        CHECK(rel(exp_dd({0.0, 0.05, 0.14}), 0.53291500034602833) < 1e-14);
        CHECK(rel(exp_dd({0.0, 1.0, 2.0}), 1.4762462210062799) < 1e-14);
        // (e - 1)^2 / 2
        CHECK(rel(exp_dd({0.0, 1.0, 2.0}), std::expm1(1.0) * std::expm1(1.0) / 2.0) < 1e-14);
        CHECK(rel(exp_dd({0.0, 1.0}), std::expm1(1.0)) < 1e-15);
    }

    TEST_CASE("confluent nodes give e^x / n!") {
        for (double x : {-7.0, -1.0, 0.0, 0.3, 2.5, 10.0}) {
            for (std::size_t n = 0; n <= 8; ++n) {
                CAPTURE(x);
                CAPTURE(n);
                const NodeList nodes(std::vector<double>(n + 1, x));
                const double want = std::exp(x) / factorial(n);
                CHECK(rel(exp_dd(nodes), want) <= 1e-14);
                CHECK(rel(exp_dd(nodes, 1.0, EvalMethod::TaylorMatrix), want) <= 1e-14);
                CHECK(rel(exp_dd(nodes, 1.0, EvalMethod::Recurrence), want) <= 1e-14);
            }
        }
    }

    TEST_CASE("confluent limit of two nodes") {
        for (double x = -5.0; x <= 5.0; x += 0.5) {
            for (double eps : {1e-4, 1e-6, 1e-9, 1e-12}) {
                CHECK(std::abs(exp_dd({x, x + eps}) - std::exp(x)) <= 2.0 * eps * std::exp(x));
            }
        }
    }

    TEST_CASE("shift identity") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> shift(-20.0, 20.0);
        std::uniform_real_distribution<double> spread(1e-8, 6.0);
        std::uniform_int_distribution<std::size_t> order(1, 8);
        for (int rep = 0; rep < 500; ++rep) {
            const std::size_t n = order(rng);
            const NodeList nodes(nodes_with_spread(rng, n, spread(rng), shift(rng) / 4.0));
            const double mu = shift(rng);
            CHECK(rel(std::exp(mu) * exp_dd(nodes), exp_dd(nodes.shifted(mu))) <= 1e-12);
        }
    }

    TEST_CASE("scale argument matches pre-scaled nodes") {
        const NodeList nodes{0.0, 0.05, 0.14, 0.27};
        for (double s : {0.5, 1.0, 3.0}) CHECK(rel(exp_dd(nodes, s), exp_dd(nodes.scaled(s))) < 1e-15);
        CHECK(exp_dd(nodes, 0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    }

    TEST_CASE("positivity, including wide and negative nodes") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> centre(-50.0, 50.0);
        std::uniform_real_distribution<double> logspread(-12.0, 1.5);
        for (int rep = 0; rep < 500; ++rep) {
            const std::size_t n = 1 + static_cast<std::size_t>(rep % 8);
            const NodeList nodes(nodes_with_spread(rng, n, std::pow(10.0, logspread(rng)), centre(rng)));
            CHECK(exp_dd(nodes) > 0.0);
        }
    }

    TEST_CASE("node sets wider than the exponent range") {
        // e^{x_max - x_min} overflows, the divided difference does not
        const std::pair<NodeList, double> cases[] = {
            {NodeList{-1799.0, 0.0}, 0.00055586436909394107838},
            {NodeList{-1799.0, 0.0, -900.0}, 6.1762707677104564264e-7},
            {NodeList{-1799.0, 0.0, -900.0, -1800.0}, 3.4312615376169202369e-10},
            {NodeList{-3000.0, -2990.0, -1.0}, 4.1039601710823683906e-8},
        };
        for (const auto& [nodes, want] : cases) {
            CHECK(rel(exp_dd(nodes), want) < 1e-15);
            CHECK(rel(exp_dd(nodes, 1.0, EvalMethod::Recurrence), want) < 1e-15);
            // each squaring doubles the relative error of the diagonal, so the
            // matrix method loses about log2(spread) bits here
            CHECK(rel(exp_dd(nodes, 1.0, EvalMethod::TaylorMatrix), want) < 4.0 * nodes.spread() * 0x1p-52);
        }
    }

    TEST_CASE("order of the nodes is irrelevant") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> x = nodes_with_spread(rng, 1 + rep % 8, 2.0, 0.0);
            const double a = exp_dd(NodeList(x));
            std::shuffle(x.begin(), x.end(), rng);
            CHECK(exp_dd(NodeList(x)) == a);
        }
    }

    TEST_CASE("TaylorMatrix against double-double oracles down to spread 1e-6") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> centre(-5.0, 5.0);
        double worst = 0.0;
        std::size_t recurrence_checked = 0;
        for (std::size_t n = 1; n <= 8; ++n) {
            for (double spread : {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
                for (int rep = 0; rep < 10; ++rep) {
                    const std::vector<double> x = nodes_with_spread(rng, n, spread, centre(rng));
                    const double got = exp_dd(NodeList(x), 1.0, EvalMethod::TaylorMatrix);
                    const auto taylor = testsupport::dd_taylor(x);
                    REQUIRE(taylor.rel_error < 1e-14);
                    worst = std::max(worst, rel(got, taylor.value));
                    const auto newton = testsupport::dd_recurrence(x);
                    if (newton.rel_error < 1e-12) {
                        ++recurrence_checked;
                        worst = std::max(worst, rel(got, newton.value));
                    }
                }
            }
        }
        CHECK(worst <= 1e-10);
        CHECK(recurrence_checked > 100);
        MESSAGE("worst TaylorMatrix relative error " << worst << ", recurrence oracle cases " << recurrence_checked);
    }

    TEST_CASE("Auto keeps full accuracy at every spread") {
        std::mt19937_64 rng(123);
        std::uniform_real_distribution<double> centre(-5.0, 5.0);
        double worst = 0.0;
        for (std::size_t n = 1; n <= 8; ++n) {
            for (double spread : {4.0, 1.0, 0.3, 1e-1, 1e-2, 1e-4, 1e-8, 1e-12}) {
                for (int rep = 0; rep < 10; ++rep) {
                    const std::vector<double> x = nodes_with_spread(rng, n, spread, centre(rng));
                    worst = std::max(worst, rel(exp_dd(NodeList(x)), testsupport::dd_taylor(x).value));
                }
            }
        }
        CHECK(worst <= 1e-12);
    }

    TEST_CASE("method agreement for spreads of at least 1e-2") {
        // Recurrence and the forward-difference formula lose digits in
        // proportion to their Lagrange amplification, which is unbounded
        // for nearly coincident nodes at any spread. Agreement is asserted
        // wherever the predicted error is below 1e-11, which includes every
        // two- and three-node set over this range.
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> centre(-5.0, 5.0);
        std::size_t asserted = 0;
        for (std::size_t n = 1; n <= 8; ++n) {
            for (double spread : {1e-2, 3e-2, 1e-1, 0.3, 1.0, 3.0}) {
                for (int rep = 0; rep < 30; ++rep) {
                    const double c = centre(rng);
                    const std::vector<double> x = nodes_with_spread(rng, n, spread, c);
                    const NodeList nodes(x);
                    const double ref = exp_dd(nodes, 1.0, EvalMethod::TaylorMatrix);
                    CHECK(rel(exp_dd(nodes), ref) <= 1e-9);
                    if (lagrange_amplification(x, ref) * 0x1p-52 <= 1e-11) {
                        ++asserted;
                        CHECK(rel(exp_dd(nodes, 1.0, EvalMethod::Recurrence), ref) <= 1e-9);
                    }

                    std::vector<double> e(n + 1);
                    for (std::size_t k = 0; k <= n; ++k) e[k] = c + spread * static_cast<double>(k) / static_cast<double>(n);
                    const NodeList eq(e);
                    const double eref = exp_dd(eq, 1.0, EvalMethod::TaylorMatrix);
                    if (lagrange_amplification(e, eref) * 0x1p-52 <= 1e-11) {
                        ++asserted;
                        CHECK(rel(exp_dd(eq, 1.0, EvalMethod::Recurrence), eref) <= 1e-9);
                        CHECK(rel(exp_dd(eq, 1.0, EvalMethod::EquispacedForwardDifference), eref) <= 1e-9);
                    }
                }
            }
        }
        MESSAGE("method agreement asserted on " << asserted << " node sets");
        CHECK(asserted > 1000);
    }

    TEST_CASE("forward differences need equispaced nodes") {
        CHECK_THROWS_AS(exp_dd({0.0, 1.0, 3.0}, 1.0, EvalMethod::EquispacedForwardDifference), std::invalid_argument);
        CHECK(rel(exp_dd({0.0, 0.5, 1.0}, 1.0, EvalMethod::EquispacedForwardDifference),
                  exp_dd({0.0, 0.5, 1.0})) < 1e-14);
    }

    TEST_CASE("resolve_method follows the node geometry") {
        CHECK(resolve_method({0.0, 1e-3, 2e-3}) == EvalMethod::TaylorMatrix);
        CHECK(resolve_method({1.0, 1.0, 2.0}) == EvalMethod::TaylorMatrix);
        CHECK(resolve_method({0.0, 1.0, 2.0}) == EvalMethod::Recurrence);
        // wide but with one nearly coincident pair
        CHECK(resolve_method({0.0, 1.0, 1.0 + 1e-9, 2.0, 3.0}) == EvalMethod::TaylorMatrix);
        CHECK(std::string(to_string(EvalMethod::TaylorMatrix)) == "TaylorMatrix");
    }

    TEST_CASE("bad scale") {
        CHECK_THROWS_AS(exp_dd({0.0, 1.0}, std::nan("")), std::invalid_argument);
        CHECK_THROWS_AS(exp_dd({0.0, 1e300}, 1e10), std::invalid_argument);
    }
}

TEST_SUITE("equispaced and symmetric formulas") {
    TEST_CASE("forward differences of x^n are 1") {
        for (std::size_t n = 1; n <= 6; ++n) {
            std::vector<double> f(n + 1);
            for (std::size_t k = 0; k <= n; ++k) f[k] = std::pow(0.5 + 0.25 * static_cast<double>(k), static_cast<double>(n));
            CHECK(equispaced_dd(f, 0.25, n) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    // Rounding in the samples is amplified by about (2 / h)^n.
    double fd_tolerance(double h, std::size_t n) { return 8.0 * std::max(1.0, std::pow(2.0 / h, static_cast<double>(n))) * 0x1p-52; }

    TEST_CASE("agree with exp_dd") {
        for (double h : {0.3, 1.0, 2.5}) {
            for (std::size_t n = 1; n <= 6; ++n) {
                std::vector<double> x(n + 1);
                for (std::size_t k = 0; k <= n; ++k) x[k] = -0.4 + h * static_cast<double>(k);
                CAPTURE(h);
                CAPTURE(n);
                CHECK(rel(equispaced_dd(exp_values(x), h, n), exp_dd(NodeList(x))) < fd_tolerance(h, n));
            }
        }
    }

    TEST_CASE("symmetric nodes") {
        // g(z) = exp(z^2) on -1, 0, 1: (e - 2 + e) / 2 = e - 1
        const std::vector<double> g{std::exp(1.0), 1.0, std::exp(1.0)};
        CHECK(rel(symmetric_equispaced_dd(g, 1.0, 1), std::expm1(1.0)) < 1e-15);
        for (std::size_t n = 1; n <= 4; ++n) {
            std::vector<double> z(2 * n + 1);
            for (std::size_t k = 0; k <= 2 * n; ++k) z[k] = 0.2 * (static_cast<double>(k) - static_cast<double>(n));
            CHECK(rel(symmetric_equispaced_dd(exp_values(z), 0.2, n), exp_dd(NodeList(z))) < fd_tolerance(0.2, 2 * n));
        }
    }

    TEST_CASE("validation") {
        const std::vector<double> f{1.0, 2.0};
        CHECK_THROWS_AS(equispaced_dd(f, 0.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(equispaced_dd(f, 1.0, 2), std::invalid_argument);
        CHECK_THROWS_AS(symmetric_equispaced_dd(f, 1.0, 1), std::invalid_argument);
    }
}

TEST_SUITE("Leibniz rule") {
    TEST_CASE("product of exp and a cubic") {
        std::mt19937_64 rng(17);
        for (std::size_t n = 1; n <= 7; ++n) {
            const NodeList nodes(separated_nodes(rng, n + 1));
            std::vector<double> v(n + 1);
            std::vector<double> w(n + 1);
            std::vector<double> vw(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                const double x = nodes[i];
                v[i] = std::exp(0.5 * x);
                w[i] = x * x * x - x + 2.0;
                vw[i] = v[i] * w[i];
            }
            const double direct = newton_table(vw, nodes).top();
            const double product = leibniz_dd(newton_table(v, nodes), newton_table(w, nodes));
            CAPTURE(n);
            CHECK(std::abs(product - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
        }
    }

    TEST_CASE("exponentials multiply into a shifted exponential") {
        // exp(a x) exp(b x) = exp((a + b) x)
        const NodeList nodes{-1.0, 0.25, 0.7, 1.9};
        std::vector<double> v(4);
        std::vector<double> w(4);
        for (std::size_t i = 0; i < 4; ++i) {
            v[i] = std::exp(0.3 * nodes[i]);
            w[i] = std::exp(0.9 * nodes[i]);
        }
        const double prod = leibniz_dd(newton_table(v, nodes), newton_table(w, nodes));
        CHECK(rel(prod, exp_dd(nodes, 1.2) * std::pow(1.2, 3.0)) < 1e-13);
    }

    TEST_CASE("tables must share nodes") {
        const std::vector<double> v{1.0, 2.0};
        CHECK_THROWS_AS(leibniz_dd(newton_table(v, NodeList{0.0, 1.0}), newton_table(v, NodeList{0.0, 2.0})),
                        std::invalid_argument);
    }
}

TEST_SUITE("squared nodes") {
    TEST_CASE("worked values") {
        const std::vector<double> f1{1.0, std::exp(1.0)};
        const std::vector<double> a1{1.0};
        const SquareNodesResult r1 = square_nodes_dd(f1, a1);
        CHECK(rel(r1.lhs, std::expm1(1.0)) < 1e-15);
        CHECK(rel(r1.rhs, std::expm1(1.0)) < 1e-15);

        const std::vector<double> f2{1.0, std::exp(1.0), std::exp(2.0)};
        const std::vector<double> a2{1.0, std::sqrt(2.0)};
        const SquareNodesResult r2 = square_nodes_dd(f2, a2);
        CHECK(rel(r2.lhs, 1.4762462210062799) < 1e-14);
        CHECK(rel(r2.rhs, 1.4762462210062799) < 1e-13);
    }

    TEST_CASE("random exponentials and polynomials") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> mag(0.3, 2.0);
        for (std::size_t n = 1; n <= 4; ++n) {
            std::vector<double> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = (i % 2 ? -1.0 : 1.0) * (mag(rng) + static_cast<double>(i));
            std::vector<double> fe(n + 1);
            std::vector<double> fp(n + 1);
            fe[0] = 1.0;
            fp[0] = n == 1 ? 5.5 : 5.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double y = a[i] * a[i];
                fe[i + 1] = std::exp(y);
                fp[i + 1] = 2.0 * std::pow(y, static_cast<double>(n)) + 0.5 * std::pow(y, static_cast<double>(n - 1)) + 5.0;  // leading coefficient 2
            }
            const SquareNodesResult e = square_nodes_dd(fe, a);
            CHECK(rel(e.lhs, e.rhs) < 1e-10);
            const SquareNodesResult p = square_nodes_dd(fp, a);
            CHECK(p.lhs == doctest::Approx(2.0).epsilon(1e-10));
            CHECK(p.rhs == doctest::Approx(2.0).epsilon(1e-9));
        }
    }

    TEST_CASE("validation") {
        const std::vector<double> f{1.0, 2.0, 3.0};
        const std::vector<double> zero{0.0, 1.0};
        const std::vector<double> twin{1.0, -1.0};
        const std::vector<double> ok{1.0, 2.0};
        CHECK_THROWS_AS(square_nodes_dd(f, zero), std::invalid_argument);
        CHECK_THROWS_AS(square_nodes_dd(f, twin), std::invalid_argument);
        CHECK_THROWS_AS(square_nodes_dd(std::span<const double>(f).first(2), ok), std::invalid_argument);
    }
}
