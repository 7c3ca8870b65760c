"""Regenerates tests/fixtures/exp_dd.txt.

Reference values are the top-right entry of expm of the bidiagonal matrix
with the nodes on its diagonal, in 80-digit arithmetic, cross-checked
against the Newton recurrence at 200 digits when the nodes are distinct.
"""
import sys
import mpmath as mp

CASES = [
    # (nodes, tolerance, comment)
    ([0, 0.05, 0.14], 1e-14, "benchmark cross moment nodes"),
    ([0, 1, 2], 1e-14, None),
    ([0.05, 0.1, 0.14], 1e-14, None),
    ([0.1, 0.14], 1e-14, None),
    ([0, 0.05, 0.1, 0.14], 1e-14, None),
    ([0, 0.05, 0.14, 0.27, 0.44], 1e-14, "b nodes of E A^4"),
    ([0.3], 1e-15, "order zero"),
    ([1, 1, 1], 1e-14, "confluent, e/2"),
    ([-2, -2, -2, -2, -2], 1e-14, "confluent"),
    ([0, 0, 1], 1e-14, "partially confluent"),
    ([0.5, 0.5, -0.5, -0.5], 1e-14, None),
    ([1, 1 + 1e-7, 1 + 2e-7, 1 + 3e-7], 1e-13, "cluster"),
    ([-3, -3 + 1e-9, -3 + 4e-9], 1e-13, "cluster"),
    ([0, 1e-6, 3e-6, 6e-6, 1e-5, 1.5e-5], 1e-13, None),
    ([-10, -5, 0, 5, 10], 1e-12, "wide"),
    ([-30, 1], 1e-14, None),
    ([40, 20, -20], 1e-12, "unsorted"),
    ([2, 0.1, 0.2, 4, -1, 0.7, 3, 1.5], 1e-12, "order seven"),
    ([-40, 0.5, 1, 0], 1e-12, None),
    ([100, 100.5, 101], 1e-13, "large magnitude"),
    ([-700, -699], 1e-12, "deep underflow side"),
]


def expm_corner(nodes):
    n = len(nodes)
    M = mp.zeros(n, n)
    for i, x in enumerate(nodes):
        M[i, i] = mp.mpf(x)
        if i + 1 < n:
            M[i, i + 1] = 1
    return mp.expm(M)[0, n - 1]


def newton(nodes):
    xs = [mp.mpf(x) for x in nodes]
    col = [mp.e ** x for x in xs]
    for k in range(1, len(xs)):
        col = [(col[i + 1] - col[i]) / (xs[i + k] - xs[i]) for i in range(len(col) - 1)]
    return col[0]


def main(out):
    out.write("# nodes | exp[nodes] | relative tolerance\n")
    for nodes, tol, comment in CASES:
        mp.mp.dps = 80
        nodes = [mp.mpf(repr(float(x))) for x in nodes]
        value = expm_corner(nodes)
        if len(set(nodes)) == len(nodes):
            mp.mp.dps = 200
            check = newton(nodes)
            assert abs(check - value) <= mp.mpf(10) ** -60 * abs(value), nodes
            mp.mp.dps = 80
        if comment:
            out.write(f"# {comment}\n")
        text = ", ".join(repr(float(x)) for x in nodes)
        out.write(f"{text} | {mp.nstr(value, 20, min_fixed=-1, max_fixed=-1)} | {tol:g}\n")


if __name__ == "__main__":
    main(sys.stdout)
