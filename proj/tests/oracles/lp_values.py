"""Recomputes the frozen numeric constants used by the C++ tests with an
independent method: every upper expectation is a linear program over the
credal set, solved with scipy, and chain quantities are formed by
brute-force enumeration of probability trees.

Exit status is nonzero if any constant disagrees.
"""

import itertools
import sys

import numpy as np
from scipy.optimize import linprog


def lp_upper(h, lo=None, up=None, vertices=None):
    h = np.asarray(h, dtype=float)
    n = len(h)
    if vertices is not None:
        return max(float(np.dot(v, h)) for v in vertices)
    res = linprog(-h, A_eq=np.ones((1, n)), b_eq=[1.0], bounds=list(zip(lo, up)), method="highs")
    assert res.status == 0, res.message
    return float(-res.fun)


def contamination(base, eps):
    n = len(base)
    return [[(1 - eps) * b + (eps if i == j else 0.0) for j, b in enumerate(base)] for i in range(n)]


EX53_INIT = dict(lo=[0.6, 0.1], up=[0.9, 0.4])
EX53_ROWS = [contamination([0.15, 0.85], 0.1), contamination([0.85, 0.15], 0.1)]
EX54_LO = np.array([[9, 9, 162], [144, 18, 18], [9, 162, 9]]) / 200
EX54_UP = np.array([[19, 19, 172], [154, 28, 28], [19, 172, 19]]) / 200


def init_vertices():
    # 2-state interval: the two endpoints of the segment.
    return [[0.6, 0.4], [0.9, 0.1]]


def tree_envelope(horizon, f):
    """max/min over trees with a separate vertex choice per situation."""
    situations = [()] + [s for k in range(1, horizon) for s in itertools.product(range(2), repeat=k)]
    choices = [init_vertices() if s == () else EX53_ROWS[s[-1]] for s in situations]
    best, worst = -np.inf, np.inf
    for pick in itertools.product(*[range(len(c)) for c in choices]):
        q = {s: choices[i][pick[i]] for i, s in enumerate(situations)}
        total = 0.0
        for path in itertools.product(range(2), repeat=horizon):
            w = q[()][path[0]]
            for k in range(1, horizon):
                w *= q[path[:k]][path[k]]
            total += w * f(path)
        best, worst = max(best, total), min(worst, total)
    return worst, best


def main():
    checks = []

    def check(name, got, want, tol):
        ok = abs(got - want) <= tol
        checks.append(ok)
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {got:.12g} (frozen {want})")

    lo, up = tree_envelope(2, lambda p: float(p[1] == 0))
    check("marginal upper at n=2", up, 0.487, 1e-12)
    check("marginal lower at n=2", lo, 0.198, 1e-12)
    lo, up = tree_envelope(2, lambda p: float(p == (0, 0)))
    check("path (a,a) upper", up, 0.2115, 1e-12)
    check("path (a,a) lower", lo, 0.081, 1e-12)

    # Conditional on X(1)=a, two steps, upper probability of a.
    step = [lp_upper([1, 0], vertices=EX53_ROWS[x]) for x in range(2)]
    check("conditional upper, two steps from a", lp_upper(step, vertices=EX53_ROWS[0]), 0.77995, 1e-12)

    check("interval row b, h=(1,0.5,0)", lp_upper([1, 0.5, 0], EX54_LO[1], EX54_UP[1]), 0.84, 1e-9)
    check("interval row a, event {a}", lp_upper([1, 0, 0], EX54_LO[0], EX54_UP[0]), 0.095, 1e-9)
    check("interval row b, event {a,b}", lp_upper([1, 1, 0], EX54_LO[1], EX54_UP[1]), 0.91, 1e-9)

    t = np.array([[0.15, 0.85], [0.85, 0.15]])
    check("precise power n=2 at a", (t @ t @ np.array([1.0, 0.0]))[0], 0.745, 1e-12)

    # Invariant upper probability by iterating the operator with LP rows.
    h = np.array([1.0, 0.0])
    for _ in range(200):
        h = np.array([lp_upper(h, vertices=EX53_ROWS[x]) for x in range(2)])
    check("limit upper probability of a", h.max(), 0.635135135135, 1e-9)

    # Stationary distribution of the boundary chain.
    p = np.array([[0.135, 0.865], [0.865, 0.135]])
    w, v = np.linalg.eig(p.T)
    pi = np.real(v[:, np.argmin(abs(w - 1))])
    check("stationary pi(a)", pi[0] / pi.sum(), 0.5, 1e-12)

    print(f"{sum(checks)}/{len(checks)} constants confirmed")
    return 0 if all(checks) else 1


if __name__ == "__main__":
    sys.exit(main())
