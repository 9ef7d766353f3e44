"""Is the zero polynomial a convex combination of the family?

Float path: least squares over the weight simplex (NNLS with a heavily
weighted sum-to-one row, then an equality-constrained polish on the
support). Exact path: vertex enumeration over rational nullspaces.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import nnls

from .poly import DEFAULT_TOL, Family, Tolerances

_SUM_WEIGHT = 1e4


def _simplex_lsq(Mn: np.ndarray) -> np.ndarray:
    n = Mn.shape[1]
    A = np.vstack([Mn, _SUM_WEIGHT * np.ones((1, n))])
    b = np.zeros(A.shape[0])
    b[-1] = _SUM_WEIGHT
    u, _ = nnls(A, b, maxiter=50 * n)
    support = np.flatnonzero(u > 1e-12 * max(u.max(), 1e-300))
    if support.size:
        # min |M_S v| subject to sum v = 1 via the KKT system
        Ms = Mn[:, support]
        k = support.size
        K = np.zeros((k + 1, k + 1))
        K[:k, :k] = 2 * Ms.T @ Ms
        K[:k, k] = 1.0
        K[k, :k] = 1.0
        rhs = np.zeros(k + 1)
        rhs[k] = 1.0
        try:
            sol = np.linalg.lstsq(K, rhs, rcond=None)[0][:k]
        except np.linalg.LinAlgError:
            sol = None
        if sol is not None and np.all(sol >= 0):
            cand = np.zeros(n)
            cand[support] = sol
            if np.linalg.norm(Mn @ cand) <= np.linalg.norm(Mn @ (u / u.sum())):
                return cand
    return u / u.sum() if u.sum() > 0 else np.full(n, 1.0 / n)


def min_norm_combination(family: Family) -> tuple[np.ndarray, float]:
    """Convex weights minimizing |sum c_i f_i| over unit-normalized members,
    with the relative residual. Weights are returned for the raw members."""
    M = family.matrix()
    norms = np.linalg.norm(M, axis=0)
    n = M.shape[1]
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        w = np.zeros(n)
        w[zero[0]] = 1.0
        return w, 0.0
    Mn = M / norms
    u = _simplex_lsq(Mn)
    u = np.clip(u, 0, None)
    u /= u.sum()
    resid = float(np.linalg.norm(Mn @ u))
    c = u / norms
    return c / c.sum(), resid


def zero_convex_combination(family: Family, tol: Tolerances = DEFAULT_TOL,
                            exact: bool = False):
    """Weights of a convex combination equal to zero, or None if the family
    is proper. ``exact=True`` decides over the rationals."""
    if exact:
        return zero_convex_combination_exact(family)
    w, resid = min_norm_combination(family)
    return w if resid <= tol.tau_proper else None


def is_proper(family: Family, tol: Tolerances = DEFAULT_TOL, exact: bool = False) -> bool:
    return zero_convex_combination(family, tol, exact) is None


def _rational_rows(family: Family):
    if family.rational is not None:
        return [list(r) for r in family.rational]
    return [[Fraction(float(x)) for x in m.coeffs] for m in family]


def zero_convex_combination_exact(family: Family, max_members: int = 12):
    """Exact search: a zero convex combination exists iff some support S has a
    one-dimensional rational nullspace spanned by a strictly positive vector."""
    import sympy

    n = len(family)
    if n > max_members:
        raise ValueError(f"exact mode supports at most {max_members} members")
    cols = _rational_rows(family)
    M = sympy.Matrix([[sympy.Rational(cols[j][i].numerator, cols[j][i].denominator)
                       for j in range(n)] for i in range(len(cols[0]))])
    rank = M.rank()
    for size in range(1, min(n, rank + 1) + 1):
        for S in combinations(range(n), size):
            ns = M[:, list(S)].nullspace()
            if len(ns) != 1:
                continue
            v = list(ns[0])
            if all(x > 0 for x in v) or all(x < 0 for x in v):
                total = sum(v)
                w = [Fraction(0)] * n
                for j, x in zip(S, v):
                    q = x / total
                    w[j] = Fraction(int(q.p), int(q.q))
                return w
    return None
