"""Real roots with multiplicities and a quantified real-rootedness test.

The main backend is companion-matrix eigenvalues followed by clustering
and Newton polishing. An exact Sturm-sequence backend (rational arithmetic
on the binary value of the float coefficients) arbitrates borderline cases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
import numpy.polynomial.polynomial as npoly

from .poly import DEFAULT_TOL, IS_ZERO, Poly, Tolerances, effective_degree


class ZeroPolynomialError(ValueError):
    pass


class NotRealRooted(ValueError):
    """Raised by :func:`real_roots`; ``margin`` is the offending complex margin."""

    def __init__(self, margin: float):
        super().__init__(f"polynomial is not real-rooted (margin {margin:.3g})")
        self.margin = margin


@dataclass(frozen=True)
class RootSpectrum:
    roots: tuple  # ((value, multiplicity), ...) strictly descending by value
    roots_at_infinity: int
    min_gap: float

    @property
    def finite_count(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def ambient_degree(self) -> int:
        return self.finite_count + self.roots_at_infinity

    def expanded(self) -> np.ndarray:
        """Finite roots repeated by multiplicity, descending (lambda_1 >= lambda_2 ...)."""
        return np.array([v for v, m in self.roots for _ in range(m)], dtype=float)

    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.roots], dtype=float)


class Verdict(str, Enum):
    REAL_ROOTED = "RealRooted"
    NOT_REAL_ROOTED = "NotRealRooted"
    BORDERLINE = "Borderline"


@dataclass(frozen=True)
class RealRootedness:
    verdict: Verdict
    margin: float

    def __bool__(self):
        return self.verdict is Verdict.REAL_ROOTED


def _radius(z, tol: Tolerances) -> float:
    return tol.tau_root * (1.0 + abs(z))


def _complex_margin(z) -> float:
    return abs(z.imag) / max(1.0, abs(z))


def _scaled_trimmed(p: Poly, tol: Tolerances):
    eff = effective_degree(p, tol)
    if eff is IS_ZERO:
        raise ZeroPolynomialError("the zero polynomial has no root spectrum")
    c = np.array(p.coeffs[: eff.degree + 1]) / p.scale
    return c, eff


def _cluster(z: np.ndarray, tol: Tolerances) -> list[list[int]]:
    """Single-linkage clusters of eigenvalues at radius tau_root*(1+|z|),
    then merging of larger groups that look like a split multiple root."""
    k = z.size
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(z[i] - z[j]) <= tol.tau_root * (1 + max(abs(z[i]), abs(z[j]))):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    clusters = list(groups.values())
    if not np.any(np.abs(z.imag) > tol.tau_root * (1 + np.abs(z))):
        return clusters

    # an m-fold root splits on a circle of radius ~ eps**(1/m); accept
    # groups of m >= 3 within tau_root**(2/m) when they contain a split pair
    def acceptable(idx):
        m = len(idx)
        c = z[idx].mean()
        if m < 3 or abs(c.imag) > _radius(c, tol):
            return False
        if not np.any(np.abs(z[idx].imag) > _radius(c, tol)):
            return False
        spread = float(np.max(np.abs(z[idx] - c)))
        return spread <= tol.tau_root ** (2.0 / m) * (1 + abs(c))

    while len(clusters) > 1:
        best = None
        means = np.array([z[c].mean() for c in clusters])
        for a in range(len(clusters)):
            ca = means[a]
            dist = np.abs(means - ca)
            group = [a]
            idx = list(clusters[a])
            for b in np.argsort(dist, kind="stable"):
                if b == a:
                    continue
                if dist[b] > 1e-2 * (1 + abs(ca)):
                    break
                group.append(int(b))
                idx = idx + clusters[b]
                if len(idx) >= 3 and acceptable(idx):
                    if best is None or len(idx) > best[0]:
                        best = (len(idx), list(group))
        if best is None:
            break
        keep = sorted(best[1])
        fused = [i for g in keep for i in clusters[g]]
        clusters = [c for k, c in enumerate(clusters) if k not in keep] + [fused]
    return clusters


def _polish(c: np.ndarray, x: float, m: int, radius: float) -> float:
    """Newton on the (m-1)-th derivative, which has a simple root at an m-fold root."""
    q = npoly.polyder(c, m - 1) if m > 1 else c
    dq = npoly.polyder(q)
    y = x
    for _ in range(8):
        den = npoly.polyval(y, dq)
        if den == 0 or not np.isfinite(den):
            break
        step = npoly.polyval(y, q) / den
        y = y - step
        if not np.isfinite(y) or abs(y - x) > radius:
            return x
        if abs(step) <= 1e-16 * (1 + abs(y)):
            break
    return float(y)


def root_clusters(p: Poly, tol: Tolerances = DEFAULT_TOL) -> list[tuple[complex, int]]:
    """All finite roots as (center, multiplicity); real centers are polished."""
    c, eff = _scaled_trimmed(p, tol)
    if eff.degree == 0:
        return []
    z = npoly.polyroots(c)
    out = []
    for idx in _cluster(z, tol):
        m = len(idx)
        center = complex(z[idx].mean())
        if abs(center.imag) <= _radius(center, tol):
            rad = max(_radius(center, tol), float(np.max(np.abs(z[idx] - center))))
            center = complex(_polish(c, center.real, m, 2 * rad + _radius(center, tol)), 0.0)
        out.append((center, m))
    return out


def complex_margin(p: Poly, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest |Im| among cluster centers, each relative to max(1, |root|)."""
    clusters = root_clusters(p, tol)
    return max((_complex_margin(v) for v, _ in clusters), default=0.0)


def real_roots(p: Poly, tol: Tolerances = DEFAULT_TOL) -> RootSpectrum:
    """Sorted real roots with multiplicities; raises :class:`NotRealRooted`."""
    eff = effective_degree(p, tol)
    if eff is IS_ZERO:
        raise ZeroPolynomialError("the zero polynomial has no root spectrum")
    clusters = root_clusters(p, tol)
    margin = max((_complex_margin(v) for v, _ in clusters), default=0.0)
    if margin > tol.tau_root:
        raise NotRealRooted(margin)
    # clusters can come out overlapping after polishing; fuse equal values
    pairs = sorted(((v.real, m) for v, m in clusters), key=lambda vm: -vm[0])
    fused: list[list] = []
    for v, m in pairs:
        if fused and abs(fused[-1][0] - v) <= _radius(v, tol) * 0.5:
            fused[-1][1] += m
        else:
            fused.append([v, m])
    roots = tuple((float(v), int(m)) for v, m in fused)
    vals = [v for v, _ in roots]
    gap = min((a - b for a, b in zip(vals, vals[1:])), default=math.inf)
    return RootSpectrum(roots, eff.roots_at_infinity, float(gap))


def is_real_rooted(p: Poly, tol: Tolerances = DEFAULT_TOL,
                   cross_check: bool = True) -> RealRootedness:
    """RealRooted / NotRealRooted / Borderline.

    Margins within a factor 10 of tau_root are Borderline unless the exact
    Sturm count agrees with the side of tau_root the margin falls on.
    """
    if p.is_zero:
        raise ZeroPolynomialError("real-rootedness of the zero polynomial is a convention")
    margin = complex_margin(p, tol)
    if margin <= tol.tau_root / 10:
        return RealRootedness(Verdict.REAL_ROOTED, margin)
    if margin > 10 * tol.tau_root:
        return RealRootedness(Verdict.NOT_REAL_ROOTED, margin)
    if cross_check:
        exact = exact_real_rooted(p, tol)
        if exact and margin <= tol.tau_root:
            return RealRootedness(Verdict.REAL_ROOTED, margin)
        if not exact and margin > tol.tau_root:
            return RealRootedness(Verdict.NOT_REAL_ROOTED, margin)
    return RealRootedness(Verdict.BORDERLINE, margin)


# --- exact Sturm backend -------------------------------------------------

def _frac_trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _frac_rem(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] / lb
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] -= q * bc
        a.pop()
    return _frac_trim(a) if a else [Fraction(0)]


def _frac_der(c):
    return _frac_trim([i * c[i] for i in range(1, len(c))] or [Fraction(0)])


def sturm_chain(coeffs) -> list[list[Fraction]]:
    """Sturm sequence p, p', -rem(...), ... of exact ascending coefficients."""
    p0 = _frac_trim([Fraction(x) for x in coeffs])
    chain = [p0]
    if len(p0) == 1:
        return chain
    p1 = _frac_der(p0)
    while len(p1) > 1 or p1[0] != 0:
        chain.append(p1)
        if len(p1) == 1:
            break
        r = _frac_rem(chain[-2], p1)
        s = max(abs(x) for x in r)
        if s == 0:
            break
        p1 = [-x / s for x in r]
    return chain


def _sign_at(c, x):
    if x == math.inf:
        return (c[-1] > 0) - (c[-1] < 0)
    if x == -math.inf:
        s = (c[-1] > 0) - (c[-1] < 0)
        return s if (len(c) - 1) % 2 == 0 else -s
    v = Fraction(0)
    for a in reversed(c):
        v = v * x + a
    return (v > 0) - (v < 0)


def _variations(chain, x) -> int:
    signs = [s for s in (_sign_at(c, x) for c in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(coeffs, a=-math.inf, b=math.inf) -> int:
    """Number of distinct real roots in (a, b]."""
    chain = sturm_chain(coeffs)
    return _variations(chain, a) - _variations(chain, b)


def _frac_gcd(a, b):
    a, b = _frac_trim(a), _frac_trim(b)
    while len(b) > 1 or b[0] != 0:
        a, b = b, _frac_rem(a, b)
    return a


def exact_real_rooted(p: Poly, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Exact test on the (trimmed) float coefficients: all distinct complex
    roots are real iff the Sturm count equals the square-free degree."""
    eff = effective_degree(p, tol)
    if eff is IS_ZERO:
        return True
    c = [Fraction(float(x)) for x in p.coeffs[: eff.degree + 1]]
    if len(c) <= 2:
        return True
    g = _frac_gcd(c, _frac_der(c))
    sqf_degree = (len(c) - 1) - (len(g) - 1)
    return sturm_count(c) == sqf_degree


def sturm_isolate(p: Poly, width: float = 1e-9, tol: Tolerances = DEFAULT_TOL) -> list[tuple[float, float]]:
    """Disjoint intervals (lo, hi], descending, each holding one distinct real
    root, found by exact bisection down to ``width``."""
    eff = effective_degree(p, tol)
    if eff is IS_ZERO or eff.degree == 0:
        return []
    c = [Fraction(float(x)) for x in p.coeffs[: eff.degree + 1]]
    chain = sturm_chain(c)
    bound = 1 + max(abs(x / c[-1]) for x in c[:-1])
    out = []
    stack = [(-bound, bound)]
    w = Fraction(width)
    while stack:
        lo, hi = stack.pop()
        n = _variations(chain, lo) - _variations(chain, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo <= w:
            out.append((float(lo), float(hi)))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out, key=lambda iv: -iv[1])


# --- batched margins (oracle and counterexample search) -------------------

@dataclass
class BatchSpectra:
    margin: np.ndarray    # complex margin per row (0 for zero rows)
    min_gap: np.ndarray   # smallest gap between finite real roots, inf if < 2
    zero: np.ndarray      # row is (numerically) the zero polynomial
    roots: list           # per row: descending finite real parts (or None when complex)


def batch_spectra(C: np.ndarray, tol: Tolerances = DEFAULT_TOL,
                  ref_scale: np.ndarray | float | None = None,
                  recheck_below: float = 1e-3, keep_roots: bool = False) -> BatchSpectra:
    """Complex margins for many polynomials at once (rows of ``C``, ascending).

    Rows whose max coefficient is below tau_zero*ref_scale are flagged zero.
    Rows with a margin in (tau_root, recheck_below] are recomputed with the
    clustering path, so split multiple roots are not reported as complex.
    """
    C = np.atleast_2d(np.asarray(C, dtype=float))
    N, L = C.shape
    scale = np.max(np.abs(C), axis=1)
    if ref_scale is None:
        zero = scale == 0
    else:
        zero = scale <= tol.tau_zero * np.broadcast_to(ref_scale, (N,))
    margin = np.zeros(N)
    min_gap = np.full(N, math.inf)
    roots: list = [None] * N
    safe = np.where(scale > 0, scale, 1.0)
    big = np.abs(C) > tol.tau_zero * safe[:, None]
    deg = np.where(big.any(axis=1), L - 1 - np.argmax(big[:, ::-1], axis=1), 0)
    deg[zero] = 0
    for n in np.unique(deg):
        rows = np.flatnonzero((deg == n) & ~zero)
        if rows.size == 0:
            continue
        if n == 0:
            for r in rows:
                roots[r] = np.zeros(0)
            continue
        cn = C[rows, : n + 1]
        comp = np.zeros((rows.size, n, n))
        if n > 1:
            comp[:, np.arange(1, n), np.arange(n - 1)] = 1.0
        comp[:, :, -1] = -cn[:, :n] / cn[:, n:n + 1]
        z = np.linalg.eigvals(comp)
        absz = np.abs(z)
        m = np.max(np.abs(z.imag) / np.maximum(1.0, absz), axis=1)
        margin[rows] = m
        re = np.sort(z.real, axis=1)[:, ::-1]
        if n > 1:
            gaps = re[:, :-1] - re[:, 1:]
            rad = tol.tau_root * (1 + np.abs(re[:, 1:]))
            gaps = np.where(gaps <= rad, 0.0, gaps)
            min_gap[rows] = gaps.min(axis=1)
        if keep_roots:
            for k, r in enumerate(rows):
                roots[r] = re[k]
    suspect = np.flatnonzero((margin > tol.tau_root) & (margin <= recheck_below) & ~zero)
    for r in suspect:
        p = Poly(C[r])
        margin[r] = complex_margin(p, tol)
        if margin[r] <= tol.tau_root:
            spec = real_roots(p, tol)
            min_gap[r] = 0.0 if any(mm > 1 for _, mm in spec.roots) else spec.min_gap
            if keep_roots:
                roots[r] = spec.expanded()
    if keep_roots:
        for r in np.flatnonzero(margin > tol.tau_root):
            roots[r] = None
    return BatchSpectra(margin, min_gap, zero, roots)
