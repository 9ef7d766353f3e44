"""SL2(R) acting on R^d[t] and on the projective line.

``act(m, p)`` is the substitution t -> (alpha t + beta)/(gamma t + delta)
homogenized to degree d. Its roots are the preimages of the roots of ``p``
under ``act_point(m, .)``, so to push the roots of ``p`` forward by ``m``
use ``act(m.inverse(), p)`` (see :func:`push`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

from .poly import DEFAULT_TOL, Poly, Tolerances

INF = math.inf


@dataclass(frozen=True)
class MobiusMap:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        det = self.alpha * self.delta - self.beta * self.gamma
        if abs(det - 1.0) > 1e-9:
            raise ValueError(f"determinant must be 1, got {det!r}")

    @property
    def det(self) -> float:
        return self.alpha * self.delta - self.beta * self.gamma

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.delta, -self.beta, -self.gamma, self.alpha)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        a = np.array([[self.alpha, self.beta], [self.gamma, self.delta]])
        b = np.array([[other.alpha, other.beta], [other.gamma, other.delta]])
        (p, q), (r, s) = a @ b
        return _normalized(p, q, r, s)

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.gamma, self.delta]])

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, theta: float) -> "MobiusMap":
        c, s = math.cos(theta), math.sin(theta)
        return cls(c, -s, s, c)


def _normalized(a, b, c, d) -> MobiusMap:
    det = a * d - b * c
    if det <= 0:
        raise ValueError("matrix must have positive determinant")
    k = 1.0 / math.sqrt(det)
    return MobiusMap(a * k, b * k, c * k, d * k)


def act(m: MobiusMap, p: Poly) -> Poly:
    """(gamma t + delta)^d * p((alpha t + beta)/(gamma t + delta)) in R^d[t]."""
    d = p.ambient_degree
    num = np.array([m.beta, m.alpha])
    den = np.array([m.delta, m.gamma])
    num_pows = [np.array([1.0])]
    den_pows = [np.array([1.0])]
    for _ in range(d):
        num_pows.append(npoly.polymul(num_pows[-1], num))
        den_pows.append(npoly.polymul(den_pows[-1], den))
    out = np.zeros(d + 1)
    for k, ck in enumerate(p.coeffs):
        if ck == 0:
            continue
        term = ck * npoly.polymul(num_pows[k], den_pows[d - k])
        out[: term.size] += term[: d + 1]
    return Poly(out, d)


def push(m: MobiusMap, p: Poly) -> Poly:
    """Polynomial whose roots are act_point(m, r) for the roots r of p."""
    return act(m.inverse(), p)


def act_point(m: MobiusMap, r: float) -> float:
    """(alpha r + beta)/(gamma r + delta) on R u {inf}."""
    if r == INF or r == -INF:
        return INF if m.gamma == 0 else m.alpha / m.gamma
    den = m.gamma * r + m.delta
    if den == 0:
        return INF
    return (m.alpha * r + m.beta) / den


def rotation_to_infinity(t0: float) -> MobiusMap:
    """Orthogonal determinant-1 map sending the finite point t0 to infinity."""
    if not math.isfinite(t0):
        raise ValueError("t0 must be finite")
    h = math.hypot(t0, 1.0)
    c, s = -t0 / h, 1.0 / h
    return MobiusMap(c, -s, s, c)


def generic_point(polys, tol: Tolerances = DEFAULT_TOL, exclude=()) -> float:
    """A point well separated from every real root of ``polys`` (and from
    ``exclude``), preferring one just above all roots.

    Candidates are tried in a fixed order; the first whose distance to every
    root is at least 10*tau_root*(1+spread) wins.
    """
    from .roots import root_clusters

    pts = [float(x) for x in exclude]
    for p in polys:
        if p.is_zero:
            continue
        pts.extend(v.real for v, _ in root_clusters(p, tol))
    if not pts:
        return 0.0
    pts = np.sort(np.array(pts))
    spread = max(1.0, float(np.max(np.abs(pts))))
    sep = 10 * tol.tau_root * (1 + spread)
    cands = [pts[-1] + 1.0, pts[0] - 1.0]
    gaps = np.diff(pts)
    for i in np.argsort(-gaps):
        cands.append(0.5 * (pts[i] + pts[i + 1]))
    for c in cands:
        if np.min(np.abs(pts - c)) >= sep:
            return float(c)
    raise ValueError("no well-separated point found")
