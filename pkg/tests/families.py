"""Random family generators shared by the property and acceptance tests."""
from __future__ import annotations

import math

import numpy as np

from compatpoly.mobius import MobiusMap, push
from compatpoly.poly import Family, Poly

G_EX = Poly([-3.0, 2.0, 1.0], 2)   # t^2 + 2t - 3, roots 1, -3
H_EX = Poly([-3.0, -2.0, 1.0], 2)  # t^2 - 2t - 3, roots 3, -1


def f_ex(r: float) -> Poly:
    return Poly([r * r, 0.0, -1.0], 2)


def separated_roots(rng, k: int, lo=-4.0, hi=4.0, gap=0.05) -> np.ndarray:
    """k descending values in [lo, hi] with pairwise gaps >= gap."""
    while True:
        x = np.sort(rng.uniform(lo, hi, k))[::-1]
        if k < 2 or np.min(-np.diff(x)) >= gap:
            return x


def random_real_rooted(rng, d: int, deg: int | None = None, gap=0.05) -> Poly:
    deg = d if deg is None else deg
    lead = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
    return Poly.from_roots(separated_roots(rng, deg, gap=gap), lead, d)


def random_rotation(rng) -> MobiusMap:
    return MobiusMap.rotation(rng.uniform(0, math.pi))


def ladder_member(rng, gamma: np.ndarray, positive: bool, drop_top=False) -> Poly:
    """A member interlacing into g = prod(t - gamma_j): positive members put
    their j-th root in [gamma_{j+1}, gamma_j], negative ones in
    [gamma_j, gamma_{j-1}]."""
    d = gamma.size
    ext = np.concatenate([[gamma[0] + 1.5], gamma, [gamma[-1] - 1.5]])
    roots = []
    for j in range(1, d + 1):
        lo, hi = (ext[j + 1], ext[j]) if positive else (ext[j], ext[j - 1])
        roots.append(rng.uniform(lo, hi))
    if drop_top and positive:
        # the lowest root goes to infinity; a negative member cannot do
        # this and still interlace into a full-degree g
        roots = roots[:-1]
    lead = rng.uniform(0.5, 2.0) * (1 if positive else -1)
    return Poly.from_roots(roots, lead, d)


def compatible_family(rng, n: int, d: int, rotate=True) -> tuple[Family, Poly]:
    """Members sharing the interleaver g; optionally moved by a random rotation."""
    gamma = separated_roots(rng, d, gap=0.2)
    g = Poly.from_roots(gamma, 1.0, d)
    members = []
    for _ in range(n):
        positive = bool(rng.random() < 0.6)
        members.append(ladder_member(rng, gamma, positive, drop_top=d > 1 and rng.random() < 0.1))
    if rotate and rng.random() < 0.5:
        m = random_rotation(rng)
        members = [push(m, p) for p in members]
        g = push(m, g)
    members = [p.normalized() for p in members]
    return Family(members), g


def incompatible_family(rng, n: int, d: int) -> tuple[Family, float]:
    """Example-style clamp (r^2 - t^2, g, h), r away from sqrt 3, times a common
    real-rooted factor, under an affine change of variable, plus extra
    random members; the clamp triple is placed at random positions."""
    while True:
        r = rng.uniform(0.5, 3.5)
        if abs(r - math.sqrt(3)) > 0.25:
            break
    q_roots = separated_roots(rng, d - 2, gap=0.3) if d > 2 else np.zeros(0)
    a, b = rng.uniform(0.5, 2.0) * rng.choice([-1, 1]), rng.uniform(-1, 1)
    # roots of p(a t + b) are (root - b)/a
    base = [f_ex(r), G_EX, H_EX]
    clamp = []
    for p in base:
        roots = [(x - b) / a for x in np.roots(p.coeffs[::-1]).real]
        lead = p.coeffs[2] * a * a
        full = list(roots) + [(x - b) / a for x in q_roots]
        clamp.append(Poly.from_roots(full, lead * rng.uniform(0.5, 2.0), d))
    extra = [random_real_rooted(rng, d) for _ in range(n - 3)]
    members = extra + clamp
    order = rng.permutation(n)
    members = [members[k].normalized() for k in order]
    return Family(members), r


def double_root_family(rng, n: int, d: int) -> tuple[Family, float]:
    """A compatible family in which a positive and a negative member share
    the interleaver root gamma_j, so some combination on their edge has a
    double root there; remaining members avoid gamma_j."""
    gamma = separated_roots(rng, d, gap=0.3)
    j = int(rng.integers(0, d))
    ext = np.concatenate([[gamma[0] + 1.5], gamma, [gamma[-1] - 1.5]])

    def member(positive: bool, pin: bool) -> Poly:
        roots = []
        for k in range(1, d + 1):
            lo, hi = (ext[k + 1], ext[k]) if positive else (ext[k], ext[k - 1])
            if pin and k == j + 1:
                roots.append(gamma[j])
            else:
                w = hi - lo
                roots.append(rng.uniform(lo + 0.1 * w, hi - 0.1 * w))
        lead = rng.uniform(0.5, 2.0) * (1 if positive else -1)
        return Poly.from_roots(roots, lead, d)

    members = [member(True, True), member(False, True)]
    members += [member(bool(rng.random() < 0.5), False) for _ in range(n - 2)]
    order = rng.permutation(n)
    return Family([members[k].normalized() for k in order]), float(gamma[j])
