"""The interlacing relation f << g for arbitrary leading-coefficient signs,
Wronskian sign classes, the HKO pair test and common interleavers.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.polynomial.polynomial as npoly

from .mobius import generic_point, push, rotation_to_infinity
from .poly import DEFAULT_TOL, IS_ZERO, Family, Poly, Tolerances, effective_degree, pad
from .roots import NotRealRooted, RootSpectrum, real_roots
from .simplex import zero_convex_combination

log = logging.getLogger(__name__)


class NotRealRootedInput(ValueError):
    pass


class SignClass(str, Enum):
    NON_POSITIVE = "NonPositive"
    NON_NEGATIVE = "NonNegative"
    IDENTICALLY_ZERO = "IdenticallyZero"
    INDEFINITE = "Indefinite"


class InterleaverFailure(str, Enum):
    NOT_PAIRWISE_CONSISTENT = "NotPairwiseConsistent"
    NOT_PROPER = "NotProper"
    RETRY_BUDGET_EXHAUSTED = "RetryBudgetExhausted"


@dataclass(frozen=True)
class InterleaverResult:
    witness: Poly | None
    failure_reason: InterleaverFailure | None = None
    epsilon: float | None = None   # 0.0 when found without perturbation
    attempts: int = 0

    def __bool__(self):
        return self.witness is not None


def spectrum(p: Poly, tol: Tolerances = DEFAULT_TOL) -> RootSpectrum:
    try:
        return real_roots(p, tol)
    except NotRealRooted as exc:
        raise NotRealRootedInput(str(exc)) from None


def _sign(p: Poly, tol: Tolerances) -> int:
    eff = effective_degree(p, tol)
    if eff is IS_ZERO:
        return 0
    return 1 if p.coeffs[eff.degree] > 0 else -1


def _base_interlaces(f: Poly, g: Poly, tol: Tolerances) -> bool:
    """f << g for positive leading coefficients: deg f in {deg g, deg g - 1}
    and lambda_1(g) >= lambda_1(f) >= lambda_2(g) >= ..."""
    lf = spectrum(f, tol).expanded()
    lg = spectrum(g, tol).expanded()
    if lf.size not in (lg.size, lg.size - 1):
        return False
    allr = np.concatenate([lf, lg])
    slack = tol.tau_root * max(1.0, float(np.max(np.abs(allr)))) if allr.size else 0.0
    for j in range(lf.size):
        if lg[j] < lf[j] - slack:
            return False
        if j + 1 < lg.size and lf[j] < lg[j + 1] - slack:
            return False
    return True


def interlaces(f: Poly, g: Poly, tol: Tolerances = DEFAULT_TOL) -> bool:
    """f << g, closed under the rule f << g => g << -f, with 0 << f and f << 0."""
    if f.is_zero or g.is_zero:
        return True
    sf, sg = _sign(f, tol), _sign(g, tol)
    if sf > 0 and sg > 0:
        return _base_interlaces(f, g, tol)
    if sf > 0 > sg:
        return _base_interlaces(-g, f, tol)
    if sf < 0 < sg:
        return _base_interlaces(g, -f, tol)
    return _base_interlaces(-f, -g, tol)


def hko_pair(f: Poly, g: Poly, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff every real combination a f + b g is real-rooted (HKO)."""
    return interlaces(f, g, tol) or interlaces(g, f, tol)


def _abs_conv(a, b):
    return npoly.polymul(np.abs(a), np.abs(b))


def wronskian(f: Poly, g: Poly, tol: Tolerances = DEFAULT_TOL) -> tuple[Poly, SignClass]:
    """W[f, g] = f' g - g' f in R^{2d-2}[t] and its sign class on R."""
    if f.ambient_degree != g.ambient_degree:
        raise ValueError("ambient degrees differ")
    d = f.ambient_degree
    dw = max(2 * d - 2, 0)
    if d == 0:
        return Poly([0.0], 0), SignClass.IDENTICALLY_ZERO
    df, dg = npoly.polyder(f.coeffs), npoly.polyder(g.coeffs)
    w = npoly.polysub(npoly.polymul(df, g.coeffs), npoly.polymul(dg, f.coeffs))
    w = pad(np.asarray(w)[: dw + 1], dw)
    W = Poly(w, dw)
    ref = npoly.polyadd(_abs_conv(df, g.coeffs), _abs_conv(dg, f.coeffs))
    ref_scale = float(np.max(ref)) if ref.size else 0.0
    if ref_scale == 0 or W.scale <= tol.tau_zero * ref_scale:
        return Poly(np.zeros(dw + 1), dw), SignClass.IDENTICALLY_ZERO
    return W, _sign_class(W, ref, tol)


def _sign_class(W: Poly, ref, tol: Tolerances) -> SignClass:
    eff = effective_degree(W, tol)
    c = W.coeffs[: eff.degree + 1]
    cand = np.sort(npoly.polyroots(c).real) if eff.degree > 0 else np.zeros(0)
    spread = max(1.0, float(np.max(np.abs(cand)))) if cand.size else 1.0
    pts = [-2 * spread - 1, 2 * spread + 1]
    pts += list(0.5 * (cand[1:] + cand[:-1]))
    pts = np.array(pts)
    vals = npoly.polyval(pts, W.coeffs)
    noise = tol.tau_sign * npoly.polyval(np.abs(pts), ref)
    pos = np.any(vals > noise)
    neg = np.any(vals < -noise)
    if pos and neg:
        return SignClass.INDEFINITE
    if neg:
        return SignClass.NON_POSITIVE
    if pos:
        return SignClass.NON_NEGATIVE
    return SignClass.IDENTICALLY_ZERO


# --- common interleavers ---------------------------------------------------

class _Fail(Exception):
    def __init__(self, reason: InterleaverFailure | None, detail: str = ""):
        super().__init__(detail)
        self.reason = reason


def _max_root_interleaver(F: list[Poly], tol: Tolerances) -> Poly:
    """All members positive-leading of full degree D: the polynomial with
    lambda_j(g) = max_i lambda_j(F_i), after checking
    lambda_j(F_i) >= lambda_{j+1}(F_k) for every i, k, j."""
    D = F[0].ambient_degree
    if D == 0:
        return Poly([1.0], 0)
    L = np.array([spectrum(p, tol).expanded() for p in F])
    if L.shape[1] != D:
        raise _Fail(None, "member lost full degree")
    slack = tol.tau_root * max(1.0, float(np.max(np.abs(L))))
    if D > 1:
        low = L[:, :-1].min(axis=0)
        high = L[:, 1:].max(axis=0)
        worst = float(np.max(high - low))
        if worst > slack:
            raise _Fail(InterleaverFailure.NOT_PAIRWISE_CONSISTENT,
                        f"root ladder violated by {worst:.3g}")
    top = L.max(axis=0)
    return Poly.from_roots(top, 1.0, D)


def _attempt(members: list[Poly], tol: Tolerances) -> Poly:
    """One interleaver construction without perturbation, or raise _Fail."""
    d = members[0].ambient_degree
    frame = None
    if any(effective_degree(p, tol).degree != d for p in members):
        frame = rotation_to_infinity(generic_point(members, tol))
        members = [push(frame, p) for p in members]
    fam, shared = _strip(members, tol)
    F = list(fam.members)
    D = F[0].ambient_degree
    signs = np.array([_sign(p, tol) for p in F])
    flip = False
    if D > 0 and np.all(signs < 0):
        F = [-p for p in F]
        signs = -signs
        flip = True
    if D == 0 or np.all(signs > 0):
        g = _max_root_interleaver(F, tol)
    else:
        g, neg = _mixed_sign(F, signs, tol)
        flip ^= neg
    if flip:
        g = -g
    if shared:
        g = Poly.from_roots(shared, 1.0, len(shared)) * g
    if frame is not None:
        g = push(frame.inverse(), g)
    return g.normalized()


def _strip(members: list[Poly], tol: Tolerances):
    from .poly import strip_common_roots
    return strip_common_roots(Family(members), tol)


def _same_sign_points(F: list[Poly], spec: list[np.ndarray], signs: np.ndarray,
                      slack: float) -> list[float]:
    """Points where every member is nonzero with one common sign, best first.

    The preferred point lies above every positive-leading member's roots and
    inside (lambda_2, lambda_1) of every negative-leading one (after an
    optional global negation making the largest root negative-leading).
    Any other point where all members share a sign works equally well, so
    midpoints of the remaining root gaps are tried next, widest first.
    """
    allr = np.unique(np.concatenate(spec))[::-1]
    out: list[tuple[float, float]] = []

    def top(sel):
        return max(spec[i][0] for i in np.flatnonzero(sel))

    sg = signs if top(signs > 0) <= top(signs < 0) else -signs
    neg = np.flatnonzero(sg < 0)
    lo = max([top(sg > 0)] + [spec[i][1] for i in neg if spec[i].size > 1])
    hi = min(spec[i][0] for i in neg)
    if hi - lo > 10 * slack:
        out.append((math.inf, 0.5 * (lo + hi)))
    cands = [(1.0, allr[0] + 1.0), (1.0, allr[-1] - 1.0)]
    cands += [(a - b, 0.5 * (a + b)) for a, b in zip(allr[:-1], allr[1:]) if a - b > 10 * slack]
    for width, x in sorted(cands, key=lambda c: -c[0]):
        vals = np.array([p(x) for p in F])
        if np.all(vals > 0) or np.all(vals < 0):
            out.append((width, x))
    seen, pts = set(), []
    for _, x in out:
        if x not in seen:
            seen.add(x)
            pts.append(float(x))
    return pts


def _mixed_sign(F: list[Poly], signs: np.ndarray, tol: Tolerances):
    """Rotate a point where all members share a sign to infinity, which makes
    all leading coefficients agree; returns (g, negated)."""
    spec = [spectrum(p, tol).expanded() for p in F]
    allr = np.concatenate(spec)
    slack = tol.tau_root * max(1.0, float(np.max(np.abs(allr))))
    last: _Fail | None = None
    for s in _same_sign_points(F, spec, signs, slack):
        rot = rotation_to_infinity(s)
        G = [push(rot, p) for p in F]
        gsigns = np.array([_sign(p, tol) for p in G])
        if not (np.all(gsigns > 0) or np.all(gsigns < 0)):
            continue
        negated = bool(gsigns[0] < 0)
        if negated:
            G = [-p for p in G]
        try:
            g = _max_root_interleaver(G, tol)
        except _Fail as exc:
            last = exc
            continue
        return push(rot.inverse(), g), negated
    raise last if last is not None else _Fail(None, "no same-sign rotation point")


def verify_interleaver(family, g: Poly, tol: Tolerances = DEFAULT_TOL) -> bool:
    try:
        return all(interlaces(f, g, tol) for f in family)
    except NotRealRootedInput:
        return False


def common_interleaver(family: Family, tol: Tolerances = DEFAULT_TOL) -> InterleaverResult:
    """A real-rooted g with f_i << g for every member.

    First tries the family as given; if no same-sign frame is found, retries
    on the mean-perturbed family f_i + eps * sum_j f_j, halving eps up to
    ``tol.max_retries`` times. Every candidate is verified against the
    original members.
    """
    members = list(family.members)
    if any(m.is_zero for m in members):
        raise ValueError("common_interleaver needs nonzero members")
    for m in members:
        spectrum(m, tol)
    attempts = 1
    try:
        g = _attempt(members, tol)
        if verify_interleaver(members, g, tol):
            return InterleaverResult(g, None, 0.0, attempts)
    except _Fail as exc:
        if exc.reason is InterleaverFailure.NOT_PAIRWISE_CONSISTENT:
            return InterleaverResult(None, exc.reason, 0.0, attempts)
    except NotRealRootedInput:
        pass
    if zero_convex_combination(family, tol) is not None:
        return InterleaverResult(None, InterleaverFailure.NOT_PROPER, None, attempts)
    fbar = Poly(np.sum([m.coeffs for m in members], axis=0), family.ambient_degree)
    eps = tol.epsilon_perturb
    reasons = []
    for _ in range(tol.max_retries):
        attempts += 1
        pert = [m + eps * fbar for m in members]
        try:
            g = _attempt(pert, tol)
            if verify_interleaver(members, g, tol):
                return InterleaverResult(g, None, eps, attempts)
            reasons.append(None)
        except _Fail as exc:
            reasons.append(exc.reason)
        except NotRealRootedInput:
            reasons.append(None)
        eps /= 2
    if reasons and all(r is InterleaverFailure.NOT_PAIRWISE_CONSISTENT for r in reasons):
        reason = InterleaverFailure.NOT_PAIRWISE_CONSISTENT
    else:
        reason = InterleaverFailure.RETRY_BUDGET_EXHAUSTED
    log.info("common_interleaver gave up after %d attempts (%s)", attempts, reason.value)
    return InterleaverResult(None, reason, None, attempts)
