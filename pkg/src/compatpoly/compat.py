"""Compatibility deciders, perturbations and non-simple-root diagnostics.

A family is compatible when every convex combination of its members is
real-rooted. Verdicts are three-valued: Compatible, Incompatible, or
Inconclusive when the numerics land inside the tolerance band.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np
import numpy.polynomial.polynomial as npoly
from scipy.optimize import minimize

from .interlace import (
    InterleaverFailure, common_interleaver, hko_pair, spectrum,
    verify_interleaver, wronskian,
)
from .mobius import generic_point, push, rotation_to_infinity
from .oracle import fixed_weights, random_weights
from .poly import (
    DEFAULT_TOL, IS_ZERO, Family, Poly, Tolerances, effective_degree,
    linear_combination, strip_common_roots,
)
from .roots import Verdict, batch_spectra, complex_margin, is_real_rooted, root_clusters
from .simplex import is_proper, min_norm_combination, zero_convex_combination

log = logging.getLogger(__name__)

__all__ = [
    "CompatVerdict", "CompatReport", "Witness", "NonSimpleDiagnostic",
    "NotProper", "CommonRootPresent", "Not3Compatible", "NotCompatible",
    "RetryBudgetExhausted", "zero_convex_combination", "is_proper",
    "pair_compatible", "triple_compatible", "family_compatible",
    "counterexample_search", "verify_report", "perturb_family_mean",
    "simplex_interior_perturbation", "nonsimple_root_diagnostics",
]


class NotProper(ValueError):
    pass


class CommonRootPresent(ValueError):
    pass


class Not3Compatible(ValueError):
    pass


class NotCompatible(ValueError):
    pass


class RetryBudgetExhausted(RuntimeError):
    pass


class CompatVerdict(str, Enum):
    COMPATIBLE = "Compatible"
    INCOMPATIBLE = "Incompatible"
    INCONCLUSIVE = "Inconclusive"

    @property
    def exit_code(self) -> int:
        return {"Compatible": 0, "Incompatible": 1, "Inconclusive": 2}[self.value]


def _num(x):
    if isinstance(x, Fraction):
        return float(x)
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass(frozen=True)
class Witness:
    """kind is one of Interleaver, ZeroComboPlusInterlacing, Counterexample,
    TripleCounterexample, TripleWitnesses, MarginBand."""
    kind: str
    poly: Poly | None = None
    weights: tuple | None = None
    indices: tuple | None = None
    margin: float | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.poly is not None:
            out["poly"] = self.poly.tolist()
        if self.weights is not None:
            out["weights"] = [_num(w) for w in self.weights]
            if any(isinstance(w, Fraction) for w in self.weights):
                out["exact_weights"] = [str(w) for w in self.weights]
        if self.indices is not None:
            out["indices"] = [int(i) for i in self.indices]
        if self.margin is not None:
            out["margin"] = _num(self.margin)
        return out


@dataclass
class CompatReport:
    verdict: CompatVerdict
    witness: Witness
    margins: dict = field(default_factory=dict)
    triples_checked: int = 0

    def __bool__(self):
        return self.verdict is CompatVerdict.COMPATIBLE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": self.witness.to_dict(),
            "margins": {k: _num(v) for k, v in sorted(self.margins.items())},
            "triples_checked": self.triples_checked,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


# --- counterexample search ------------------------------------------------

def _lattice(n: int, steps: int) -> np.ndarray:
    """Edge grids and (for n >= 3) a coarse lattice on every triangle."""
    rows = []
    s = np.linspace(0, 1, steps + 1)[1:-1]
    for i, j in combinations(range(n), 2):
        w = np.zeros((s.size, n))
        w[:, i], w[:, j] = 1 - s, s
        rows.append(w)
    if 3 <= n <= 6:
        m = max(4, steps // 4)
        pts = [(a, b, m - a - b) for a in range(1, m) for b in range(1, m - a)]
        if pts:
            P = np.array(pts, dtype=float) / m
            for tri in combinations(range(n), 3):
                w = np.zeros((P.shape[0], n))
                w[:, list(tri)] = P
                rows.append(w)
    return np.vstack(rows) if rows else np.zeros((0, n))


def counterexample_search(family: Family, tol: Tolerances = DEFAULT_TOL, seed: int = 0,
                          n_random: int = 1024, edge_steps: int = 64,
                          refine: bool = True) -> tuple[np.ndarray, float]:
    """Convex weights maximizing the complex margin of the combination.

    Dense candidates (faces and random samples) are scored in one batch;
    a best candidate inside the tolerance band is refined by Nelder-Mead on
    softmax coordinates.
    """
    n = len(family)
    M = family.matrix()
    ref = max(m.scale for m in family) or 1.0
    W = np.vstack([fixed_weights(n), _lattice(n, edge_steps),
                   random_weights(n, 0, n_random, seed)]) if n > 1 else np.ones((1, 1))
    bs = batch_spectra(W @ M.T, tol, ref_scale=ref, recheck_below=0.0)
    score = np.where(bs.zero, -1.0, bs.margin)
    k = int(np.argmax(score))
    best_w, best_m = W[k], float(score[k])
    if refine and n > 1 and 0 < best_m <= 100 * tol.tau_root:
        support = np.flatnonzero(best_w > 0)

        def obj(x):
            e = np.exp(x - x.max())
            w = np.zeros(n)
            w[support] = e / e.sum()
            p = linear_combination(family, w)
            if p.scale <= tol.tau_zero * ref:
                return 0.0
            return -complex_margin(p, tol)

        x0 = np.log(best_w[support])
        if support.size > 1:
            res = minimize(obj, x0, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 200 * support.size})
            if -res.fun > best_m:
                e = np.exp(res.x - res.x.max())
                best_w = np.zeros(n)
                best_w[support] = e / e.sum()
                best_m = -float(res.fun)
    p = linear_combination(family, best_w)
    if p.scale <= tol.tau_zero * ref:
        return best_w, 0.0
    return best_w, complex_margin(p, tol)


def _confirm(family: Family, w, tol: Tolerances) -> Verdict:
    p = linear_combination(family, w)
    if p.is_zero:
        return Verdict.REAL_ROOTED
    return is_real_rooted(p, tol).verdict


def _counterexample_report(family, w, m, indices, margins) -> CompatReport:
    kind = "TripleCounterexample" if len(family) == 3 else "Counterexample"
    return CompatReport(CompatVerdict.INCOMPATIBLE,
                        Witness(kind, weights=tuple(w.tolist()), indices=tuple(indices), margin=m),
                        margins)


def _refute(family: Family, tol: Tolerances, seed: int, indices, margins) -> CompatReport:
    """Incompatible with a verified counterexample, or Inconclusive."""
    w, m = counterexample_search(family, tol, seed)
    margins["max_margin"] = max(m, margins.get("max_margin", 0.0))
    if _confirm(family, w, tol) is Verdict.NOT_REAL_ROOTED:
        return _counterexample_report(family, w, m, indices, margins)
    return CompatReport(CompatVerdict.INCONCLUSIVE, Witness("MarginBand", margin=m), margins)


def _screen(family: Family, tol: Tolerances, seed: int):
    """Cheap unrefined search: (weights, margin)."""
    return counterexample_search(family, tol, seed, n_random=256, edge_steps=32, refine=False)


def _decide_proper(fam: Family, tol: Tolerances, seed: int, idx, margins) -> CompatReport:
    """Proper family: a counterexample found by the screen settles it, then a
    verified common interleaver, then the refined search."""
    w, m = _screen(fam, tol, seed)
    margins["max_margin"] = m
    if m > tol.tau_root and _confirm(fam, w, tol) is Verdict.NOT_REAL_ROOTED:
        return _counterexample_report(fam, w, m, idx, margins)
    res = common_interleaver(fam, tol)
    if res.witness is not None:
        if m > tol.tau_root:
            return CompatReport(CompatVerdict.INCONCLUSIVE, Witness("MarginBand", margin=m), margins)
        return CompatReport(CompatVerdict.COMPATIBLE, Witness("Interleaver", poly=res.witness), margins)
    rep = _refute(fam, tol, seed, idx, margins)
    if rep.verdict is CompatVerdict.INCONCLUSIVE and res.failure_reason is not None:
        rep.margins["interleaver_" + res.failure_reason.value] = 1.0
    return rep


def _check_inputs(members):
    for f in members:
        if not f.is_zero:
            spectrum(f)


# --- deciders -------------------------------------------------------------

def _zero_combo(family: Family, tol: Tolerances, exact: bool):
    if exact:
        w = zero_convex_combination(family, tol, exact=True)
        return w, 0.0
    w, resid = min_norm_combination(family)
    return (w if resid <= tol.tau_proper else None), resid


def pair_compatible(f: Poly, g: Poly, tol: Tolerances = DEFAULT_TOL,
                    exact: bool = False, seed: int = 0, _fam: Family | None = None,
                    _idx=(0, 1)) -> CompatReport:
    """Compatibility of the segment between f and g."""
    fam = _fam if _fam is not None else Family([f, g])
    _check_inputs(fam)
    margins: dict = {}
    w, resid = _zero_combo(fam, tol, exact)
    margins["zero_combo_residual"] = resid
    if w is not None:
        # every convex combination is a multiple of one member
        return CompatReport(CompatVerdict.COMPATIBLE,
                            Witness("ZeroComboPlusInterlacing", weights=tuple(w),
                                    indices=tuple(_idx)), margins)
    return _decide_proper(fam, tol, seed, _idx, margins)


def _pick_pair(fam: Family, support) -> tuple[int, int]:
    """The best-conditioned pair inside the support of a zero combination."""
    best, score = None, -1.0
    for i, j in combinations(sorted(support), 2):
        A = np.column_stack([fam[i].coeffs / (fam[i].scale or 1), fam[j].coeffs / (fam[j].scale or 1)])
        s = np.linalg.svd(A, compute_uv=False)[-1]
        if s > score:
            best, score = (i, j), s
    return best


def triple_compatible(f1: Poly, f2: Poly, f3: Poly, tol: Tolerances = DEFAULT_TOL,
                      exact: bool = False, seed: int = 0, _fam: Family | None = None,
                      _idx=(0, 1, 2)) -> CompatReport:
    """Compatibility of three polynomials.

    If a f_i + b f_j + c f_k = 0 with a >= 0 and b, c > 0, the triple is
    compatible iff f_i and f_j interlace in some order; otherwise the triple
    is proper and compatibility is equivalent to a common interleaver.
    """
    fam = _fam if _fam is not None else Family([f1, f2, f3])
    _check_inputs(fam)
    margins: dict = {}
    w, resid = _zero_combo(fam, tol, exact)
    margins["zero_combo_residual"] = resid
    if w is not None:
        wf = np.array([float(x) for x in w])
        support = [k for k in range(3) if (w[k] > 0 if exact else wf[k] > 1e-9)]
        rest = [k for k in range(3) if k not in support]
        if len(support) == 1:
            # a zero member; the other two decide
            a, b = rest
            sub = pair_compatible(fam[a], fam[b], tol, exact, seed)
            sub.triples_checked = 1
            if sub.verdict is CompatVerdict.INCOMPATIBLE:
                wt = np.zeros(3)
                wt[[a, b]] = sub.witness.weights
                sub.witness = Witness("TripleCounterexample", weights=tuple(wt.tolist()),
                                      indices=tuple(_idx), margin=sub.witness.margin)
            return sub
        if len(support) == 2:
            i, j = rest[0], support[0]
        else:
            i, j = _pick_pair(fam, support)
        ok = hko_pair(fam[i], fam[j], tol)
        if ok:
            return CompatReport(CompatVerdict.COMPATIBLE,
                                Witness("ZeroComboPlusInterlacing", weights=tuple(w),
                                        indices=(_idx[i], _idx[j])), margins, 1)
        rep = _refute(fam, tol, seed, _idx, margins)
        rep.triples_checked = 1
        return rep
    rep = _decide_proper(fam, tol, seed, _idx, margins)
    rep.triples_checked = 1
    return rep


def family_compatible(family: Family, tol: Tolerances = DEFAULT_TOL, exact: bool = False,
                      seed: int = 0) -> CompatReport:
    """Compatible iff every triple is compatible.

    A proper family with a verified common interleaver is compatible outright,
    so that witness is tried first; otherwise triples are checked in
    lexicographic order and the first failing one is reported.
    """
    n = len(family)
    _check_inputs(family)
    if n == 1:
        return CompatReport(CompatVerdict.COMPATIBLE,
                            Witness("ZeroComboPlusInterlacing" if family[0].is_zero else "Interleaver",
                                    poly=None if family[0].is_zero else family[0].normalized(),
                                    indices=(0,)), {}, 0)
    if n == 2:
        return pair_compatible(family[0], family[1], tol, exact, seed, _fam=family)
    proper = (zero_convex_combination(family, tol, exact) is None)
    if proper:
        _, m = _screen(family, tol, seed)
        if m <= tol.tau_root:
            res = common_interleaver(family, tol)
            if res.witness is not None:
                return CompatReport(CompatVerdict.COMPATIBLE, Witness("Interleaver", poly=res.witness),
                                    {"max_margin": m}, 0)
    if n == 3:
        return triple_compatible(*family.members, tol=tol, exact=exact, seed=seed, _fam=family)
    checked = 0
    inconclusive = None
    for idx in combinations(range(n), 3):
        checked += 1
        sub = family.subfamily(idx)
        rep = triple_compatible(*sub.members, tol=tol, exact=exact, seed=seed, _fam=sub, _idx=idx)
        if rep.verdict is CompatVerdict.INCOMPATIBLE:
            rep.triples_checked = checked
            if rep.witness.kind != "TripleCounterexample":
                rep.witness = Witness("TripleCounterexample", weights=rep.witness.weights,
                                      indices=idx, margin=rep.witness.margin)
            return rep
        if rep.verdict is CompatVerdict.INCONCLUSIVE and inconclusive is None:
            inconclusive = (idx, rep)
    if inconclusive is not None:
        idx, rep = inconclusive
        rep.triples_checked = checked
        rep.margins["first_inconclusive_triple"] = float(combinations_index(idx, n))
        return rep
    if proper:
        # all triples passed but no family-level interleaver was verified
        res = common_interleaver(family, tol)
        if res.failure_reason is InterleaverFailure.NOT_PAIRWISE_CONSISTENT:
            return CompatReport(CompatVerdict.INCONCLUSIVE, Witness("MarginBand", margin=0.0),
                                {"interleaver_NotPairwiseConsistent": 1.0}, checked)
        log.info("family interleaver failed (%s); reporting triple witnesses",
                 res.failure_reason and res.failure_reason.value)
        return CompatReport(CompatVerdict.COMPATIBLE, Witness("TripleWitnesses"),
                            {"interleaver_" + (res.failure_reason or InterleaverFailure.RETRY_BUDGET_EXHAUSTED).value: 1.0},
                            checked)
    return CompatReport(CompatVerdict.COMPATIBLE, Witness("TripleWitnesses"), {}, checked)


def combinations_index(idx, n: int) -> int:
    for k, c in enumerate(combinations(range(n), len(idx))):
        if tuple(c) == tuple(idx):
            return k
    raise ValueError(idx)


def verify_report(report: CompatReport, family: Family, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Re-check a witness independently of the code path that produced it."""
    wit = report.witness
    if wit.kind == "Interleaver":
        return verify_interleaver(list(family), wit.poly, tol)
    if wit.kind == "ZeroComboPlusInterlacing":
        w = np.array([float(x) for x in wit.weights])
        if len(w) != len(family):
            return False
        if _residual(family, w) > tol.tau_proper:
            return False
        if len(wit.indices) == 2 and len(w) > 2:
            i, j = wit.indices
            return hko_pair(family[i], family[j], tol)
        return True
    if wit.kind in ("Counterexample", "TripleCounterexample"):
        w = np.array(wit.weights)
        sub = family if len(w) == len(family) else family.subfamily(wit.indices)
        p = linear_combination(sub, w)
        return not p.is_zero and is_real_rooted(p, tol).verdict is Verdict.NOT_REAL_ROOTED
    return True


def _residual(fam: Family, w: np.ndarray) -> float:
    """|sum w_i f_i| measured on unit-normalized members, as in the solver."""
    M = fam.matrix()
    norms = np.linalg.norm(M, axis=0)
    norms = np.where(norms == 0, 1.0, norms)
    u = w * norms
    u = u / u.sum()
    return float(np.linalg.norm((M / norms) @ u))


# --- perturbations ----------------------------------------------------------

def _common_root_at_infinity(family: Family, tol: Tolerances) -> bool:
    d = family.ambient_degree
    return all(m.is_zero or effective_degree(m, tol).degree < d for m in family)


def perturb_family_mean(family: Family, epsilon: float, tol: Tolerances = DEFAULT_TOL,
                        check: bool = True) -> Family:
    """(f_i + eps * sum_j f_j)_i for a proper, 3-compatible family without
    common roots (including a common root at infinity)."""
    if check:
        if zero_convex_combination(family, tol) is not None:
            raise NotProper("0 is a convex combination of the family")
        _, shared = strip_common_roots(family, tol)
        if shared:
            raise CommonRootPresent(f"members share the roots {shared}")
        if _common_root_at_infinity(family, tol):
            raise CommonRootPresent("members share a root at infinity")
        rep = family_compatible(family, tol)
        if rep.verdict is not CompatVerdict.COMPATIBLE:
            raise Not3Compatible(f"family verdict is {rep.verdict.value}")
    fbar = Poly(np.sum([m.coeffs for m in family], axis=0), family.ambient_degree)
    return family.map(lambda f: f + epsilon * fbar)


def simplex_interior_perturbation(family: Family, epsilon: float,
                                  tol: Tolerances = DEFAULT_TOL) -> Family:
    """Root-shift perturbation pushing the whole simplex into the interior of
    the real-rooted polynomials.

    In a frame where the interleaver g and every member have full degree and
    g has positive leading coefficient, g's j-th root moves by -3j eps, a
    positive-leading member i's by -(3j + 1/i) eps and a negative-leading
    member k's by -(3j - 1/k) eps (i, k are 1-based member indices).
    """
    if zero_convex_combination(family, tol) is not None:
        raise NotProper("0 is a convex combination of the family")
    rep = family_compatible(family, tol)
    if rep.verdict is not CompatVerdict.COMPATIBLE:
        raise NotCompatible(f"family verdict is {rep.verdict.value}")
    res = common_interleaver(family, tol)
    if res.witness is None:
        raise RetryBudgetExhausted(res.failure_reason.value if res.failure_reason else "no interleaver")
    g = res.witness
    members = list(family.members)
    d = family.ambient_degree
    if all(effective_degree(p, tol).degree == d for p in members + [g]):
        frame = None
        G, F = g, members
    else:
        frame = rotation_to_infinity(generic_point(members + [g], tol))
        G = push(frame, g)
        F = [push(frame, f) for f in members]
    if G.coeffs[d] < 0:
        G = -G
        F = [-f for f in F]
        flip = True
    else:
        flip = False
    j = np.arange(1, d + 1)
    lg = spectrum(G, tol).expanded()
    log.debug("shifted interleaver roots: %s", lg - 3 * j * epsilon)
    out = []
    for i, f in enumerate(F, start=1):
        lf = spectrum(f, tol).expanded()
        lead = f.coeffs[d]
        shift = 3 * j + (1.0 / i if lead > 0 else -1.0 / i)
        h = Poly.from_roots(lf - shift * epsilon, lead, d)
        if frame is not None:
            h = push(frame.inverse(), h)
        out.append(-h if flip else h)
    return Family(out, family.labels)


# --- non-simple root diagnostics ------------------------------------------

@dataclass
class NonSimpleDiagnostic:
    location: float
    witness_weights: tuple
    member_roots: tuple
    sign_report: tuple          # (member index, sign f(r), sign g''(r))
    inconsistencies: tuple = ()

    def to_dict(self) -> dict:
        return {"location": self.location, "witness_weights": list(self.witness_weights),
                "member_roots": list(self.member_roots),
                "sign_report": [list(x) for x in self.sign_report],
                "inconsistencies": list(self.inconsistencies)}


_FLOOR = 1e-12


def _abs_eval(c, x):
    return float(npoly.polyval(abs(x), np.abs(c)))


def _candidates(family: Family, tol: Tolerances) -> list[float]:
    def real_pts(p):
        return [v.real for v, _ in root_clusters(p, tol) if abs(v.imag) <= tol.tau_root * (1 + abs(v))]

    def near(x, pts, rad=tol.tau_root):
        return any(abs(x - y) <= rad * (1 + abs(x)) for y in pts)

    live = [m for m in family if not m.is_zero]
    # member roots first: a Wronskian root at the same place is often a
    # multiple root, known only to about eps**(1/m), so it is snapped over
    # a wider radius
    out: list[float] = []
    for m in live:
        if effective_degree(m, tol).degree > 0:
            out.extend(x for x in real_pts(m) if not near(x, out))
    extra: list[float] = []
    for f, g in combinations(live, 2):
        W, _ = wronskian(f, g, tol)
        e = effective_degree(W, tol)
        if W.is_zero or e is IS_ZERO or e.degree == 0:
            continue
        wide = math.sqrt(tol.tau_root)
        extra.extend(x for x in real_pts(W) if not near(x, out, wide) and not near(x, extra, wide))
    return sorted(out + extra)


def nonsimple_root_diagnostics(family: Family, tol: Tolerances = DEFAULT_TOL) -> list[NonSimpleDiagnostic]:
    """Locations where a combination of at most two members has a multiple
    root, with the member-root and second-derivative sign checks."""
    if zero_convex_combination(family, tol) is not None:
        raise NotProper("0 is a convex combination of the family")
    n = len(family)
    C = [m.coeffs for m in family]
    D1 = [npoly.polyder(c) for c in C]
    D2 = [npoly.polyder(c, 2) for c in C]
    out: list[NonSimpleDiagnostic] = []
    seen = set()
    for r in _candidates(family, tol):
        v = np.array([npoly.polyval(r, c) for c in C])
        dv = np.array([npoly.polyval(r, c) for c in D1])
        av = np.array([_abs_eval(c, r) for c in C])
        adv = np.array([_abs_eval(c, r) if c.size else 0.0 for c in D1])
        hits = []
        for i in range(n):
            if abs(v[i]) <= tol.tau_sign * av[i] and abs(dv[i]) <= tol.tau_sign * max(adv[i], av[i]):
                w = np.zeros(n)
                w[i] = 1.0
                hits.append(w)
        for i, j in combinations(range(n), 2):
            # kernel of the 2x2 block [[v_i, v_j], [dv_i, dv_j]]: orthogonal to
            # whichever row is not negligible
            for a, b in ((v[j], -v[i]), (dv[j], -dv[i])):
                if a < 0 or b < 0:
                    a, b = -a, -b
                if a <= 0 or b <= 0:
                    continue   # support 1 is handled above
                a, b = a / (a + b), b / (a + b)
                # cancellation is judged against the sizes of the two terms,
                # with a floor near rounding level
                ref0 = tol.tau_root * (a * abs(v[i]) + b * abs(v[j])) + _FLOOR * (a * av[i] + b * av[j])
                ref1 = (tol.tau_root * (a * abs(dv[i]) + b * abs(dv[j]))
                        + _FLOOR * (a * max(adv[i], av[i]) + b * max(adv[j], av[j])))
                if abs(a * v[i] + b * v[j]) <= ref0 and abs(a * dv[i] + b * dv[j]) <= ref1:
                    w = np.zeros(n)
                    w[i], w[j] = a, b
                    hits.append(w)
                    break
        for w in hits:
            key = (round(r, 6), tuple(np.round(w, 6)))
            if key in seen:
                continue
            seen.add(key)
            g2 = sum(w[k] * npoly.polyval(r, D2[k]) for k in range(n) if D2[k].size)
            ag2 = sum(w[k] * _abs_eval(D2[k], r) for k in range(n) if D2[k].size) or 1.0
            roots_at = tuple(k for k in range(n) if abs(v[k]) <= tol.tau_root * max(av[k], 1e-300))
            signs = tuple((k, int(np.sign(v[k])) if k not in roots_at else 0, int(np.sign(g2)))
                          for k in range(n))
            bad = []
            if not roots_at:
                bad.append("no member vanishes at the location")
            if abs(g2) <= tol.tau_sign * ag2:
                bad.append("second derivative vanishes")
            for k in range(n):
                if (g2 / ag2) * (v[k] / (av[k] or 1.0)) > tol.tau_sign:
                    bad.append(f"g''(r) f_{k}(r) > 0")
            out.append(NonSimpleDiagnostic(float(r), tuple(float(x) for x in w), roots_at,
                                           signs, tuple(bad)))
    return out
