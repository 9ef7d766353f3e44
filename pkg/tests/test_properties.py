"""Property tests: random families drawn from seeded generators."""
import math

import numpy as np
import numpy.polynomial.polynomial as npoly
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from compatpoly.compat import (
    CompatVerdict, family_compatible, nonsimple_root_diagnostics, verify_report,
)
from compatpoly.interlace import SignClass, common_interleaver, interlaces, wronskian
from compatpoly.mobius import act
from compatpoly.poly import DEFAULT_TOL, Family, Poly
from compatpoly.roots import real_roots
from compatpoly.simplex import zero_convex_combination

from families import (
    compatible_family, double_root_family, ladder_member, random_real_rooted,
    random_rotation, separated_roots,
)

seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@SETTINGS
@given(seeds, st.integers(1, 10))
def test_root_recovery(seed, d):
    rng = np.random.default_rng(seed)
    roots = separated_roots(rng, d, gap=0.05)
    p = Poly.from_roots(roots, rng.uniform(0.5, 2.0), d)
    got = real_roots(p).expanded()
    assert np.allclose(got, roots, atol=1e-6)


@SETTINGS
@given(seeds, st.integers(1, 8), st.booleans())
def test_interlacing_forces_nonpositive_wronskian(seed, d, positive):
    rng = np.random.default_rng(seed)
    gamma = separated_roots(rng, d, gap=0.2)
    f = ladder_member(rng, gamma, positive)
    g = Poly.from_roots(gamma, rng.uniform(0.5, 2.0), d)
    assert interlaces(f, g)
    assert wronskian(f, g)[1] in (SignClass.NON_POSITIVE, SignClass.IDENTICALLY_ZERO)


@SETTINGS
@given(seeds, st.integers(1, 8))
def test_interlacing_invariant_under_rotation(seed, d):
    rng = np.random.default_rng(seed)
    f, g = random_real_rooted(rng, d, gap=0.1), random_real_rooted(rng, d, gap=0.1)
    m = random_rotation(rng)
    assert interlaces(f, g) == interlaces(act(m, f), act(m, g))
    W, _ = wronskian(f, g)
    W2, _ = wronskian(act(m, f), act(m, g))
    assert np.max(np.abs(act(m, W).coeffs - W2.coeffs)) <= 1e-8 * np.max(np.abs(W2.coeffs))


@SETTINGS
@given(seeds, st.integers(2, 5), st.integers(1, 6))
def test_compatible_families_get_witnesses(seed, n, d):
    rng = np.random.default_rng(seed)
    fam, _ = compatible_family(rng, n, d)
    rep = family_compatible(fam, seed=0)
    assert rep.verdict is CompatVerdict.COMPATIBLE
    assert verify_report(rep, fam)
    res = common_interleaver(fam)
    if res.witness is not None:
        assert all(interlaces(f, res.witness) for f in fam)


def _strict_pair(rng, d, same_sign):
    gamma = separated_roots(rng, d, gap=0.3)
    ext = np.concatenate([[gamma[0] + 1.5], gamma, [gamma[-1] - 1.5]])

    def member(positive):
        roots = []
        for j in range(1, d + 1):
            lo, hi = (ext[j + 1], ext[j]) if positive else (ext[j], ext[j - 1])
            w = hi - lo
            roots.append(rng.uniform(lo + 0.1 * w, hi - 0.1 * w))
        return Poly.from_roots(roots, rng.uniform(0.5, 2.0) * (1 if positive else -1), d)

    return member(True), member(same_sign)


@SETTINGS
@given(seeds, st.integers(1, 8))
def test_opposite_sign_pairs_separate_top_roots(seed, d):
    rng = np.random.default_rng(seed)
    f, g = _strict_pair(rng, d, same_sign=False)
    lf, lg = real_roots(f).expanded()[0], real_roots(g).expanded()[0]
    assert abs(lf - lg) > DEFAULT_TOL.tau_root


@SETTINGS
@given(seeds, st.integers(2, 8))
def test_same_sign_pairs_second_root_below_top(seed, d):
    rng = np.random.default_rng(seed)
    f, g = _strict_pair(rng, d, same_sign=True)
    rf, rg = real_roots(f).expanded(), real_roots(g).expanded()
    assert rf[1] < rg[0] and rg[1] < rf[0]


@SETTINGS
@given(seeds, st.integers(2, 5))
def test_non_proper_reduction(seed, n):
    rng = np.random.default_rng(seed)
    d = 3
    members = [random_real_rooted(rng, d) for _ in range(n - 1)]
    a = rng.uniform(0.2, 1.0, n - 1)
    members.append(-sum((ai * m for ai, m in zip(a[1:], members[1:])), a[0] * members[0]))
    fam = Family(members)
    w = zero_convex_combination(fam)
    assert w is not None
    c = rng.dirichlet(np.ones(n))
    s = min(c[i] / w[i] for i in range(n) if w[i] > 0)
    reduced = c - s * np.asarray(w)
    assert np.all(reduced >= -1e-12) and np.sum(reduced <= 1e-12) >= 1
    M = fam.matrix()
    assert np.allclose(M @ reduced, M @ c, atol=1e-9 * np.abs(M).max())


@SETTINGS
@given(seeds, st.integers(3, 5), st.integers(2, 6))
def test_diagnostics_sign_law(seed, n, d):
    rng = np.random.default_rng(seed)
    fam, _ = double_root_family(rng, n, d)
    tol = DEFAULT_TOL
    for diag in nonsimple_root_diagnostics(fam, tol):
        r = diag.location
        # the location is a root of some member
        assert any(abs(npoly.polyval(r, f.coeffs)) <= 1e-6 * max(1.0, np.abs(f.coeffs).max())
                   for f in fam)
        p = sum((w * f for w, f in zip(diag.witness_weights, fam)), Poly.zero(d))
        p2 = npoly.polyval(r, npoly.polyder(p.coeffs, 2))
        assert p2 != 0
        for f in fam:
            fr = npoly.polyval(r, f.coeffs)
            assert math.copysign(1, p2) * fr <= tol.tau_sign * max(1.0, np.abs(f.coeffs).max())
        assert not diag.inconsistencies
