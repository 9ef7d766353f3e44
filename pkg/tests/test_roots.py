import math

import numpy as np
import pytest

from compatpoly.poly import Poly
from compatpoly.roots import (
    NotRealRooted, Verdict, ZeroPolynomialError, batch_spectra, complex_margin,
    is_real_rooted, real_roots, sturm_count, sturm_isolate,
)


def test_example_roots():
    spec = real_roots(Poly([-3, 2, 1], 2))
    assert spec.expanded() == pytest.approx([1.0, -3.0])
    assert spec.roots_at_infinity == 0
    assert spec.min_gap == pytest.approx(4.0)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_multiple_root_is_one_cluster(m):
    spec = real_roots(Poly.from_roots([1.0] * m))
    assert len(spec.roots) == 1
    assert spec.roots[0][1] == m
    assert spec.roots[0][0] == pytest.approx(1.0, abs=1e-9)


def test_mixed_multiplicities():
    spec = real_roots(Poly.from_roots([2, 2, -1, -1, -1, 0.5]))
    assert [m for _, m in spec.roots] == [2, 1, 3]


def test_roots_at_infinity():
    spec = real_roots(Poly([-1, 1, 0, 0], 3))
    assert spec.roots_at_infinity == 2
    assert spec.expanded() == pytest.approx([1.0])


def test_not_real_rooted():
    with pytest.raises(NotRealRooted) as exc:
        real_roots(Poly([1, 0, 1], 2))
    assert exc.value.margin == pytest.approx(1.0)
    assert is_real_rooted(Poly([1, 0, 1], 2)).verdict is Verdict.NOT_REAL_ROOTED


def test_near_double_root_is_real():
    # t^2 + 1e-13 is within tolerance of a double root
    assert is_real_rooted(Poly([1e-13, 0, 1], 2))


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomialError):
        real_roots(Poly.zero(2))
    with pytest.raises(ZeroPolynomialError):
        is_real_rooted(Poly.zero(2))


def test_sturm_count_and_isolation():
    p = Poly.from_roots([3, 1, -2])
    assert sturm_count([float(c) for c in p.coeffs]) == 3
    assert sturm_count([1.0, 0.0, 1.0]) == 0
    boxes = sturm_isolate(p, width=1e-9)
    mids = sorted(0.5 * (a + b) for a, b in boxes)
    assert mids == pytest.approx([-2, 1, 3], abs=1e-8)


def test_batch_matches_scalar():
    C = np.array([[-3, 2, 1], [1, 0, 1], [0, 0, 0], [-1, 1, 0]], dtype=float)
    bs = batch_spectra(C, ref_scale=1.0)
    assert list(bs.zero) == [False, False, True, False]
    assert bs.margin[0] == 0.0
    assert bs.margin[1] == pytest.approx(complex_margin(Poly(C[1])))
    assert bs.min_gap[0] == pytest.approx(4.0)
    assert math.isinf(bs.min_gap[3])
