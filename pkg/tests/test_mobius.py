import math

import numpy as np
import pytest

from compatpoly.mobius import INF, MobiusMap, act, act_point, generic_point, push, rotation_to_infinity
from compatpoly.poly import Poly, effective_degree
from compatpoly.roots import real_roots

S = math.sqrt(0.5)


def test_determinant_check():
    with pytest.raises(ValueError):
        MobiusMap(2.0, 0.0, 0.0, 1.0)


def test_act_examples():
    # frozen from oracles.act
    assert act(MobiusMap(1, 1, 0, 1), Poly([0, 0, 1], 2)) == Poly([1, 2, 1], 2)
    assert act(MobiusMap(0, -1, 1, 0), Poly([-1, 0, 1], 2)) == Poly([1, 0, -1], 2)
    got = act(rotation_to_infinity(1.0), Poly([-1, 1], 1))
    assert got.allclose(Poly([0, -math.sqrt(2)], 1), atol=1e-15)


def test_act_point():
    assert act_point(MobiusMap.identity(), 2.0) == 2.0
    m = MobiusMap(0, -1, 1, 0)
    assert act_point(m, 0.0) == INF
    assert act_point(m, INF) == 0.0


@pytest.mark.parametrize("t0,expected", [
    (0.0, (0.0, -1.0, 1.0, 0.0)),
    (1.0, (-S, -S, S, -S)),
])
def test_rotation_to_infinity(t0, expected):
    m = rotation_to_infinity(t0)
    assert (m.alpha, m.beta, m.gamma, m.delta) == pytest.approx(expected)
    assert act_point(m, t0) == INF


def test_rotation_is_orthogonal():
    for t0 in (-7.5, -1.0, 0.3, 12.0):
        M = rotation_to_infinity(t0).as_matrix()
        assert np.allclose(M @ M.T, np.eye(2), atol=1e-12)
        assert np.linalg.det(M) == pytest.approx(1.0)


def test_push_moves_roots_forward():
    p = Poly.from_roots([2.0, -1.0, 0.5])
    m = MobiusMap.rotation(0.4)
    got = np.sort(real_roots(push(m, p)).expanded())
    want = np.sort([act_point(m, r) for r in (2.0, -1.0, 0.5)])
    assert got == pytest.approx(want, abs=1e-9)


def test_push_rotation_gives_full_degree():
    p = Poly([-1, 1, 0], 2)        # one root at infinity
    t0 = generic_point([p])
    q = push(rotation_to_infinity(t0), p)
    assert effective_degree(q).degree == 2


def test_inverse_and_composition():
    m = MobiusMap.rotation(0.3) @ MobiusMap(1, 2, 0, 1)
    e = m @ m.inverse()
    assert (e.alpha, e.beta, e.gamma, e.delta) == pytest.approx((1, 0, 0, 1), abs=1e-12)
