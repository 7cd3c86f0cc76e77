"""Translation-vector maps: hand values, roundtrips, structural identities."""

import math

import numpy as np
import pytest

from ptvkin import coeffs, rotkin, transvec
from ptvkin.errors import KindError, SingularMapError
from ptvkin.transvec import Kind, new_ptv, savage_ptv, vtv

RNG = np.random.default_rng(77)


def _random_sigma(max_mag=3.0):
    v = RNG.normal(size=3)
    v /= np.linalg.norm(v)
    return v * RNG.uniform(0.0, max_mag)


# ---------------------------------------------------------------------------
# Hand-checked values near the top of the domain.  For sigma = (s, 0, 0) the
# operator [I + alpha S + beta S^2] applied to (0, 1, 0) gives
# (0, 1 - beta s^2, alpha s), which reduces to elementary trig for the maps.
# ---------------------------------------------------------------------------

S_EDGE = math.pi - 2e-6


def test_body_map_hand_value():
    sg = np.array([S_EDGE, 0.0, 0.0])
    y = transvec.body_map_matrix(sg) @ np.array([0.0, 1.0, 0.0])
    assert y[0] == 0.0
    assert y[1] == pytest.approx(math.sin(S_EDGE) / S_EDGE, rel=1e-10)
    assert y[2] == pytest.approx(-(1 - math.cos(S_EDGE)) / S_EDGE, rel=1e-10)
    # numerically: (0, ~0, -2/pi)
    assert abs(y[1]) < 1e-5
    assert y[2] == pytest.approx(-2.0 / math.pi, rel=1e-4)


def test_savage_map_hand_value():
    sg = np.array([S_EDGE, 0.0, 0.0])
    y = transvec.savage_map_matrix(sg) @ np.array([0.0, 1.0, 0.0])
    # reference values from a high-precision evaluation at this sigma
    assert y[0] == 0.0
    assert y[1] == pytest.approx(0.7115999, rel=1e-4)
    assert y[2] == pytest.approx(0.4530182, rel=1e-4)


def test_interval_map_hand_value():
    sg = np.array([S_EDGE, 0.0, 0.0])
    y = transvec.interval_map_matrix(sg) @ np.array([0.0, 1.0, 0.0])
    assert y[1] == pytest.approx(math.sin(S_EDGE) / S_EDGE, rel=1e-10)
    assert y[2] == pytest.approx((1 - math.cos(S_EDGE)) / S_EDGE, rel=1e-10)


# ---------------------------------------------------------------------------
# Structural properties.
# ---------------------------------------------------------------------------

def test_kind_mismatch_raises():
    sg = np.array([0.1, 0.2, 0.3])
    wrong = new_ptv([1.0, 2.0, 3.0])
    with pytest.raises(KindError):
        transvec.vtv_to_body_thrust_velocity(sg, wrong)
    with pytest.raises(KindError):
        transvec.new_ptv_to_savage(sg, vtv([1.0, 0.0, 0.0]))
    with pytest.raises(KindError):
        transvec.savage_to_new_ptv(sg, new_ptv([1.0, 0.0, 0.0]))


def test_kinds_are_tagged():
    sg = np.array([0.4, -0.1, 0.2])
    out = transvec.new_ptv_to_savage(sg, new_ptv([1.0, 2.0, 3.0]))
    assert out.kind is Kind.SAVAGE_PTV
    back = transvec.savage_to_new_ptv(sg, out)
    assert back.kind is Kind.NEW_PTV


def test_maps_are_linear():
    sg = _random_sigma()
    x, y = RNG.normal(size=3), RNG.normal(size=3)
    a, b = 1.7, -0.3
    lhs = transvec.ptv_to_double_integral(sg, new_ptv(a * x + b * y))
    rhs = (a * transvec.ptv_to_double_integral(sg, new_ptv(x))
           + b * transvec.ptv_to_double_integral(sg, new_ptv(y)))
    assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_sigma_component_preserved():
    # every map is I + alpha S + beta S^2, so the component along sigma is fixed
    for _ in range(50):
        sg = _random_sigma()
        x = RNG.normal(size=3) * 5.0
        for M in (transvec.body_map_matrix(sg), transvec.interval_map_matrix(sg),
                  transvec.savage_map_matrix(sg)):
            assert sg @ (M @ x) == pytest.approx(sg @ x, rel=1e-13, abs=1e-13)


def test_roundtrips():
    for _ in range(100):
        sg = _random_sigma()
        x = RNG.normal(size=3) * 10.0
        dint = transvec.ptv_to_double_integral(sg, new_ptv(x))
        back = transvec.double_integral_to_ptv(sg, dint).value
        assert np.max(np.abs(back - x)) < 1e-12

        z = transvec.new_ptv_to_savage(sg, new_ptv(x))
        back = transvec.savage_to_new_ptv(sg, z).value
        assert np.max(np.abs(back - x)) < 1e-12

        u = transvec.vtv_to_body_thrust_velocity(sg, vtv(x))
        back = transvec.body_thrust_velocity_to_vtv(sg, u).value
        assert np.max(np.abs(back - x)) < 1e-12


def test_body_and_interval_forms_agree():
    # interval-frame output rotated back to the body frame equals the body map
    for _ in range(30):
        sg = _random_sigma()
        R = rotkin.rodrigues(sg)
        lhs = R.T @ transvec.interval_map_matrix(sg)
        rhs = transvec.body_map_matrix(sg)
        assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_small_angle_maps_near_identity():
    sg = np.array([1e-8, -1e-8, 1e-8])
    for M in (transvec.body_map_matrix(sg), transvec.interval_map_matrix(sg),
              transvec.savage_map_matrix(sg)):
        assert np.max(np.abs(M - np.eye(3))) < 1e-7


def test_zero_rotation_maps_are_identity():
    z = np.zeros(3)
    assert np.allclose(transvec.body_map_matrix(z), np.eye(3))
    assert np.allclose(transvec.interval_map_matrix(z), np.eye(3))


def test_cross_matrix_identities():
    for _ in range(50):
        sg = _random_sigma()
        r1, r2 = transvec.check_cross_matrix_identities(sg, vtv(RNG.normal(size=3)))
        assert r1 < 1e-13 and r2 < 1e-13


def test_triple_product_identities():
    for _ in range(50):
        sg = RNG.uniform(-10, 10, 3)
        p = RNG.uniform(-10, 10, 3)
        w = RNG.uniform(-10, 10, 3)
        res = transvec.check_triple_product_identities(sg, p, w)
        assert len(res) == 6
        assert max(res) < 1e-12
