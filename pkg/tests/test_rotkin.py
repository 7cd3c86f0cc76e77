"""Rotation-vector and quaternion primitives."""

import numpy as np
import pytest

from ptvkin import oracle, rotkin
from ptvkin.errors import DomainError

RNG = np.random.default_rng(1234)


def _random_rotvec(max_mag=3.0):
    v = RNG.normal(size=3)
    v /= np.linalg.norm(v)
    return v * RNG.uniform(0.0, max_mag)


def test_skew_properties():
    for _ in range(20):
        a, b = RNG.normal(size=3), RNG.normal(size=3)
        S = rotkin.skew(a)
        assert np.allclose(S + S.T, 0.0)
        assert np.allclose(S @ b, np.cross(a, b))
        # S^3 = -|a|^2 S
        assert np.allclose(S @ S @ S, -(a @ a) * S, atol=1e-12)


def test_rodrigues_is_rotation():
    for _ in range(50):
        sg = _random_rotvec()
        R = rotkin.rodrigues(sg)
        assert np.allclose(R @ R.T, np.eye(3), atol=1e-13)
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-13)
        # the rotation axis is fixed
        assert np.allclose(R @ sg, sg, atol=1e-12)


def test_rodrigues_matches_quaternion():
    for _ in range(50):
        sg = _random_rotvec()
        R1 = rotkin.rodrigues(sg)
        R2 = rotkin.quat_to_matrix(rotkin.quat_from_rotvec(sg))
        assert np.max(np.abs(R1 - R2)) < 1e-12


def test_rotvec_quat_roundtrip():
    for _ in range(50):
        sg = _random_rotvec()
        back = rotkin.rotvec_from_quat(rotkin.quat_from_rotvec(sg))
        assert np.max(np.abs(back - sg)) < 1e-12


def test_quat_multiply_composes_rotations():
    for _ in range(20):
        qa = rotkin.quat_from_rotvec(_random_rotvec())
        qb = rotkin.quat_from_rotvec(_random_rotvec())
        lhs = rotkin.quat_to_matrix(rotkin.quat_multiply(qa, qb))
        rhs = rotkin.quat_to_matrix(qa) @ rotkin.quat_to_matrix(qb)
        assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_bortz_rate_axis_projection():
    # sigma . sigma_dot == sigma . omega for the rotation-vector rate
    for _ in range(50):
        sg = _random_rotvec()
        w = RNG.normal(size=3) * 5.0
        rate = rotkin.bortz_rate(sg, w)
        assert sg @ rate == pytest.approx(sg @ w, rel=1e-12, abs=1e-12)


def test_bortz_reduces_to_omega_when_parallel():
    sg = np.array([0.8, 0.0, 0.0])
    w = np.array([2.5, 0.0, 0.0])
    assert np.allclose(rotkin.bortz_rate(sg, w), w, atol=1e-14)


def test_rotvec_domain():
    with pytest.raises(DomainError):
        rotkin.rodrigues(np.array([np.pi, 0.0, 0.0]))


def test_rotation_vector_rate_consistent_with_quaternion_rate():
    """Propagate attitude by quaternion and by rotation vector; compare."""
    profile = oracle.PolySinusoidProfile(
        omega_poly=((0.3, 0.5), (0.1,), (-0.2, 0.4)),
        omega_sin=((0.8, 3.0, 0.2), (0.5, 5.0, 1.0), (0.3, 2.0, 0.0)),
    )
    t1, steps = 1.5, 4000
    h = t1 / steps
    q = np.array([1.0, 0.0, 0.0, 0.0])
    sg = np.zeros(3)

    def qdot(t, q_):
        w, _ = profile.evaluate(t)
        return rotkin.quat_rate(q_, w)

    def sdot(t, s_):
        w, _ = profile.evaluate(t)
        return rotkin.bortz_rate(s_, w)

    t = 0.0
    for _ in range(steps):
        k1 = qdot(t, q); k2 = qdot(t + h / 2, q + h / 2 * k1)
        k3 = qdot(t + h / 2, q + h / 2 * k2); k4 = qdot(t + h, q + h * k3)
        q = rotkin.quat_normalize(q + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
        k1 = sdot(t, sg); k2 = sdot(t + h / 2, sg + h / 2 * k1)
        k3 = sdot(t + h / 2, sg + h / 2 * k2); k4 = sdot(t + h, sg + h * k3)
        sg = sg + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h

    assert np.linalg.norm(sg) < 2.5
    sg_ref = rotkin.rotvec_from_quat(q)
    assert np.max(np.abs(sg - sg_ref)) < 1e-9
