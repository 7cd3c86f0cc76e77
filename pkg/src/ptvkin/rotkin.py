"""Rotation-vector and SO(3) primitives.

Vectors are numpy arrays of shape (3,); quaternions are arrays of shape (4,)
in scalar-first order with the canonical sign w >= 0.  Rotation vectors are
restricted to magnitude < pi - 1e-6: the translation-vector maps degenerate
at pi and the extraction from a quaternion becomes ambiguous there.
"""

from __future__ import annotations

import math

import numpy as np

from . import coeffs
from .coeffs import SIGMA_MAX
from .errors import DomainError

__all__ = [
    "SIGMA_MAX", "skew", "rodrigues", "bortz_rate",
    "quat_multiply", "quat_conjugate", "quat_normalize", "quat_to_matrix",
    "quat_from_rotvec", "rotvec_from_quat", "quat_rate",
]


def check_rotvec(sigma: np.ndarray) -> float:
    """Validate a rotation vector and return its magnitude."""
    s = float(np.linalg.norm(sigma))
    if not (s < SIGMA_MAX):
        raise DomainError(f"rotation-vector magnitude {s} outside [0, pi - 1e-6)")
    return s


def skew(v: np.ndarray) -> np.ndarray:
    """Cross-product matrix S with S @ u == cross(v, u)."""
    x, y, z = (float(c) for c in v)
    return np.array([[0.0, -z, y],
                     [z, 0.0, -x],
                     [-y, x, 0.0]])


def rodrigues(sigma: np.ndarray) -> np.ndarray:
    """Rotation matrix exp(skew(sigma)) = I + b1 S + a1 S^2."""
    sigma = np.asarray(sigma, dtype=float)
    s = float(np.linalg.norm(sigma))
    if s >= SIGMA_MAX:
        raise DomainError(f"rotation-vector magnitude {s} outside [0, pi - 1e-6)")
    a1, _, b1 = coeffs.eval_matrix_coeffs(s)
    S = skew(sigma)
    return np.eye(3) + b1 * S + a1 * (S @ S)


def bortz_rate(sigma: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Rotation-vector kinematics: sigma_dot = omega + cross terms.

    sigma_dot = omega + 1/2 sigma x omega + f5 sigma x (sigma x omega).
    Satisfies sigma . sigma_dot = sigma . omega exactly.
    """
    sigma = np.asarray(sigma, dtype=float)
    omega = np.asarray(omega, dtype=float)
    s = check_rotvec(sigma)
    f5 = coeffs.eval_f5(s)
    sxw = np.cross(sigma, omega)
    return omega + 0.5 * sxw + f5 * np.cross(sigma, sxw)


# ---------------------------------------------------------------------------
# Quaternions (oracle attitude state).
# ---------------------------------------------------------------------------

def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    w1, x1, y1, z1 = (float(c) for c in a)
    w2, x2, y2, z2 = (float(c) for c in b)
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 + y1 * w2 + z1 * x2 - x1 * z2,
        w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
    ])


def quat_conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]], dtype=float)


def quat_normalize(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    n = float(np.linalg.norm(q))
    if n == 0.0 or not math.isfinite(n):
        raise ValueError("cannot normalize zero/non-finite quaternion")
    q = q / n
    return -q if q[0] < 0.0 else q


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = (float(c) for c in q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_from_rotvec(sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    s = check_rotvec(sigma)
    h = 0.5 * s
    if s < 1e-8:
        # sin(h)/s to second order; avoids 0/0 at the identity
        k = 0.5 - s * s / 48.0
    else:
        k = math.sin(h) / s
    return quat_normalize(np.array([math.cos(h), *(k * sigma)]))


def rotvec_from_quat(q: np.ndarray) -> np.ndarray:
    q = quat_normalize(q)
    vec = q[1:]
    vn = float(np.linalg.norm(vec))
    angle = 2.0 * math.atan2(vn, float(q[0]))
    if angle >= SIGMA_MAX:
        raise DomainError(f"quaternion rotation angle {angle} outside [0, pi - 1e-6)")
    if vn < 1e-12:
        return 2.0 * vec  # angle/vn -> 2 as angle -> 0
    return (angle / vn) * vec


def quat_rate(q: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Attitude kinematics q_dot = 1/2 q (x) [0, omega]."""
    return 0.5 * quat_multiply(q, np.array([0.0, *omega]))
