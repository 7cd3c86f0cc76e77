"""Algebraic translation-vector maps and identity checkers.

Three translation-vector flavours are kept apart by an explicit kind tag:

* VTV       -- dual part of the inertial-to-thrust-frame screw (velocity-like)
* NEW_PTV   -- dual part of the inertial-to-thrust-position-frame screw
* SAVAGE_PTV -- Savage's position translation vector zeta

Mixing them silently is the classic error this library exists to prevent, so
every map validates the tag of its input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import coeffs
from .errors import KindError, SingularMapError
from .rotkin import check_rotvec, rodrigues, skew


class Kind(enum.Enum):
    VTV = "vtv"
    NEW_PTV = "new_ptv"
    SAVAGE_PTV = "savage_ptv"


@dataclass(frozen=True)
class TranslationVector:
    value: np.ndarray
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "value", np.asarray(self.value, dtype=float))
        if self.value.shape != (3,):
            raise ValueError("translation vector must have shape (3,)")

    def require(self, kind: Kind) -> np.ndarray:
        if self.kind is not kind:
            raise KindError(f"expected {kind.value} translation vector, got {self.kind.value}")
        return self.value


def vtv(value) -> TranslationVector:
    return TranslationVector(value, Kind.VTV)


def new_ptv(value) -> TranslationVector:
    return TranslationVector(value, Kind.NEW_PTV)


def savage_ptv(value) -> TranslationVector:
    return TranslationVector(value, Kind.SAVAGE_PTV)


@dataclass(frozen=True)
class Twist:
    """Dual vector omega + eps * body-referenced thrust velocity."""

    real: np.ndarray  # angular rate, rad/s
    dual: np.ndarray  # thrust velocity in the body frame, m/s

    def __post_init__(self):
        object.__setattr__(self, "real", np.asarray(self.real, dtype=float))
        object.__setattr__(self, "dual", np.asarray(self.dual, dtype=float))
        if not (np.all(np.isfinite(self.real)) and np.all(np.isfinite(self.dual))):
            raise ValueError("twist components must be finite")


# ---------------------------------------------------------------------------
# Operator matrices.  All are of the form I + alpha S + beta S^2 and commute
# along sigma, so sigma . (M x) == sigma . x for every map below.
# ---------------------------------------------------------------------------

def body_map_matrix(sigma: np.ndarray) -> np.ndarray:
    """I - a1 S + a2 S^2: maps the VTV to the body-frame thrust velocity."""
    s = check_rotvec(sigma)
    a1, a2, _ = coeffs.eval_matrix_coeffs(s)
    S = skew(sigma)
    return np.eye(3) - a1 * S + a2 * (S @ S)


def interval_map_matrix(sigma: np.ndarray) -> np.ndarray:
    """I + a1 S + a2 S^2: maps VTV/new-PTV to interval-start-frame quantities."""
    s = check_rotvec(sigma)
    a1, a2, _ = coeffs.eval_matrix_coeffs(s)
    S = skew(sigma)
    return np.eye(3) + a1 * S + a2 * (S @ S)


def savage_map_matrix(sigma: np.ndarray) -> np.ndarray:
    """I + w1 S + w2 S^2: maps the new PTV to Savage's PTV."""
    s = check_rotvec(sigma)
    w1, w2 = coeffs.eval_w12(s)
    S = skew(sigma)
    return np.eye(3) + w1 * S + w2 * (S @ S)


def _solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        out = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - bug signal
        raise SingularMapError(str(exc)) from exc
    if not np.all(np.isfinite(out)):  # pragma: no cover - bug signal
        raise SingularMapError("non-finite solve result inside domain")
    return out


# ---------------------------------------------------------------------------
# Maps.
# ---------------------------------------------------------------------------

def vtv_to_body_thrust_velocity(sigma: np.ndarray, sv: TranslationVector) -> np.ndarray:
    """Body-referenced thrust velocity from the VTV."""
    return body_map_matrix(sigma) @ sv.require(Kind.VTV)


def vtv_to_interval_thrust_velocity(sigma: np.ndarray, sv: TranslationVector) -> np.ndarray:
    """Thrust velocity referenced in the starting frame of the update interval.

    Rotating the result by -sigma reproduces vtv_to_body_thrust_velocity.
    """
    return interval_map_matrix(sigma) @ sv.require(Kind.VTV)


def body_thrust_velocity_to_vtv(sigma: np.ndarray, thrust_velocity: np.ndarray) -> TranslationVector:
    """Inverse of vtv_to_body_thrust_velocity (3x3 solve)."""
    out = _solve(body_map_matrix(sigma), np.asarray(thrust_velocity, dtype=float))
    return TranslationVector(out, Kind.VTV)


def ptv_to_double_integral(sigma: np.ndarray, sp: TranslationVector) -> np.ndarray:
    """Double-integrated specific force (interval-start frame) from the new PTV."""
    return interval_map_matrix(sigma) @ sp.require(Kind.NEW_PTV)


def double_integral_to_ptv(sigma: np.ndarray, dint: np.ndarray) -> TranslationVector:
    """Inverse of ptv_to_double_integral (3x3 solve)."""
    out = _solve(interval_map_matrix(sigma), np.asarray(dint, dtype=float))
    return TranslationVector(out, Kind.NEW_PTV)


def new_ptv_to_savage(sigma: np.ndarray, sp: TranslationVector) -> TranslationVector:
    """Savage's PTV zeta = (I + w1 S + w2 S^2) sigma'_p."""
    out = savage_map_matrix(sigma) @ sp.require(Kind.NEW_PTV)
    return TranslationVector(out, Kind.SAVAGE_PTV)


def savage_to_new_ptv(sigma: np.ndarray, zeta: TranslationVector) -> TranslationVector:
    """Inverse of new_ptv_to_savage (3x3 solve)."""
    out = _solve(savage_map_matrix(sigma), zeta.require(Kind.SAVAGE_PTV))
    return TranslationVector(out, Kind.NEW_PTV)


# ---------------------------------------------------------------------------
# Identity checkers.
# ---------------------------------------------------------------------------

def check_cross_matrix_identities(sigma: np.ndarray, sv: TranslationVector) -> tuple[float, float]:
    """Residuals of the two cross-product/matrix identities tying the VTV maps.

    First:  sigma x tv         == [b1 S - a1 S^2] sigma'_v
    Second: sigma x (sigma x tv) == [(1 - cos sigma) S + b1 S^2] sigma'_v
    where tv is the body-frame thrust velocity.  Returns max-norm residuals.
    """
    sigma = np.asarray(sigma, dtype=float)
    s = check_rotvec(sigma)
    v = sv.require(Kind.VTV)
    a1, _, b1 = coeffs.eval_matrix_coeffs(s)
    S = skew(sigma)
    tv = vtv_to_body_thrust_velocity(sigma, sv)

    lhs1 = np.cross(sigma, tv)
    rhs1 = (b1 * S - a1 * (S @ S)) @ v
    lhs2 = np.cross(sigma, lhs1)
    rhs2 = ((1.0 - np.cos(s)) * S + b1 * (S @ S)) @ v
    return float(np.max(np.abs(lhs1 - rhs1))), float(np.max(np.abs(lhs2 - rhs2)))


def check_triple_product_identities(sigma: np.ndarray, sp: np.ndarray,
                                    omega: np.ndarray) -> list[float]:
    """Normalized residuals of the six triple-product equalities.

    These hold for arbitrary finite vectors.  Each residual is scaled by the
    product of input magnitudes matching the identity's homogeneity degree,
    so the expected round-off level is a few ulps regardless of vector size.
    """
    sg = np.asarray(sigma, dtype=float)
    p = np.asarray(sp, dtype=float)
    w = np.asarray(omega, dtype=float)
    ns = float(np.linalg.norm(sg))
    npw = float(np.linalg.norm(p)) * float(np.linalg.norm(w))
    s2 = float(sg @ sg)
    sw = float(sg @ w)
    sp_dot = float(sg @ p)
    pxw = np.cross(p, w)
    sxw = np.cross(sg, w)
    sxp = np.cross(sg, p)

    pairs = [
        (np.cross(sg, np.cross(sg, pxw)), sw * sxp - sp_dot * sxw),
        (np.cross(w, sxp), np.cross(p, sxw) - np.cross(sg, pxw)),
        (float(p @ sxw) * sg, np.cross(p, np.cross(sg, sxw)) + sp_dot * sxw),
        (float(p @ sxw) * sg, sw * np.cross(p, sg) - s2 * pxw + sp_dot * sxw),
        (np.cross(np.cross(sg, sxw), sxp), sw * np.cross(sg, sxp) - s2 * np.cross(w, sxp)),
        (sp_dot * np.cross(sg, sxw), sw * np.cross(sg, sxp) + s2 * np.cross(sg, pxw)),
    ]
    # degree of sigma in each identity (p and w each enter linearly)
    degrees = [2, 1, 2, 2, 3, 3]
    return [float(np.max(np.abs(lhs - rhs)) / (1.0 + ns ** d * npw))
            for (lhs, rhs), d in zip(pairs, degrees)]
