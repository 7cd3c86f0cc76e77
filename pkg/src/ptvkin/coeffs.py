"""Scalar coefficient functions of the rotation-vector magnitude.

Every coefficient here has a removable singularity at sigma = 0 and is
evaluated through two branches: a short Taylor polynomial below
``SERIES_THRESHOLD`` and a closed form above it.  The closed forms are
rearranged around cancellation-free kernels (half-angle products that are
themselves series-evaluated below sigma = 1), so both branches stay accurate
to ~1e-15 relative for any sigma in [0, pi - 1e-6).

Naming: f5 is the Bortz correction coefficient; w1, w2 define the map from
the new PTV to Savage's PTV; w3 appears in both PTV rate equations; w4, w5
are the sigma-derivatives of w1, w2 divided by sigma (so that
d(w1)/dt = (sigma . omega) * w4 along any rotation-vector trajectory).
a1, a2, b1 are the bracketed-operator coefficients of the thrust-velocity
and double-integral maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SIGMA_MAX = math.pi - 1e-6

# Below this, each public coefficient uses its 4-term Taylor polynomial.
SERIES_THRESHOLD = 1e-3

# Below this, the internal kernels switch from trig to their own series.
_KERNEL_SWITCH = 1.0


def check_sigma_mag(s: float) -> None:
    if not (0.0 <= s < SIGMA_MAX):
        raise DomainError(f"rotation-vector magnitude {s!r} outside [0, pi - 1e-6)")


# ---------------------------------------------------------------------------
# Cancellation-free kernels.
#
# The raw numerators below are tiny differences of O(sigma) trig terms
# (e.g. _u is O(sigma^3), _n4 is O(sigma^9)), so direct evaluation loses all
# significant digits for small sigma.  Each kernel therefore carries its own
# series branch with enough terms for full double precision at the switch.
# ---------------------------------------------------------------------------

def _u(s: float) -> float:
    """sigma*cos(sigma/2) - 2*sin(sigma/2); ~ -sigma^3/12 near 0."""
    if s < _KERNEL_SWITCH:
        s2 = s * s
        return s * s2 * (-1 / 12
                         + s2 * (1 / 480
                                 + s2 * (-1 / 53760
                                         + s2 * (1 / 11612160
                                                 + s2 * (-1 / 4087480320
                                                         + s2 * (1 / 2125489766400
                                                                 + s2 * (-1 / 1530352631808000)))))))
    h = 0.5 * s
    return s * math.cos(h) - 2.0 * math.sin(h)


def _m(s: float) -> float:
    """sigma - sin(sigma); ~ sigma^3/6 near 0."""
    if s < _KERNEL_SWITCH:
        s2 = s * s
        return s * s2 * (1 / 6
                         + s2 * (-1 / 120
                                 + s2 * (1 / 5040
                                         + s2 * (-1 / 362880
                                                 + s2 * (1 / 39916800
                                                         + s2 * (-1 / 6227020800
                                                                 + s2 * (1 / 1307674368000)))))))
    return s - math.sin(s)


def _n3(s: float) -> float:
    """sigma*sin(sigma) + sigma^2 - 4 + 4*cos(sigma); ~ sigma^6/360 near 0."""
    if s < _KERNEL_SWITCH:
        s2 = s * s
        return s2 * s2 * s2 * (1 / 360
                               + s2 * (-1 / 10080
                                       + s2 * (1 / 604800
                                               + s2 * (-1 / 59875200
                                                       + s2 * (1 / 8717829120
                                                               + s2 * (-1 / 1743565824000
                                                                       + s2 * (1 / 457312407552000)))))))
    return s * math.sin(s) + s * s - 4.0 + 4.0 * math.cos(s)


def _n4(s: float) -> float:
    """Numerator of w4; ~ -sigma^9/2160 near 0.

    -sigma^3 cos + 3 sigma^2 sin + 6 sigma cos - 6 sigma + 2 sin - sin(2 sigma)
    """
    if s < _KERNEL_SWITCH:
        s2 = s * s
        s3 = s * s2
        return s3 * s3 * s3 * (-1 / 2160
                               + s2 * (1 / 30240
                                       + s2 * (-1 / 907200
                                               + s2 * (1 / 42768000
                                                       + s2 * (-313 / 871782912000
                                                               + s2 * (67 / 15692092416000
                                                                       + s2 * (-191 / 4668397493760000)))))))
    c, sn = math.cos(s), math.sin(s)
    return -s ** 3 * c + 3 * s * s * sn + 6 * s * c - 6 * s + 2 * sn - math.sin(2 * s)


def _p5(s: float) -> float:
    """Bracket factor of w5; ~ -sigma^9/4320 near 0."""
    if s < _KERNEL_SWITCH:
        s2 = s * s
        s3 = s * s2
        return s3 * s3 * s3 * (-1 / 4320
                               + s2 * (1 / 48384
                                       + s2 * (-13 / 19353600
                                               + s2 * (137 / 10948608000
                                                       + s2 * (-35173 / 223176425472000
                                                               + s2 * (2603 / 1785411403776000
                                                                       + s2 * (-106201 / 10198269938368512000)))))))
    h = 0.5 * s
    s2 = s * s
    return (-2 * s * (3 + s2) * math.cos(h) + 6 * s * math.cos(3 * h)
            + 12 * math.sin(h) + 9 * s2 * math.sin(h) - s2 * s2 * math.sin(h)
            - 4 * math.sin(3 * h) + s2 * math.sin(3 * h))


def _denom(s: float) -> float:
    """2 + sigma^2 - 2 cos(sigma) - 2 sigma sin(sigma), as u^2 + sigma^2 sin^2(sigma/2).

    The identity keeps the O(sigma^4) quantity positive and fully accurate.
    """
    u = _u(s)
    ssh = s * math.sin(0.5 * s)
    return u * u + ssh * ssh


# ---------------------------------------------------------------------------
# Public coefficient evaluations.
# ---------------------------------------------------------------------------

def eval_f5(sigma_mag: float, threshold: float = SERIES_THRESHOLD) -> float:
    """Bortz coefficient (1/sigma^2)(1 - sigma sin(sigma) / (2(1 - cos(sigma))))."""
    s = float(sigma_mag)
    check_sigma_mag(s)
    if s < threshold:
        s2 = s * s
        return 1 / 12 + s2 * (1 / 720 + s2 * (1 / 30240 + s2 * (1 / 1209600)))
    # 1 - s sin s / (2(1-cos s)) = -u / (2 sin(s/2))
    return -_u(s) / (2.0 * s * s * math.sin(0.5 * s))


def eval_w12(sigma_mag: float, threshold: float = SERIES_THRESHOLD) -> tuple[float, float]:
    """Coefficients of the new-PTV -> Savage-PTV operator I + w1 S + w2 S^2."""
    s = float(sigma_mag)
    check_sigma_mag(s)
    if s < threshold:
        s2 = s * s
        w1 = 1 / 6 + s2 * (-1 / 540 + s2 * (-1 / 27216 + s2 * (-1 / 1749600)))
        w2 = 1 / 36 + s2 * (1 / 6480 + s2 * (-1 / 4082400 + s2 * (-13 / 293932800)))
        return w1, w2
    u = _u(s)
    d = _denom(s)
    w1 = -math.sin(0.5 * s) * u / d
    w2 = u * u / (s * s * d)
    return w1, w2


def eval_w345(sigma_mag: float, threshold: float = SERIES_THRESHOLD) -> tuple[float, float, float]:
    """w3 of both PTV rate equations and the derivative coefficients w4, w5.

    w4 = w1'(sigma)/sigma and w5 = w2'(sigma)/sigma.  Limits at 0:
    w3 -> 1/360, w4 -> -1/270, w5 -> 1/3240.
    """
    s = float(sigma_mag)
    check_sigma_mag(s)
    if s < threshold:
        s2 = s * s
        w3 = 1 / 360 + s2 * (1 / 7560 + s2 * (1 / 201600 + s2 * (1 / 5987520)))
        w4 = -1 / 270 + s2 * (-1 / 6804 + s2 * (-1 / 291600 + s2 * (-307 / 6062364000)))
        w5 = 1 / 3240 + s2 * (-1 / 1020600 + s2 * (-13 / 48988800 + s2 * (-479 / 50923857600)))
        return w3, w4, w5
    sh = math.sin(0.5 * s)
    d = _denom(s)
    s2 = s * s
    s4 = s2 * s2
    w3 = _n3(s) / (4.0 * s4 * sh * sh)
    w4 = _n4(s) / (2.0 * s * d * d)
    w5 = _u(s) * _p5(s) / (s4 * d * d)
    return w3, w4, w5


def eval_matrix_coeffs(sigma_mag: float, threshold: float = SERIES_THRESHOLD) -> tuple[float, float, float]:
    """a1 = (1-cos s)/s^2, a2 = (1 - sin s / s)/s^2, b1 = sin s / s."""
    s = float(sigma_mag)
    check_sigma_mag(s)
    if s < threshold:
        s2 = s * s
        a1 = 1 / 2 + s2 * (-1 / 24 + s2 * (1 / 720 + s2 * (-1 / 40320)))
        a2 = 1 / 6 + s2 * (-1 / 120 + s2 * (1 / 5040 + s2 * (-1 / 362880)))
        b1 = 1.0 + s2 * (-1 / 6 + s2 * (1 / 120 + s2 * (-1 / 5040)))
        return a1, a2, b1
    sh = math.sin(0.5 * s)
    s2 = s * s
    a1 = 2.0 * sh * sh / s2
    a2 = _m(s) / (s2 * s)
    b1 = math.sin(s) / s
    return a1, a2, b1


@dataclass(frozen=True)
class CoeffSet:
    """All scalar coefficients evaluated at one sigma magnitude."""

    sigma_mag: float
    f5: float
    w1: float
    w2: float
    w3: float
    w4: float
    w5: float
    a1: float
    a2: float
    b1: float

    @classmethod
    def at(cls, sigma_mag: float, threshold: float = SERIES_THRESHOLD) -> "CoeffSet":
        f5 = eval_f5(sigma_mag, threshold)
        w1, w2 = eval_w12(sigma_mag, threshold)
        w3, w4, w5 = eval_w345(sigma_mag, threshold)
        a1, a2, b1 = eval_matrix_coeffs(sigma_mag, threshold)
        return cls(float(sigma_mag), f5, w1, w2, w3, w4, w5, a1, a2, b1)


def dw12_consistency(sigma: np.ndarray, omega: np.ndarray) -> tuple[float, float]:
    """Time derivatives of w1 and w2 along a rotation-vector trajectory.

    d(w1)/dt = (sigma . omega) w4 and d(w2)/dt = (sigma . omega) w5, which
    follows from sigma * d(sigma)/dt = sigma . omega under the Bortz equation.
    """
    sigma = np.asarray(sigma, dtype=float)
    omega = np.asarray(omega, dtype=float)
    s = float(np.linalg.norm(sigma))
    _, w4, w5 = eval_w345(s)
    d = float(sigma @ omega)
    return d * w4, d * w5


def matrix_coeffs_array(sigma_mag: np.ndarray,
                        threshold: float = SERIES_THRESHOLD) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (a1, a2, b1) for identity sweeps; matches eval_matrix_coeffs."""
    s = np.asarray(sigma_mag, dtype=float)
    if np.any(s < 0) or np.any(s >= SIGMA_MAX):
        raise DomainError("rotation-vector magnitude outside [0, pi - 1e-6)")
    s2 = s * s
    a1_ser = 1 / 2 + s2 * (-1 / 24 + s2 * (1 / 720 + s2 * (-1 / 40320)))
    a2_ser = 1 / 6 + s2 * (-1 / 120 + s2 * (1 / 5040 + s2 * (-1 / 362880)))
    b1_ser = 1.0 + s2 * (-1 / 6 + s2 * (1 / 120 + s2 * (-1 / 5040)))

    ss = np.where(s < threshold, 1.0, s)  # safe divisor for the closed branch
    sh = np.sin(0.5 * ss)
    a1_cl = 2.0 * sh * sh / (ss * ss)
    # sigma - sin(sigma) via its series below the kernel switch
    m_ser = ss ** 3 * (1 / 6 + ss ** 2 * (-1 / 120 + ss ** 2 * (1 / 5040 + ss ** 2 * (
        -1 / 362880 + ss ** 2 * (1 / 39916800 + ss ** 2 * (-1 / 6227020800 + ss ** 2 / 1307674368000))))))
    m = np.where(ss < _KERNEL_SWITCH, m_ser, ss - np.sin(ss))
    a2_cl = m / ss ** 3
    b1_cl = np.sin(ss) / ss

    small = s < threshold
    return (np.where(small, a1_ser, a1_cl),
            np.where(small, a2_ser, a2_cl),
            np.where(small, b1_ser, b1_cl))
