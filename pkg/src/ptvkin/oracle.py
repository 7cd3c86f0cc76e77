"""Analytic motion profiles and the brute-force ground-truth generator.

The generator integrates the definitional chain directly and at high rate:
attitude quaternion from the gyro profile, interval-frame velocity from the
rotated specific force, and its integral.  The translation vectors are then
recovered algebraically (inverse maps), which keeps this reference fully
independent of the PTV rate equations under test.

All runs use single-interval semantics: the update interval starts at t = 0
with identity attitude and zero accumulated velocity/position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import transvec
from .errors import ConvergenceError
from .rotkin import (SIGMA_MAX, quat_normalize, quat_rate, quat_to_matrix,
                     rotvec_from_quat)


@dataclass(frozen=True)
class ConstantProfile:
    """Constant body angular rate and body-frame specific force."""

    omega0: tuple[float, float, float] = (0.0, 0.0, 0.0)
    f0: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def evaluate(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        if t < 0:
            raise ValueError("profile time must be non-negative")
        return np.array(self.omega0, dtype=float), np.array(self.f0, dtype=float)


@dataclass(frozen=True)
class ConingProfile:
    """Classic coning motion plus a sinusoidal specific force.

    The body rate is the exact rate of an attitude whose z-axis traces a cone
    of half-apex angle ``alpha`` at angular frequency ``freq``:

        omega(t) = (-freq sin(alpha) sin(freq t),
                     freq sin(alpha) cos(freq t),
                    -freq (1 - cos(alpha)))

    Specific force is f0 * cos(thrust_freq * t) in the body frame.
    """

    alpha: float = 0.01
    freq: float = 2.0 * math.pi
    f0: tuple[float, float, float] = (0.0, 0.0, 9.8)
    thrust_freq: float = math.pi

    def evaluate(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        if t < 0:
            raise ValueError("profile time must be non-negative")
        sa = math.sin(self.alpha)
        ph = self.freq * t
        omega = np.array([-self.freq * sa * math.sin(ph),
                          self.freq * sa * math.cos(ph),
                          -self.freq * (1.0 - math.cos(self.alpha))])
        fb = math.cos(self.thrust_freq * t) * np.array(self.f0, dtype=float)
        return omega, fb


@dataclass(frozen=True)
class PolySinusoidProfile:
    """Per-axis polynomial plus sinusoid for both omega(t) and f_b(t).

    Each axis i evaluates to
        poly[i](t) + amp[i] * sin(freq[i] * t + phase[i])
    with ``poly[i]`` given by ascending-power coefficients.
    """

    omega_poly: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]] = ((0.0,),) * 3
    omega_sin: tuple[tuple[float, float, float], ...] = ((0.0, 0.0, 0.0),) * 3
    force_poly: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]] = ((0.0,),) * 3
    force_sin: tuple[tuple[float, float, float], ...] = ((0.0, 0.0, 0.0),) * 3

    @staticmethod
    def _axis(poly, sin_terms, t: float) -> float:
        val = 0.0
        for c in reversed(poly):
            val = val * t + c
        amp, freq, phase = sin_terms
        return val + amp * math.sin(freq * t + phase)

    def evaluate(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        if t < 0:
            raise ValueError("profile time must be non-negative")
        omega = np.array([self._axis(self.omega_poly[i], self.omega_sin[i], t) for i in range(3)])
        fb = np.array([self._axis(self.force_poly[i], self.force_sin[i], t) for i in range(3)])
        return omega, fb


MotionProfile = ConstantProfile | ConingProfile | PolySinusoidProfile


def evaluate_profile(profile: MotionProfile, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form (omega, f_b) of the profile at time t."""
    return profile.evaluate(t)


@dataclass
class GroundTruth:
    """Reference trajectory of every translation vector at the sample times."""

    t: np.ndarray
    quat: np.ndarray              # (N, 4) attitude, body relative to interval start
    sigma: np.ndarray             # (N, 3) rotation vector
    thrust_velocity: np.ndarray   # (N, 3) body-referenced
    interval_thrust_velocity: np.ndarray  # (N, 3) interval-start frame
    double_integral: np.ndarray   # (N, 3) interval-start frame
    sv: np.ndarray                # (N, 3) velocity translation vector
    sp: np.ndarray                # (N, 3) new position translation vector
    profile: MotionProfile = field(repr=False, default=None)

    def terminal(self) -> dict[str, np.ndarray]:
        return {
            "sigma": self.sigma[-1],
            "thrust_velocity": self.thrust_velocity[-1],
            "interval_thrust_velocity": self.interval_thrust_velocity[-1],
            "double_integral": self.double_integral[-1],
            "sv": self.sv[-1],
            "sp": self.sp[-1],
        }


def _integrate_reference(profile: MotionProfile, t1: float, nsteps: int,
                         keep_every: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """RK4 over (q, v, p) with q_dot = q rate, v_dot = R f_b, p_dot = v."""
    h = t1 / nsteps
    q = np.array([1.0, 0.0, 0.0, 0.0])
    v = np.zeros(3)
    p = np.zeros(3)

    def deriv(tau, q_, v_):
        omega, fb = profile.evaluate(tau)
        return quat_rate(q_, omega), quat_to_matrix(quat_normalize(q_)) @ fb, v_

    times = [0.0]
    qs = [q.copy()]
    vs = [v.copy()]
    ps = [p.copy()]
    t = 0.0
    for i in range(nsteps):
        dq1, dv1, dp1 = deriv(t, q, v)
        dq2, dv2, dp2 = deriv(t + h / 2, q + h / 2 * dq1, v + h / 2 * dv1)
        dq3, dv3, dp3 = deriv(t + h / 2, q + h / 2 * dq2, v + h / 2 * dv2)
        dq4, dv4, dp4 = deriv(t + h, q + h * dq3, v + h * dv3)
        q = quat_normalize(q + h / 6 * (dq1 + 2 * dq2 + 2 * dq3 + dq4))
        v = v + h / 6 * (dv1 + 2 * dv2 + 2 * dv3 + dv4)
        p = p + h / 6 * (dp1 + 2 * dp2 + 2 * dp3 + dp4)
        t = (i + 1) * h
        if (i + 1) % keep_every == 0:
            times.append(t)
            qs.append(q.copy())
            vs.append(v.copy())
            ps.append(p.copy())
    return np.array(times), np.array(qs), np.array(vs), np.array(ps)


def generate_ground_truth(profile: MotionProfile, t1: float,
                          coarse_samples: int = 50, refine_factor: int = 32,
                          richardson: bool = True,
                          richardson_tol: float = 1e-10) -> GroundTruth:
    """Reference trajectory at coarse_samples+1 evenly spaced times over [0, t1].

    Integrates at rate coarse_samples * refine_factor; when ``richardson`` is
    set, repeats at double rate and requires relative agreement below
    ``richardson_tol``, returning the finer result.
    """
    if refine_factor < 8:
        raise ValueError("refine_factor must be >= 8")
    if coarse_samples < 1:
        raise ValueError("coarse_samples must be >= 1")
    if t1 <= 0:
        raise ValueError("t1 must be positive")

    t, q, v, p = _integrate_reference(profile, t1, coarse_samples * refine_factor, refine_factor)
    if richardson:
        _, q2, v2, p2 = _integrate_reference(profile, t1, coarse_samples * refine_factor * 2,
                                             refine_factor * 2)
        scale = 1.0 + max(np.max(np.abs(v2)), np.max(np.abs(p2)))
        err = max(np.max(np.abs(q - q2)), np.max(np.abs(v - v2) / scale),
                  np.max(np.abs(p - p2) / scale))
        if err > richardson_tol:
            raise ConvergenceError(
                f"refinement check failed: relative change {err:.3e} > {richardson_tol:.1e}")
        q, v, p = q2, v2, p2

    n = len(t)
    sigma = np.empty((n, 3))
    tv_body = np.empty((n, 3))
    sv = np.empty((n, 3))
    sp = np.empty((n, 3))
    for k in range(n):
        sg = rotvec_from_quat(q[k])
        if np.linalg.norm(sg) >= SIGMA_MAX:
            raise ConvergenceError("profile left the rotation-vector domain")
        sigma[k] = sg
        R = quat_to_matrix(q[k])
        tv_body[k] = R.T @ v[k]
        sv[k] = transvec.body_thrust_velocity_to_vtv(sg, tv_body[k]).value
        sp[k] = transvec.double_integral_to_ptv(sg, p[k]).value

    return GroundTruth(t=t, quat=q, sigma=sigma, thrust_velocity=tv_body,
                       interval_thrust_velocity=v, double_integral=p,
                       sv=sv, sp=sp, profile=profile)
