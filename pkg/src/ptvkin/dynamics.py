"""Translation-vector rate equations and a fixed-step RK4 integrator.

Three formulations are provided:

* ``ptv_thrust`` -- new-PTV rate driven by the body-frame thrust velocity
* ``ptv_vtv``    -- new-PTV rate driven by the velocity translation vector
* ``savage``     -- Savage-PTV rate driven by the velocity translation vector
* ``bortz``      -- rotation vector only (no translational state)

For analytic motion profiles the integrator co-propagates the reference
kinematic chain (rotation vector by the Bortz equation, interval-frame
velocity and its integral from the rotated specific force) and derives the
driving inputs from it at every RK4 stage, so all formulations see identical,
stage-consistent inputs.  Sampled inputs are supported through cubic Hermite
interpolation.

The integrator is deterministic: fixed step, no adaptivity, plain double
arithmetic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import coeffs
from .coeffs import SIGMA_MAX
from .errors import DomainError, SingularMapError
from .oracle import MotionProfile
from .transvec import Kind, TranslationVector


class Formulation(str, enum.Enum):
    PTV_THRUST = "ptv_thrust"
    PTV_VTV = "ptv_vtv"
    SAVAGE = "savage"
    BORTZ = "bortz"


@dataclass(frozen=True)
class KinematicState:
    """One integrated sample: rotation vector plus the translational states."""

    t: float
    sigma: np.ndarray
    sp: np.ndarray | None = None
    zeta: np.ndarray | None = None


def _cross(a, b):
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def _apply_operator(sigma, alpha, beta, x):
    """(I + alpha S + beta S^2) x without building the matrix."""
    sx = _cross(sigma, x)
    return x + alpha * sx + beta * _cross(sigma, sx)


def _apply_operator_inverse(sigma, s2, alpha, beta, x):
    """Closed-form inverse of I + alpha S + beta S^2 applied to x.

    In the algebra generated by S (S^3 = -sigma^2 S) the inverse is again
    I + c S + d S^2 with c = -alpha/Delta, d = (alpha^2 - beta
    + sigma^2 beta^2)/Delta, Delta = (1 - sigma^2 beta)^2 + sigma^2 alpha^2.
    """
    delta = (1.0 - s2 * beta) ** 2 + s2 * alpha * alpha
    if delta <= 0.0 or not math.isfinite(delta):  # pragma: no cover - bug signal
        raise SingularMapError("translation-vector operator not invertible in domain")
    c = -alpha / delta
    d = (alpha * alpha - beta + s2 * beta * beta) / delta
    return _apply_operator(sigma, c, d, x)


# ---------------------------------------------------------------------------
# Rate equations (internal, array-based).
# ---------------------------------------------------------------------------

def _bortz(sigma, omega, f5):
    sxw = _cross(sigma, omega)
    return omega + 0.5 * sxw + f5 * _cross(sigma, sxw)


def _ptv_rate_thrust(sigma, sp, omega, tv, f5, w3):
    sxt = _cross(sigma, tv)
    pxw = _cross(sp, omega)
    sxw = _cross(sigma, omega)
    corr = _cross(sigma, sxt) + _cross(sigma, pxw) + _cross(sp, sxw)
    return (tv + 0.5 * (sxt + pxw) + f5 * corr
            + (w3 * float(sigma @ sp)) * _cross(sigma, sxw))


def _ptv_rate_vtv(sigma, sp, omega, sv, f5, w3):
    pxw = _cross(sp, omega)
    sxw = _cross(sigma, omega)
    return (sv + 0.5 * pxw + f5 * (_cross(sigma, pxw) + _cross(sp, sxw))
            + (w3 * float(sigma @ sp)) * _cross(sigma, sxw))


def _savage_rate_vtv(sigma, s2, zeta, omega, sv, c: coeffs.CoeffSet):
    # sigma'_p is recovered from zeta at every evaluation; zeta stays the
    # sole translational state.
    sp = _apply_operator_inverse(sigma, s2, c.w1, c.w2, zeta)
    f5, w1, w2, w3, w4, w5 = c.f5, c.w1, c.w2, c.w3, c.w4, c.w5
    sxv = _cross(sigma, sv)
    pxw = _cross(sp, omega)
    sxw = _cross(sigma, omega)
    sxp = _cross(sigma, sp)
    sdw = float(sigma @ omega)
    sdp = float(sigma @ sp)
    return (sv
            + w1 * sxv
            + w2 * _cross(sigma, sxv)
            + (0.5 - w1 - s2 * (0.5 * w2 - f5 * w1)) * pxw
            + (f5 + 0.5 * w1 - 2.0 * w2 + s2 * w3 * (1.0 - s2 * w2)) * _cross(sigma, pxw)
            + (f5 - 0.5 * w1 + w2 - s2 * f5 * w2) * _cross(sp, sxw)
            + ((0.5 * w2 - 2.0 * f5 * w1 - s2 * w1 * w3) * sdp) * sxw
            + ((2.0 * f5 * w1 + w4) * sdw) * sxp
            + ((w5 + f5 * w2 + w3 - s2 * w3 * w2) * sdw) * _cross(sigma, sxp))


# ---------------------------------------------------------------------------
# Public rate-equation surface.
# ---------------------------------------------------------------------------

def ptv_rate_thrust(sigma: np.ndarray, sp: TranslationVector, omega: np.ndarray,
                    thrust_velocity: np.ndarray) -> np.ndarray:
    """New-PTV rate with the body-frame thrust velocity as input."""
    sigma = np.asarray(sigma, dtype=float)
    s = float(np.linalg.norm(sigma))
    coeffs.check_sigma_mag(s)
    f5 = coeffs.eval_f5(s)
    w3, _, _ = coeffs.eval_w345(s)
    return _ptv_rate_thrust(sigma, sp.require(Kind.NEW_PTV), np.asarray(omega, float),
                            np.asarray(thrust_velocity, float), f5, w3)


def ptv_rate_vtv(sigma: np.ndarray, sp: TranslationVector, omega: np.ndarray,
                 sv: TranslationVector) -> np.ndarray:
    """New-PTV rate with the velocity translation vector as input."""
    sigma = np.asarray(sigma, dtype=float)
    s = float(np.linalg.norm(sigma))
    coeffs.check_sigma_mag(s)
    f5 = coeffs.eval_f5(s)
    w3, _, _ = coeffs.eval_w345(s)
    return _ptv_rate_vtv(sigma, sp.require(Kind.NEW_PTV), np.asarray(omega, float),
                         sv.require(Kind.VTV), f5, w3)


def savage_rate_vtv(sigma: np.ndarray, zeta: TranslationVector, omega: np.ndarray,
                    sv: TranslationVector) -> np.ndarray:
    """Savage-PTV rate with the velocity translation vector as input."""
    sigma = np.asarray(sigma, dtype=float)
    s = float(np.linalg.norm(sigma))
    coeffs.check_sigma_mag(s)
    c = coeffs.CoeffSet.at(s)
    return _savage_rate_vtv(sigma, s * s, zeta.require(Kind.SAVAGE_PTV),
                            np.asarray(omega, float), sv.require(Kind.VTV), c)


# ---------------------------------------------------------------------------
# Inputs.
# ---------------------------------------------------------------------------

class SampledInputs:
    """Time-sampled (omega, sv) inputs with cubic Hermite interpolation.

    Slopes are central finite differences (one-sided at the ends).  The
    sample rate must be at least twice the integrator step rate.
    """

    def __init__(self, t: np.ndarray, omega: np.ndarray, sv: np.ndarray):
        self.t = np.asarray(t, dtype=float)
        self.omega = np.asarray(omega, dtype=float)
        self.sv = np.asarray(sv, dtype=float)
        if self.t.ndim != 1 or len(self.t) < 3:
            raise ValueError("need at least 3 samples")
        if self.omega.shape != (len(self.t), 3) or self.sv.shape != (len(self.t), 3):
            raise ValueError("omega/sv must be (N, 3) matching t")
        dt = np.diff(self.t)
        if np.any(dt <= 0):
            raise ValueError("sample times must be strictly increasing")
        self._omega_slope = np.gradient(self.omega, self.t, axis=0)
        self._sv_slope = np.gradient(self.sv, self.t, axis=0)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    def _hermite(self, y, m, t: float):
        k = int(np.searchsorted(self.t, t, side="right")) - 1
        k = min(max(k, 0), len(self.t) - 2)
        h = self.t[k + 1] - self.t[k]
        x = (t - self.t[k]) / h
        h00 = (1 + 2 * x) * (1 - x) ** 2
        h10 = x * (1 - x) ** 2
        h01 = x * x * (3 - 2 * x)
        h11 = x * x * (x - 1)
        return h00 * y[k] + h10 * h * m[k] + h01 * y[k + 1] + h11 * h * m[k + 1]

    def __call__(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        return self._hermite(self.omega, self._omega_slope, t), \
            self._hermite(self.sv, self._sv_slope, t)


@dataclass
class Trajectory:
    """Recorded output of an integration run."""

    t: np.ndarray
    sigma: np.ndarray                       # (N, 3) reference rotation vector
    interval_velocity: np.ndarray | None    # (N, 3) co-integrated reference
    double_integral: np.ndarray | None      # (N, 3) co-integrated reference
    states: dict[Formulation, np.ndarray]   # formulation -> (N, 3)

    def terminal(self, formulation: Formulation) -> np.ndarray:
        return self.states[formulation][-1]

    def terminal_state(self, formulation: Formulation) -> KinematicState:
        x = self.states[formulation][-1]
        if formulation is Formulation.SAVAGE:
            return KinematicState(float(self.t[-1]), self.sigma[-1], zeta=x)
        if formulation is Formulation.BORTZ:
            return KinematicState(float(self.t[-1]), self.sigma[-1])
        return KinematicState(float(self.t[-1]), self.sigma[-1], sp=x)


def integrate_profile(profile: MotionProfile, formulations: list[Formulation],
                      t1: float, steps: int, record_every: int | None = None) -> Trajectory:
    """Fixed-step RK4 over [0, t1] driven by an analytic profile.

    The rotation vector is propagated by the Bortz equation; the reference
    velocity/position chain rides along in the same state vector, and every
    formulation's input (thrust velocity or VTV) is derived from it at each
    stage.  Aborts with DomainError if sigma leaves its domain mid-run; the
    exception carries the trajectory recorded so far in ``partial``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if record_every is None:
        record_every = max(1, steps // 200)
    if steps % record_every != 0:
        raise ValueError("record_every must divide steps")
    forms = list(dict.fromkeys(formulations))
    trans_forms = [f for f in forms if f is not Formulation.BORTZ]

    h = t1 / steps
    nt = len(trans_forms)
    # state: [sigma(3), v(3), p(3), x_0(3), ..., x_{nt-1}(3)]
    y = np.zeros(9 + 3 * nt)

    def deriv(tau: float, y_: np.ndarray) -> np.ndarray:
        sigma = y_[0:3]
        v = y_[3:6]
        s = math.sqrt(float(sigma @ sigma))
        if s >= SIGMA_MAX:
            raise DomainError(f"sigma magnitude {s} left domain at t={tau}")
        omega, fb = profile.evaluate(tau)
        c = coeffs.CoeffSet.at(s)
        out = np.empty_like(y_)
        out[0:3] = _bortz(sigma, omega, c.f5)
        # v_dot = R(sigma) f_b, R = I + b1 S + a1 S^2
        out[3:6] = _apply_operator(sigma, c.b1, c.a1, fb)
        out[6:9] = v
        if nt:
            s2 = s * s
            tv = _apply_operator(sigma, -c.b1, c.a1, v)       # R^T v
            sv = _apply_operator_inverse(sigma, s2, -c.a1, c.a2, tv)
            for i, f in enumerate(trans_forms):
                x = y_[9 + 3 * i: 12 + 3 * i]
                if f is Formulation.PTV_THRUST:
                    d = _ptv_rate_thrust(sigma, x, omega, tv, c.f5, c.w3)
                elif f is Formulation.PTV_VTV:
                    d = _ptv_rate_vtv(sigma, x, omega, sv, c.f5, c.w3)
                else:
                    d = _savage_rate_vtv(sigma, s2, x, omega, sv, c)
                out[9 + 3 * i: 12 + 3 * i] = d
        return out

    rec_t = [0.0]
    rec = [y.copy()]
    t = 0.0
    try:
        for i in range(steps):
            k1 = deriv(t, y)
            k2 = deriv(t + h / 2, y + h / 2 * k1)
            k3 = deriv(t + h / 2, y + h / 2 * k2)
            k4 = deriv(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t = (i + 1) * h
            s = float(np.linalg.norm(y[0:3]))
            if s >= SIGMA_MAX:
                raise DomainError(f"sigma magnitude {s} left domain at t={t}")
            if (i + 1) % record_every == 0:
                rec_t.append(t)
                rec.append(y.copy())
    except DomainError as exc:
        exc.partial = _pack(rec_t, rec, trans_forms, forms, with_reference=True)
        raise
    return _pack(rec_t, rec, trans_forms, forms, with_reference=True)


def integrate_sampled(inputs: SampledInputs, formulations: list[Formulation],
                      t0: float, t1: float, steps: int,
                      record_every: int | None = None) -> Trajectory:
    """Fixed-step RK4 driven by sampled (omega, sv) inputs.

    Only the VTV-driven formulations are available here.  Requires the input
    sample rate to be at least twice the step rate.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    lo, hi = inputs.span
    if t0 < lo or t1 > hi or t1 <= t0:
        raise ValueError("integration window outside the sampled span")
    sample_rate = (len(inputs.t) - 1) / (hi - lo)
    step_rate = steps / (t1 - t0)
    if sample_rate < 2.0 * step_rate:
        raise ValueError("sample rate must be >= 2x the integrator step rate")
    forms = list(dict.fromkeys(formulations))
    if Formulation.PTV_THRUST in forms:
        raise ValueError("thrust-velocity formulation needs an analytic profile")
    if record_every is None:
        record_every = max(1, steps // 200)
    if steps % record_every != 0:
        raise ValueError("record_every must divide steps")
    trans_forms = [f for f in forms if f is not Formulation.BORTZ]

    h = (t1 - t0) / steps
    nt = len(trans_forms)
    y = np.zeros(3 + 3 * nt)

    def deriv(tau: float, y_: np.ndarray) -> np.ndarray:
        sigma = y_[0:3]
        s = math.sqrt(float(sigma @ sigma))
        if s >= SIGMA_MAX:
            raise DomainError(f"sigma magnitude {s} left domain at t={tau}")
        omega, sv = inputs(tau)
        c = coeffs.CoeffSet.at(s)
        out = np.empty_like(y_)
        out[0:3] = _bortz(sigma, omega, c.f5)
        for i, f in enumerate(trans_forms):
            x = y_[3 + 3 * i: 6 + 3 * i]
            if f is Formulation.PTV_VTV:
                d = _ptv_rate_vtv(sigma, x, omega, sv, c.f5, c.w3)
            else:
                d = _savage_rate_vtv(sigma, s * s, x, omega, sv, c)
            out[3 + 3 * i: 6 + 3 * i] = d
        return out

    rec_t = [t0]
    rec = [y.copy()]
    t = t0
    for i in range(steps):
        k1 = deriv(t, y)
        k2 = deriv(t + h / 2, y + h / 2 * k1)
        k3 = deriv(t + h / 2, y + h / 2 * k2)
        k4 = deriv(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + (i + 1) * h
        if float(np.linalg.norm(y[0:3])) >= SIGMA_MAX:
            raise DomainError(f"sigma magnitude left domain at t={t}")
        if (i + 1) % record_every == 0:
            rec_t.append(t)
            rec.append(y.copy())
    return _pack(rec_t, rec, trans_forms, forms, with_reference=False)


def _pack(rec_t, rec, trans_forms, forms, with_reference: bool) -> Trajectory:
    arr = np.array(rec)
    base = 9 if with_reference else 3
    states = {}
    for i, f in enumerate(trans_forms):
        states[f] = arr[:, base + 3 * i: base + 3 * i + 3]
    if Formulation.BORTZ in forms:
        states[Formulation.BORTZ] = arr[:, 0:3]
    return Trajectory(
        t=np.array(rec_t),
        sigma=arr[:, 0:3],
        interval_velocity=arr[:, 3:6] if with_reference else None,
        double_integral=arr[:, 6:9] if with_reference else None,
        states=states,
    )


def rk4_integrate(formulation: Formulation, inputs, t0: float, t1: float,
                  steps: int, record_every: int | None = None) -> Trajectory:
    """Single-formulation convenience wrapper.

    ``inputs`` is either an analytic MotionProfile (t0 must be 0) or a
    SampledInputs instance.
    """
    if isinstance(inputs, SampledInputs):
        return integrate_sampled(inputs, [formulation], t0, t1, steps, record_every)
    if t0 != 0.0:
        raise ValueError("profile-driven integration starts at t0 = 0")
    return integrate_profile(inputs, [formulation], t1, steps, record_every)
