"""Service layer: executes simulate / sweep / check requests.

Shared by the FastAPI endpoints and the CLI so both surfaces produce
byte-identical artifacts for identical requests.
"""

from __future__ import annotations

import json
import math
import time

import numpy as np

from . import coeffs, oracle, transvec
from .dynamics import Formulation, integrate_profile
from .api import models

_CSV_HEADER = ("t,sigma_x,sigma_y,sigma_z,sp_x,sp_y,sp_z,zeta_x,zeta_y,zeta_z,"
               "oracle_sp_x,oracle_sp_y,oracle_sp_z,"
               "oracle_dint_x,oracle_dint_y,oracle_dint_z,err_sp,err_zeta_map")

# Errors below this are round-off floor; convergence order is not estimable.
FLOOR = 1e-13


def build_profile(cfg: models.ProfileConfig) -> oracle.MotionProfile:
    if cfg.kind == "constant":
        return oracle.ConstantProfile(omega0=cfg.omega0, f0=cfg.f0)
    if cfg.kind == "coning":
        return oracle.ConingProfile(alpha=cfg.alpha, freq=cfg.freq, f0=cfg.f0,
                                    thrust_freq=cfg.thrust_freq)
    return oracle.PolySinusoidProfile(
        omega_poly=tuple(tuple(p) for p in cfg.omega_poly),
        omega_sin=tuple(tuple(s) for s in cfg.omega_sin),
        force_poly=tuple(tuple(p) for p in cfg.force_poly),
        force_sin=tuple(tuple(s) for s in cfg.force_sin),
    )


def _fmt(x: float) -> str:
    return "%.17g" % x


def _nan3() -> np.ndarray:
    return np.full(3, math.nan)


def _terminal_errors(traj, gt) -> tuple[dict[str, np.ndarray], dict[str, float]]:
    """Per-formulation terminal reference and absolute error."""
    refs: dict[str, np.ndarray] = {}
    errs: dict[str, float] = {}
    zeta_ref = transvec.new_ptv_to_savage(
        gt.sigma[-1], transvec.new_ptv(gt.sp[-1])).value
    for form, states in traj.states.items():
        if form is Formulation.BORTZ:
            continue
        ref = zeta_ref if form is Formulation.SAVAGE else gt.sp[-1]
        refs[form.value] = ref
        errs[form.value] = float(np.linalg.norm(states[-1] - ref))
    return refs, errs


def run_simulate(cfg: models.ScenarioConfig) -> models.SimulateResponse:
    t_start = time.perf_counter()
    profile = build_profile(cfg.profile)
    gt = oracle.generate_ground_truth(profile, cfg.t1, cfg.coarse_samples,
                                      cfg.refine_factor)
    forms = [Formulation(name) for name in cfg.formulations]
    traj = integrate_profile(profile, forms, cfg.t1, cfg.steps,
                             record_every=cfg.steps // cfg.coarse_samples)

    sp_form = next((f for f in (Formulation.PTV_VTV, Formulation.PTV_THRUST)
                    if f in traj.states), None)
    zeta_col = traj.states.get(Formulation.SAVAGE)
    sp_col = traj.states[sp_form] if sp_form else None

    lines = [_CSV_HEADER]
    for k in range(len(traj.t)):
        sp_k = sp_col[k] if sp_col is not None else _nan3()
        zeta_k = zeta_col[k] if zeta_col is not None else _nan3()
        zeta_ref_k = transvec.new_ptv_to_savage(
            gt.sigma[k], transvec.new_ptv(gt.sp[k])).value
        err_sp = float(np.linalg.norm(sp_k - gt.sp[k]))
        err_zeta = float(np.linalg.norm(zeta_k - zeta_ref_k))
        row = [traj.t[k], *traj.sigma[k], *sp_k, *zeta_k, *gt.sp[k],
               *gt.double_integral[k], err_sp, err_zeta]
        lines.append(",".join(_fmt(float(x)) for x in row))
    csv_text = "\n".join(lines) + "\n"

    refs, errs = _terminal_errors(traj, gt)
    tol = cfg.tolerances
    terminal = {}
    all_passed = True
    for name, abs_err in errs.items():
        ref_norm = float(np.linalg.norm(refs[name]))
        rel = abs_err / ref_norm if ref_norm > 0 else math.inf
        ok = abs_err <= tol.terminal_abs or rel <= tol.terminal_rel
        all_passed &= ok
        terminal[name] = models.TerminalError(absolute=abs_err, relative=rel, passed=ok)

    pairwise = {}
    names = [f for f in traj.states if f is not Formulation.BORTZ]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            xa, xb = traj.states[a][-1], traj.states[b][-1]
            if (a is Formulation.SAVAGE) != (b is Formulation.SAVAGE):
                # compare in Savage-PTV terms via the mapping
                if a is Formulation.SAVAGE:
                    xb = transvec.new_ptv_to_savage(traj.sigma[-1], transvec.new_ptv(xb)).value
                else:
                    xa = transvec.new_ptv_to_savage(traj.sigma[-1], transvec.new_ptv(xa)).value
            pairwise[f"{a.value}|{b.value}"] = float(np.linalg.norm(xa - xb))

    report = models.ComparisonReport(scenario=cfg, terminal_errors=terminal,
                                     pairwise_terminal_diff=pairwise, passed=all_passed)
    return models.SimulateResponse(report=report, trajectory_csv=csv_text,
                                   wall_clock_s=time.perf_counter() - t_start)


def run_sweep(req: models.SweepRequest) -> models.SweepResponse:
    t_start = time.perf_counter()
    cfg = req.scenario
    profile = build_profile(cfg.profile)
    gt = oracle.generate_ground_truth(profile, cfg.t1, cfg.coarse_samples,
                                      cfg.refine_factor)
    forms = [Formulation(name) for name in cfg.formulations]

    rows = []
    series: dict[str, list[float]] = {name: [] for name in cfg.formulations}
    for steps in req.step_counts:
        traj = integrate_profile(profile, forms, cfg.t1, steps, record_every=steps)
        _, errs = _terminal_errors(traj, gt)
        rows.append(models.SweepRow(steps=steps, terminal_error=errs))
        for name, e in errs.items():
            series[name].append(e)

    log_h = np.log([cfg.t1 / n for n in req.step_counts])
    orders: dict[str, float | None] = {}
    at_floor: dict[str, bool] = {}
    flagged: dict[str, bool] = {}
    for name, errors in series.items():
        floor = all(e < FLOOR for e in errors)
        at_floor[name] = floor
        if floor:
            orders[name] = None
            flagged[name] = False
            continue
        # Points within a decade of the round-off floor flatten the
        # log-log fit; drop them from the tail if enough clean points remain.
        errs = np.asarray(errors)
        keep = errs >= 10.0 * FLOOR
        if np.count_nonzero(keep) >= 3:
            lh, le = log_h[keep], np.log(errs[keep])
        else:
            lh, le = log_h, np.log(np.maximum(errs, 1e-300))
        slope = float(np.polyfit(lh, le, 1)[0])
        orders[name] = slope
        flagged[name] = slope < 3.5

    report = models.SweepReport(scenario=cfg, step_counts=list(req.step_counts),
                                rows=rows, estimated_order=orders, at_floor=at_floor,
                                flagged_low_order=flagged,
                                passed=not any(flagged.values()))
    return models.SweepResponse(report=report, wall_clock_s=time.perf_counter() - t_start)


# ---------------------------------------------------------------------------
# Identity / property check suite.
# ---------------------------------------------------------------------------

def _batch_cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.cross(a, b)


def _sample_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _check_triple_products(rng, n) -> float:
    if n == 1:
        sg = np.zeros((1, 3))
    else:
        sg = rng.uniform(-10, 10, (n, 3))
    p = rng.uniform(-10, 10, (n, 3))
    w = rng.uniform(-10, 10, (n, 3))
    s2 = np.sum(sg * sg, axis=1, keepdims=True)
    sw = np.sum(sg * w, axis=1, keepdims=True)
    sp = np.sum(sg * p, axis=1, keepdims=True)
    pxw = _batch_cross(p, w)
    sxw = _batch_cross(sg, w)
    sxp = _batch_cross(sg, p)
    psxw = np.sum(p * sxw, axis=1, keepdims=True)
    pairs = [
        (_batch_cross(sg, _batch_cross(sg, pxw)), sw * sxp - sp * sxw),
        (_batch_cross(w, sxp), _batch_cross(p, sxw) - _batch_cross(sg, pxw)),
        (psxw * sg, _batch_cross(p, _batch_cross(sg, sxw)) + sp * sxw),
        (psxw * sg, sw * _batch_cross(p, sg) - s2 * pxw + sp * sxw),
        (_batch_cross(_batch_cross(sg, sxw), sxp),
         sw * _batch_cross(sg, sxp) - s2 * _batch_cross(w, sxp)),
        (sp * _batch_cross(sg, sxw),
         sw * _batch_cross(sg, sxp) + s2 * _batch_cross(sg, pxw)),
    ]
    ns = np.linalg.norm(sg, axis=1)
    npw = np.linalg.norm(p, axis=1) * np.linalg.norm(w, axis=1)
    degrees = [2, 1, 2, 2, 3, 3]
    worst = 0.0
    for (lhs, rhs), d in zip(pairs, degrees):
        norm = 1.0 + ns ** d * npw
        worst = max(worst, float(np.max(np.max(np.abs(lhs - rhs), axis=1) / norm)))
    return worst


def _check_cross_matrix(rng, n) -> float:
    if n == 1:
        sg = np.zeros((1, 3))
    else:
        sg = _sample_directions(rng, n) * rng.uniform(0.0, 3.0, (n, 1))
    v = _sample_directions(rng, n) * rng.uniform(0.0, 10.0, (n, 1))
    s = np.linalg.norm(sg, axis=1)
    a1, a2, b1 = coeffs.matrix_coeffs_array(s)
    a1, a2, b1 = a1[:, None], a2[:, None], b1[:, None]
    sxv = _batch_cross(sg, v)
    sxsxv = _batch_cross(sg, sxv)
    tv = v - a1 * sxv + a2 * sxsxv
    lhs1 = _batch_cross(sg, tv)
    rhs1 = b1 * sxv - a1 * sxsxv
    lhs2 = _batch_cross(sg, lhs1)
    rhs2 = (1.0 - np.cos(s))[:, None] * sxv + b1 * sxsxv
    return float(max(np.max(np.abs(lhs1 - rhs1)), np.max(np.abs(lhs2 - rhs2))))


def _batch_operator(sg: np.ndarray, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    n = len(sg)
    S = np.zeros((n, 3, 3))
    S[:, 0, 1] = -sg[:, 2]
    S[:, 0, 2] = sg[:, 1]
    S[:, 1, 0] = sg[:, 2]
    S[:, 1, 2] = -sg[:, 0]
    S[:, 2, 0] = -sg[:, 1]
    S[:, 2, 1] = sg[:, 0]
    return (np.eye(3)[None] + alpha[:, None, None] * S
            + beta[:, None, None] * (S @ S))


def _check_roundtrips(rng, n) -> tuple[float, float, float]:
    if n == 1:
        sg = np.zeros((1, 3))
    else:
        sg = _sample_directions(rng, n) * rng.uniform(0.0, 3.0, (n, 1))
    x = _sample_directions(rng, n) * rng.uniform(0.0, 10.0, (n, 1))
    s = np.linalg.norm(sg, axis=1)
    a1, a2, _ = coeffs.matrix_coeffs_array(s)
    w12 = np.array([coeffs.eval_w12(float(si)) for si in s])
    m_int = _batch_operator(sg, a1, a2)
    m_sav = _batch_operator(sg, w12[:, 0], w12[:, 1])

    dint = np.einsum("nij,nj->ni", m_int, x)
    back = np.linalg.solve(m_int, dint[..., None])[..., 0]
    r_int = float(np.max(np.abs(back - x)))

    zeta = np.einsum("nij,nj->ni", m_sav, x)
    back = np.linalg.solve(m_sav, zeta[..., None])[..., 0]
    r_sav = float(np.max(np.abs(back - x)))

    # S and S^2 annihilate along sigma, so the sigma-component is preserved
    r_axis = float(max(np.max(np.abs(np.sum(sg * dint, axis=1) - np.sum(sg * x, axis=1))),
                       np.max(np.abs(np.sum(sg * zeta, axis=1) - np.sum(sg * x, axis=1)))))
    return r_int, r_sav, r_axis


def _check_branch_continuity() -> float:
    worst = 0.0
    for thr in (1e-4, 1e-3, 1e-2):
        lo, hi = thr / 2, thr * 2  # series below, closed form above
        vals_series = (coeffs.eval_f5(thr, hi), *coeffs.eval_w12(thr, hi),
                       *coeffs.eval_w345(thr, hi), *coeffs.eval_matrix_coeffs(thr, hi))
        vals_closed = (coeffs.eval_f5(thr, lo), *coeffs.eval_w12(thr, lo),
                       *coeffs.eval_w345(thr, lo), *coeffs.eval_matrix_coeffs(thr, lo))
        worst = max(worst, max(abs(a - b) for a, b in zip(vals_series, vals_closed)))
    return worst


def _check_small_angle_maps() -> float:
    sg = np.array([1e-8, 0.0, 0.0])
    worst = 0.0
    for mat in (transvec.body_map_matrix(sg), transvec.interval_map_matrix(sg),
                transvec.savage_map_matrix(sg)):
        worst = max(worst, float(np.linalg.norm(mat - np.eye(3), 2)))
    return worst


_CHECK_TOLERANCES = {
    "triple_product_identities": 1e-12,
    "cross_matrix_identities": 1e-13,
    "double_integral_roundtrip": 1e-12,
    "savage_map_roundtrip": 1e-12,
    "sigma_component_preservation": 1e-13,
    "coefficient_branch_continuity": 1e-13,
    "small_angle_map_limit": 1e-7,
}


def run_check(req: models.CheckRequest) -> models.CheckResponse:
    t_start = time.perf_counter()
    rng = np.random.default_rng(req.seed)
    r_int, r_sav, r_axis = _check_roundtrips(rng, min(req.samples, 100000))
    residuals = {
        "triple_product_identities": _check_triple_products(rng, req.samples),
        "cross_matrix_identities": _check_cross_matrix(rng, req.samples),
        "double_integral_roundtrip": r_int,
        "savage_map_roundtrip": r_sav,
        "sigma_component_preservation": r_axis,
        "coefficient_branch_continuity": _check_branch_continuity(),
        "small_angle_map_limit": _check_small_angle_maps(),
    }
    items = []
    for name, residual in residuals.items():
        tol = req.tolerance if req.tolerance is not None else _CHECK_TOLERANCES[name]
        items.append(models.CheckItem(name=name, max_residual=residual,
                                      tolerance=tol, passed=residual <= tol))
    report = models.CheckReport(seed=req.seed, samples=req.samples, items=items,
                                passed=all(i.passed for i in items))
    return models.CheckResponse(report=report, wall_clock_s=time.perf_counter() - t_start)


# ---------------------------------------------------------------------------
# Canonical serialization (deterministic on-disk artifacts).
# ---------------------------------------------------------------------------

def canonical_report_json(report) -> str:
    """Stable JSON rendering; excludes volatile fields like wall-clock."""
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def sweep_csv(report: models.SweepReport) -> str:
    names = list(report.scenario.formulations)
    lines = ["steps," + ",".join(f"err_{n}" for n in names)]
    for row in report.rows:
        lines.append(",".join([str(row.steps)] + [_fmt(row.terminal_error[n]) for n in names]))
    return "\n".join(lines) + "\n"
