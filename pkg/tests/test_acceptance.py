"""Acceptance gate: end-to-end numerical criteria with time budgets.

Each test prints a single pass/fail line for its criterion. The heavy
simulation runs are shared across criteria through module-scoped fixtures.
"""

import math
import sys
import time

import numpy as np
import pytest

from ptvkin import coeffs, dynamics, oracle, runner, transvec
from ptvkin.dynamics import Formulation
from ptvkin.transvec import new_ptv, vtv


def _report(num, label, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num}] {label}: {status} {detail}".rstrip(),
          file=sys.stderr)
    assert ok, f"criterion {num} ({label}) failed: {detail}"


@pytest.fixture(scope="module")
def coning_run():
    """Standard coning scenario integrated with both PTV formulations."""
    profile = oracle.ConingProfile(alpha=0.01, freq=2 * math.pi,
                                   f0=(0.0, 0.0, 9.8), thrust_freq=math.pi)
    t0 = time.perf_counter()
    traj = dynamics.integrate_profile(profile,
                                      [Formulation.PTV_VTV, Formulation.SAVAGE],
                                      1.0, 10000)
    elapsed = time.perf_counter() - t0
    gt = oracle.generate_ground_truth(profile, 1.0, 50, 32)
    return traj, gt, elapsed


def test_criterion_1_rate_equivalence():
    rng = np.random.default_rng(20240601)
    n = 10000
    d = rng.normal(size=(n, 3))
    sg = d / np.linalg.norm(d, axis=1, keepdims=True) * rng.uniform(0, 3.0, (n, 1))
    sp = rng.normal(size=(n, 3)) * 4.0
    w = rng.normal(size=(n, 3)) * 2.0
    sv = rng.normal(size=(n, 3)) * 8.0

    t0 = time.perf_counter()
    worst = 0.0
    for k in range(n):
        tv = transvec.vtv_to_body_thrust_velocity(sg[k], vtv(sv[k]))
        r1 = dynamics.ptv_rate_thrust(sg[k], new_ptv(sp[k]), w[k], tv)
        r2 = dynamics.ptv_rate_vtv(sg[k], new_ptv(sp[k]), w[k], vtv(sv[k]))
        worst = max(worst, float(np.max(np.abs(r1 - r2)) / (1.0 + np.max(np.abs(r1)))))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 1.0
    _report(1, "rate-form equivalence on 10k random states", ok,
            f"(max residual {worst:.2e}, {elapsed:.2f} s)")


def test_criterion_2_savage_vs_mapped_ptv(coning_run):
    traj, _, elapsed = coning_run
    zeta = traj.terminal(Formulation.SAVAGE)
    sp = traj.terminal(Formulation.PTV_VTV)
    mapped = transvec.new_ptv_to_savage(traj.sigma[-1], new_ptv(sp)).value
    rel = float(np.linalg.norm(zeta - mapped) / np.linalg.norm(zeta))
    ok = rel < 1e-9 and elapsed < 5.0
    _report(2, "savage vs mapped new-PTV on coning scenario", ok,
            f"(rel diff {rel:.2e}, integration {elapsed:.2f} s)")


def test_criterion_3_double_integral_recovery(coning_run):
    traj, gt, _ = coning_run
    sp = traj.terminal(Formulation.PTV_VTV)
    dint = transvec.ptv_to_double_integral(traj.sigma[-1], new_ptv(sp))
    ref = gt.double_integral[-1]
    rel = float(np.linalg.norm(dint - ref) / np.linalg.norm(ref))
    ok = rel < 1e-9
    _report(3, "double integral recovered from integrated new-PTV", ok,
            f"(rel error {rel:.2e})")


def test_criterion_4_constant_rate_behavior():
    profile = oracle.ConstantProfile(omega0=(0.0, 0.0, 1.0), f0=(1.0, 0.0, 0.0))
    traj = dynamics.integrate_profile(profile,
                                      [Formulation.PTV_VTV, Formulation.SAVAGE],
                                      1.0, 10000)
    target = np.array([0.5, 0.0, 0.0])
    zeta = traj.terminal(Formulation.SAVAGE)
    sp = traj.terminal(Formulation.PTV_VTV)
    zeta_err = float(np.linalg.norm(zeta - target))
    sp_dev = float(np.linalg.norm(sp - target) / np.linalg.norm(target))
    # under constant rates the savage vector equals f t^2 / 2 exactly while
    # the new PTV deviates measurably from it
    ok = zeta_err < 1e-8 and sp_dev > 1e-3
    _report(4, "constant-rate split between savage and new PTV", ok,
            f"(|zeta - f t^2/2| = {zeta_err:.2e}, new-PTV rel dev {sp_dev:.2e})")


def test_criterion_5_vector_identities():
    rng = np.random.default_rng(987)
    n = 100000
    t0 = time.perf_counter()
    r_triple = runner._check_triple_products(rng, n)
    r_cross = runner._check_cross_matrix(rng, n)
    elapsed = time.perf_counter() - t0
    ok = r_triple < 1e-12 and r_cross < 1e-12 and elapsed < 2.0
    _report(5, "triple-product and cross-matrix identities on 100k samples", ok,
            f"(residuals {r_triple:.2e} / {r_cross:.2e}, {elapsed:.2f} s)")


def test_criterion_6_coefficient_limits_and_smoothness():
    limits = {
        "f5": (coeffs.eval_f5, 1 / 12),
        "w1": (lambda s: coeffs.eval_w12(s)[0], 1 / 6),
        "w2": (lambda s: coeffs.eval_w12(s)[1], 1 / 36),
        "w3": (lambda s: coeffs.eval_w345(s)[0], 1 / 360),
        "w4": (lambda s: coeffs.eval_w345(s)[1], -1 / 270),
        "w5": (lambda s: coeffs.eval_w345(s)[2], 1 / 3240),
    }
    limit_err = max(abs(fn(0.0) - ref) for fn, ref in limits.values())

    cont = runner._check_branch_continuity()

    # finite-difference check that the published derivative coefficients are
    # actual derivatives, with second-order convergence
    s0 = 0.9
    sg = np.array([s0, 0.0, 0.0])
    w = np.array([1.0, 0.0, 0.0])
    pred = coeffs.dw12_consistency(sg, w)
    order_ok = True
    for k in range(2):
        errs = []
        for h in (2e-3, 1e-3):
            fd = (coeffs.eval_w12(s0 + h)[k] - coeffs.eval_w12(s0 - h)[k]) / (2 * h)
            errs.append(abs(fd - pred[k]))
        if errs[0] > 1e-11:
            ratio = errs[1] / errs[0]
            order_ok = order_ok and 0.15 < ratio < 0.35
    ok = limit_err < 1e-15 and cont < 1e-13 and order_ok
    _report(6, "coefficient limits, branch continuity, derivative check", ok,
            f"(limit err {limit_err:.2e}, continuity {cont:.2e}, "
            f"FD order-2 {'ok' if order_ok else 'bad'})")


def test_criterion_7_integrator_order():
    # aggressive maneuver so truncation error dominates round-off
    profile = oracle.ConingProfile(alpha=1.0, freq=8 * math.pi,
                                   f0=(0.0, 0.0, 9.8), thrust_freq=math.pi)
    gt = oracle.generate_ground_truth(profile, 1.0, 50, 64)
    step_counts = [1250, 2500, 5000, 10000]
    orders = {}
    for form in (Formulation.PTV_VTV, Formulation.SAVAGE):
        errs = []
        for steps in step_counts:
            traj = dynamics.integrate_profile(profile, [form], 1.0, steps,
                                              record_every=steps)
            term = traj.terminal(form)
            if form is Formulation.SAVAGE:
                ref = transvec.new_ptv_to_savage(gt.sigma[-1],
                                                 new_ptv(gt.sp[-1])).value
            else:
                ref = gt.sp[-1]
            errs.append(float(np.linalg.norm(term - ref) / np.linalg.norm(ref)))
        errs = np.array(errs)
        keep = errs >= 10 * runner.FLOOR
        hs = np.array([1.0 / n for n in step_counts])
        slope = float(np.polyfit(np.log(hs[keep]), np.log(errs[keep]), 1)[0])
        orders[form.value] = slope
    ok = all(3.5 <= o <= 4.5 for o in orders.values())
    _report(7, "fourth-order convergence of the integrator", ok,
            f"(orders {', '.join(f'{k}={v:.2f}' for k, v in orders.items())})")


def test_criterion_8_map_roundtrips():
    rng = np.random.default_rng(31337)
    t0 = time.perf_counter()
    r_int, r_sav, r_axis = runner._check_roundtrips(rng, 10000)
    elapsed = time.perf_counter() - t0
    ok = r_int < 1e-12 and r_sav < 1e-12 and r_axis < 1e-13
    _report(8, "forward/inverse map roundtrips on 10k pairs", ok,
            f"(residuals {r_int:.2e} / {r_sav:.2e}, axis {r_axis:.2e}, "
            f"{elapsed:.2f} s)")
