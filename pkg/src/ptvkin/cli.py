"""Command-line client for the simulation service.

The CLI is a thin wrapper: it parses a JSON scenario config into the shared
pydantic models, executes the request either in-process or against a running
HTTP service (``--server``), and writes the CSV/JSON artifacts.

Exit codes: 0 success, 1 tolerance failure, 2 config/usage error,
3 rotation-vector domain violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from pydantic import ValidationError

from .api import models
from .errors import ConvergenceError, DomainError

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

OUTPUT_DIR_ENV = "PTVKIN_OUTPUT_DIR"


class _ConfigError(Exception):
    pass


def _load_config(path: str) -> models.ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _ConfigError(f"{path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return models.ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        msgs = [f"{path}: {'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
                for err in exc.errors()]
        raise _ConfigError("\n".join(msgs)) from exc


def _output_dir(args, cfg: models.ScenarioConfig | None) -> Path:
    if args.out:
        d = Path(args.out)
    elif os.environ.get(OUTPUT_DIR_ENV):
        d = Path(os.environ[OUTPUT_DIR_ENV])
    elif cfg is not None and cfg.output_dir:
        d = Path(cfg.output_dir)
    else:
        d = Path.cwd()
    d.mkdir(parents=True, exist_ok=True)
    return d


def _post(server: str, endpoint: str, payload: dict, response_model):
    import httpx

    resp = httpx.post(server.rstrip("/") + endpoint, json=payload, timeout=600.0)
    if resp.status_code == 409:
        raise DomainError(resp.json().get("detail", "domain violation"))
    if resp.status_code >= 400:
        raise _ConfigError(f"server rejected request ({resp.status_code}): {resp.text}")
    return response_model.model_validate(resp.json())


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    from . import runner

    if args.server:
        out = _post(args.server, "/simulate", cfg.model_dump(mode="json"),
                    models.SimulateResponse)
    else:
        out = runner.run_simulate(cfg)
    outdir = _output_dir(args, cfg)
    (outdir / "trajectory.csv").write_text(out.trajectory_csv)
    (outdir / "report.json").write_text(runner.canonical_report_json(out.report))
    for name, err in out.report.terminal_errors.items():
        status = "pass" if err.passed else "FAIL"
        print(f"{name}: terminal abs={err.absolute:.3e} rel={err.relative:.3e} [{status}]")
    print(f"artifacts written to {outdir} ({out.wall_clock_s:.2f} s)", file=sys.stderr)
    return EXIT_OK if out.report.passed else EXIT_TOLERANCE


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    from . import runner

    try:
        steps = [int(s) for s in args.steps.split(",") if s.strip()]
        req = models.SweepRequest(scenario=cfg, step_counts=steps)
    except (ValueError, ValidationError) as exc:
        raise _ConfigError(f"--steps: {exc}") from exc
    if args.server:
        out = _post(args.server, "/sweep", req.model_dump(mode="json"),
                    models.SweepResponse)
    else:
        out = runner.run_sweep(req)
    outdir = _output_dir(args, cfg)
    (outdir / "sweep.csv").write_text(runner.sweep_csv(out.report))
    (outdir / "sweep_report.json").write_text(runner.canonical_report_json(out.report))
    for name, order in out.report.estimated_order.items():
        if out.report.at_floor[name]:
            print(f"{name}: errors at floor (< {runner.FLOOR:g}), order estimate: floor")
        else:
            flag = " [LOW ORDER]" if out.report.flagged_low_order[name] else ""
            print(f"{name}: estimated order {order:.2f}{flag}")
    print(f"artifacts written to {outdir} ({out.wall_clock_s:.2f} s)", file=sys.stderr)
    return EXIT_OK if out.report.passed else EXIT_TOLERANCE


def _cmd_check(args) -> int:
    from . import runner

    req = models.CheckRequest(seed=args.seed, samples=args.samples,
                              tolerance=args.tol)
    if args.server:
        out = _post(args.server, "/check", req.model_dump(mode="json"),
                    models.CheckResponse)
    else:
        out = runner.run_check(req)
    outdir = _output_dir(args, None)
    (outdir / "check_report.json").write_text(runner.canonical_report_json(out.report))
    for item in out.report.items:
        status = "pass" if item.passed else "FAIL"
        print(f"{item.name}: max residual {item.max_residual:.3e} "
              f"(tol {item.tolerance:g}) [{status}]")
    return EXIT_OK if out.report.passed else EXIT_TOLERANCE


def _cmd_serve(args) -> int:
    import uvicorn

    from .api.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptvkin",
                                     description="Position translation vector toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario against the oracle")
    p.add_argument("config", help="JSON scenario config")
    p.add_argument("--out", help="output directory")
    p.add_argument("--server", help="base URL of a running service")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="convergence-order study over step counts")
    p.add_argument("config", help="JSON scenario config")
    p.add_argument("--steps", required=True,
                   help="comma-separated step counts (>= 3, each >= 2x previous)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--server", help="base URL of a running service")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("check", help="run the algebraic identity suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--tol", type=float, default=None,
                   help="override every per-check tolerance")
    p.add_argument("--out", help="output directory")
    p.add_argument("--server", help="base URL of a running service")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching our config-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain violation: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"oracle convergence failure: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
