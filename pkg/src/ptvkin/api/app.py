"""FastAPI service wrapping the simulation and check runners."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import runner
from ..errors import ConvergenceError, DomainError
from . import models


def create_app() -> FastAPI:
    app = FastAPI(title="ptvkin", version="0.1.0",
                  description="Position translation vector kinematics service")

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError):
        return JSONResponse(status_code=409,
                            content={"error": "domain_violation", "detail": str(exc)})

    @app.exception_handler(ConvergenceError)
    async def _convergence_error(request: Request, exc: ConvergenceError):
        return JSONResponse(status_code=409,
                            content={"error": "oracle_convergence", "detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/simulate", response_model=models.SimulateResponse)
    def simulate(cfg: models.ScenarioConfig) -> models.SimulateResponse:
        return runner.run_simulate(cfg)

    @app.post("/sweep", response_model=models.SweepResponse)
    def sweep(req: models.SweepRequest) -> models.SweepResponse:
        return runner.run_sweep(req)

    @app.post("/check", response_model=models.CheckResponse)
    def check(req: models.CheckRequest) -> models.CheckResponse:
        return runner.run_check(req)

    return app


app = create_app()
