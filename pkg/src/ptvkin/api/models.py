"""Pydantic request/response models shared by the HTTP service and the CLI.

The scenario configuration doubles as the on-disk JSON config format; unknown
keys are rejected everywhere so a typo in a config file fails loudly.
"""

from __future__ import annotations

import math
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

Vec3 = tuple[float, float, float]

FORMULATION_NAMES = ("ptv_thrust", "ptv_vtv", "savage")
FormulationName = Literal["ptv_thrust", "ptv_vtv", "savage"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ConstantProfileConfig(_Strict):
    kind: Literal["constant"] = "constant"
    omega0: Vec3 = (0.0, 0.0, 0.0)
    f0: Vec3 = (0.0, 0.0, 0.0)


class ConingProfileConfig(_Strict):
    kind: Literal["coning"] = "coning"
    alpha: float = 0.01
    freq: float = 2.0 * math.pi
    f0: Vec3 = (0.0, 0.0, 9.8)
    thrust_freq: float = math.pi


class PolySinusoidProfileConfig(_Strict):
    kind: Literal["poly_sinusoid"] = "poly_sinusoid"
    omega_poly: tuple[list[float], list[float], list[float]] = ([0.0], [0.0], [0.0])
    omega_sin: tuple[Vec3, Vec3, Vec3] = ((0.0, 0.0, 0.0),) * 3
    force_poly: tuple[list[float], list[float], list[float]] = ([0.0], [0.0], [0.0])
    force_sin: tuple[Vec3, Vec3, Vec3] = ((0.0, 0.0, 0.0),) * 3


ProfileConfig = Annotated[
    Union[ConstantProfileConfig, ConingProfileConfig, PolySinusoidProfileConfig],
    Field(discriminator="kind"),
]


class Tolerances(_Strict):
    """Terminal-error bounds checked by the simulate command.

    A formulation passes if its terminal error is below ``terminal_abs``
    absolutely or below ``terminal_rel`` relative to the reference magnitude.
    """

    terminal_rel: float = 1e-9
    terminal_abs: float = 1e-12


class ScenarioConfig(_Strict):
    profile: ProfileConfig
    t1: float = Field(default=1.0, gt=0)
    steps: int = Field(default=10000, ge=1)
    formulations: list[FormulationName] = ["ptv_vtv", "savage"]
    refine_factor: int = Field(default=32, ge=8)
    coarse_samples: int = Field(default=50, ge=1)
    output_dir: str | None = None
    tolerances: Tolerances = Tolerances()

    @field_validator("formulations")
    @classmethod
    def _non_empty_unique(cls, v):
        if not v:
            raise ValueError("at least one formulation required")
        if len(set(v)) != len(v):
            raise ValueError("duplicate formulations")
        return v

    def model_post_init(self, __context):
        if self.steps % self.coarse_samples != 0:
            raise ValueError("steps must be a multiple of coarse_samples "
                             "(trajectory rows align with the oracle grid)")


class TerminalError(_Strict):
    absolute: float
    relative: float
    passed: bool


class ComparisonReport(_Strict):
    scenario: ScenarioConfig
    terminal_errors: dict[str, TerminalError]
    pairwise_terminal_diff: dict[str, float]
    passed: bool


class SimulateResponse(_Strict):
    report: ComparisonReport
    trajectory_csv: str
    wall_clock_s: float


class SweepRequest(_Strict):
    scenario: ScenarioConfig
    step_counts: list[int] = Field(min_length=3)

    @field_validator("step_counts")
    @classmethod
    def _doubling(cls, v):
        for a, b in zip(v, v[1:]):
            if b < 2 * a:
                raise ValueError("each step count must be at least 2x the previous")
        return v


class SweepRow(_Strict):
    steps: int
    terminal_error: dict[str, float]


class SweepReport(_Strict):
    scenario: ScenarioConfig
    step_counts: list[int]
    rows: list[SweepRow]
    # least-squares slope of log(error) vs log(h); None when at the
    # round-off floor (all errors < 1e-13)
    estimated_order: dict[str, float | None]
    at_floor: dict[str, bool]
    flagged_low_order: dict[str, bool]
    passed: bool


class SweepResponse(_Strict):
    report: SweepReport
    wall_clock_s: float


class CheckRequest(_Strict):
    seed: int = 42
    samples: int = Field(default=10000, ge=1)
    tolerance: float | None = None  # overrides every per-check tolerance


class CheckItem(_Strict):
    name: str
    max_residual: float
    tolerance: float
    passed: bool


class CheckReport(_Strict):
    seed: int
    samples: int
    items: list[CheckItem]
    passed: bool


class CheckResponse(_Strict):
    report: CheckReport
    wall_clock_s: float
