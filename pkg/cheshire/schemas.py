import math
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from cheshire.constants import SCHEMA_VERSION
from cheshire.state import RotorFamily, RotorPacket, WallFamily, WallPacket

Unit = Literal["hbar", "p0-units", "probability", "dimensionless", "radians", "length"]
PostSelectSpin = Literal["up_x", "down_x"]
ReflectionMode = Literal["once_per_transit", "per_period"]


class Quantity(BaseModel):
    value: float
    unit: Unit


class Series(BaseModel):
    values: list[float]
    unit: Unit


def hbar(value: float) -> Quantity:
    return Quantity(value=value, unit="hbar")


def probability(value: float) -> Quantity:
    return Quantity(value=value, unit="probability")


def p0_units(value: float) -> Quantity:
    return Quantity(value=value, unit="p0-units")


def dimensionless(value: float) -> Quantity:
    return Quantity(value=value, unit="dimensionless")


# Experiment configuration

class RotorSpec(BaseModel):
    grid_size: int = 256
    delta_theta: float = 0.05
    family: RotorFamily = "gaussian"
    center: float = 0.0

    @field_validator("grid_size")
    @classmethod
    def power_of_two(cls, value: int) -> int:
        if value < 2 or value & (value - 1):
            raise ValueError(f"grid_size must be a power of two, got {value}")
        return value

    @field_validator("delta_theta")
    @classmethod
    def narrow_packet(cls, value: float) -> float:
        if not 0 < value <= math.pi / 8:
            raise ValueError(f"delta_theta must lie in (0, pi/8], got {value}")
        return value

    def build(self) -> RotorPacket:
        return RotorPacket.build(self.grid_size, self.delta_theta, self.family, self.center)


class WallSpec(BaseModel):
    grid_size: int = 1024
    delta_x: float = Field(default=1.0, gt=0)
    box_momentum: float = Field(default=0.0, ge=0)
    extent: Optional[float] = None
    family: WallFamily = "raised_cosine"

    @property
    def resolved_extent(self) -> float:
        return 8 * self.delta_x if self.extent is None else self.extent

    @model_validator(mode="after")
    def packet_fits(self) -> "WallSpec":
        if self.resolved_extent <= self.delta_x:
            raise ValueError("Wall grid extent must exceed delta_x")
        return self

    def build(self) -> WallPacket:
        return WallPacket.build(self.grid_size, self.delta_x, self.box_momentum, self.family, self.resolved_extent)


class ExperimentConfig(BaseModel):
    n_rounds: int = Field(default=100, ge=2)
    # Defaults to pi / (2N) when omitted.
    epsilon: Optional[float] = None
    rotor: RotorSpec = RotorSpec()
    wall_packet: Optional[WallSpec] = None
    postselect_spin: PostSelectSpin = "up_x"
    flux_wall_index: Optional[int] = None
    reflection_mode: ReflectionMode = "once_per_transit"
    ideal: bool = False

    @model_validator(mode="after")
    def resolve(self) -> "ExperimentConfig":
        if self.epsilon is None:
            self.epsilon = math.pi / (2 * self.n_rounds)
        if not 0 <= self.epsilon <= math.pi / 4:
            raise ValueError(f"epsilon must lie in [0, pi/4], got {self.epsilon}")
        if self.flux_wall_index is not None and not 1 <= self.flux_wall_index <= 2 * self.n_rounds:
            raise ValueError(f"flux_wall_index must lie in 1..{2 * self.n_rounds}")
        return self

    @property
    def survival_c(self) -> float:
        """c = cos^{2N}(epsilon), the Left amplitude of the up branch after 2N periods."""
        return math.cos(self.epsilon) ** (2 * self.n_rounds)

    @property
    def phase_budget(self) -> Optional[float]:
        if self.wall_packet is None:
            return None
        return 2 * self.n_rounds * self.wall_packet.box_momentum * self.wall_packet.delta_x


# Reports

class ShiftReport(BaseModel):
    kind: Literal["shift"] = "shift"
    postselect_spin: PostSelectSpin
    prob_left: Quantity
    prob_spin_given_left: Quantity
    lx_initial: Quantity
    lx_final: Quantity
    shift: Quantity
    expected_shift: Quantity
    deviation: Quantity
    predicted_bound: Quantity
    survival_c: Quantity
    edge_weight: Quantity
    config: ExperimentConfig


class BackwardReport(BaseModel):
    kind: Literal["backward"] = "backward"
    fidelity: Quantity
    lx_initial: Quantity
    lx_conditioned_initial: Quantity
    lx_difference: Quantity
    config: ExperimentConfig


class FluxProfile(BaseModel):
    kind: Literal["flux"] = "flux"
    n_rounds: int
    wall_indices: list[int]
    per_period: Series
    analytic: Series
    finite_epsilon: Series
    total: Quantity
    analytic_total: Quantity
    max_deviation: Quantity
    prob_left: Series
    prob_spin_given_left: Series
    config: ExperimentConfig

    @model_validator(mode="after")
    def consistent(self) -> "FluxProfile":
        if len(self.per_period.values) != len(self.wall_indices):
            raise ValueError("per_period and wall_indices differ in length")
        return self


class MomentumReport(BaseModel):
    kind: Literal["momentum"] = "momentum"
    reflection_count_mode: ReflectionMode
    p_transfer: Quantity
    p_transfer_analytic: Quantity
    residual: Quantity
    kappa: Quantity
    lx_shift: Quantity
    p_transfer_left_only: Quantity
    lx_shift_left_only: Quantity
    phase_budget: Quantity
    coherence_fidelity: Quantity
    prob_left: Quantity
    prob_spin_given_left: Quantity
    config: ExperimentConfig


class MomentumSweepRow(BaseModel):
    delta_theta: Quantity
    delta_x: Quantity
    grid_size: int
    phase_budget: Quantity
    p_transfer: Quantity
    p_transfer_analytic: Quantity
    kappa: Quantity
    lx_shift: Quantity


class MomentumSweepTable(BaseModel):
    kind: Literal["momentum_sweep"] = "momentum_sweep"
    reflection_count_mode: ReflectionMode
    rows: list[MomentumSweepRow]


class SurvivalRow(BaseModel):
    n_rounds: int
    survival: Quantity
    survival_analytic: Quantity
    shift: Quantity
    shift_deviation: Quantity


class SurvivalTable(BaseModel):
    kind: Literal["survival_sweep"] = "survival_sweep"
    rows: list[SurvivalRow]


Results = Annotated[
    Union[ShiftReport, BackwardReport, FluxProfile, MomentumReport, MomentumSweepTable, SurvivalTable],
    Field(discriminator="kind"),
]


class ReportEnvelope(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    config: dict
    results: Results
    timings: dict[str, float] = {}
    tolerances: dict[str, float] = {}
