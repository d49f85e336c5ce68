"""Request and report models shared by the HTTP service and the CLI.

Reports embed the request that produced them, so any serialized report can
be re-run bit-for-bit.  ``schema_version`` is bumped on any shape change;
the JSON Schemas under ``phasekit/schemas/`` are generated from these
models and checked in.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1

MAX_BITS = 4096


class TallyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hadamards: int
    qft_hadamards: int
    qft_rotations: int
    reset_rotations: int
    controlled_u: int
    u_applications: int
    measurements: int
    stages: int
    qft_count: int
    rotation_count: int

    @classmethod
    def from_tally(cls, tally) -> "TallyModel":
        return cls(**tally.as_dict())


class PhaseModel(BaseModel):
    """A phase in its exact and approximate spellings."""

    model_config = ConfigDict(extra="forbid")

    rational: str
    binary: Optional[str]
    value: float

    @classmethod
    def from_phase(cls, phase) -> "PhaseModel":
        binary = phase.binary() if phase.precision_bits <= 128 else None
        return cls(rational=phase.rational(), binary=binary, value=float(phase))


class EstimateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    phase: str
    n: int = Field(ge=1, le=MAX_BITS)
    k: int = Field(ge=1, le=MAX_BITS)
    method: Literal["staged", "kitaev"] = "staged"
    backend: Literal["product", "statevector"] = "product"
    seed: int = 0
    trials: Optional[int] = Field(default=None, ge=1)
    shared_budget: bool = False
    paper_cost_mode: bool = True


class RunReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    method: Literal["staged", "kitaev"]
    inputs: EstimateRequest
    success: bool
    failure: Optional[str]
    bits: Optional[str]
    phase_estimate: Optional[PhaseModel]
    exact: Optional[bool]
    deterministic: Optional[bool]
    stage_count: Optional[int]
    k_effective: Optional[int]
    f_trace: Optional[list[str]]
    estimates: Optional[list[float]]
    trials_per_test: Optional[int]
    tally: TallyModel


class CountRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1, le=MAX_BITS)
    k: int = Field(ge=1, le=MAX_BITS)
    methods: Optional[list[Literal["staged", "conventional", "kitaev"]]] = None


class StagedCountModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    stages: int
    workspace_qubits: int
    qft_rotations: int
    reset_rotations: int
    total: int
    paper_approx: Union[int, float]
    controlled_u: int
    classical_register_bits: int


class ConventionalCountModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rotations: int
    hadamards: int
    measurements: int
    controlled_u: int
    workspace_qubits: int


class KitaevCountModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    trials_per_test: int
    total_tests: int
    comparison_tests: int
    gate_hadamards: int
    gate_controlled_u: int
    workspace_qubits: int


class CountReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    inputs: CountRequest
    n: int
    k: int
    staged: Optional[StagedCountModel]
    conventional: Optional[ConventionalCountModel]
    kitaev: Optional[KitaevCountModel]


class ShorRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    N: int = Field(ge=3)
    k: int = Field(ge=1, le=MAX_BITS)
    recovery: Literal["cf", "sda"] = "cf"
    x: Optional[int] = Field(default=None, ge=2)
    epsilon: float = Field(default=0.2, gt=0)
    seed: int = 0
    pooled_runs: Optional[int] = Field(default=None, ge=2)
    paper_cost_mode: bool = True


class CaseCostModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    big_l: int
    k: int
    epsilon: float
    n_case_i: int
    n_case_ii: int
    stages_case_i: int
    stages_case_ii: int
    paper_case_i: float
    paper_case_ii: float
    paper_case_ii_ceiled: float
    exact_case_i: int
    exact_case_ii: int
    ratio_paper: float
    ratio_exact: float

    @classmethod
    def from_comparison(cls, cmp) -> "CaseCostModel":
        return cls(
            big_l=cmp.big_l,
            k=cmp.k,
            epsilon=cmp.epsilon,
            n_case_i=cmp.n_case_i,
            n_case_ii=cmp.n_case_ii,
            stages_case_i=cmp.stages_case_i,
            stages_case_ii=cmp.stages_case_ii,
            paper_case_i=cmp.paper_case_i,
            paper_case_ii=cmp.paper_case_ii,
            paper_case_ii_ceiled=cmp.paper_case_ii_ceiled,
            exact_case_i=cmp.exact_case_i,
            exact_case_ii=cmp.exact_case_ii,
            ratio_paper=cmp.ratio_paper,
            ratio_exact=cmp.ratio_exact,
        )


class ShorReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    inputs: ShorRequest
    success: bool
    failure: Optional[str]
    x: int
    n: int
    register_bits: int
    pooled_runs: int
    classical_shortcut: bool
    phases: list[PhaseModel]
    bits: list[str]
    r_candidate: Optional[int]
    r: Optional[int]
    factors: Optional[list[int]]
    tally: TallyModel
    case_costs: CaseCostModel


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_values: list[int] = Field(min_length=0, max_length=512)
    k_values: list[int] = Field(min_length=0, max_length=512)


class SweepRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int
    k: int
    stages: int
    staged_exact: int
    staged_paper_approx: Union[int, float]
    conventional: int
    kitaev_tests: int


class SweepReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    inputs: SweepRequest
    rows: list[SweepRow]


class CompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    big_l: int = Field(ge=1, le=MAX_BITS)
    k: int = Field(ge=1, le=MAX_BITS)
    epsilon: float = Field(default=0.01, gt=0)


class CompareReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    inputs: CompareRequest
    costs: CaseCostModel
