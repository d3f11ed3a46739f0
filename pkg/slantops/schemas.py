import math
from pathlib import Path
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Any, Dict, List, Literal, Optional, Tuple

# alpha must clear -1 by this margin; the limit case is never treated
ALPHA_FLOOR = -1.0 + 1e-9

MANIFEST_SCHEMA_VERSION = "1"

Subcommand = Literal[
    "build", "spectrum", "commutator", "normality", "compactness",
    "decay", "pseudo", "sweep", "bench",
]
Convention = Literal["monomial", "normalized"]


# Space configuration
class SpaceParams(BaseModel):
    """Weight exponent, slant order and truncation dimension of a computation"""

    model_config = ConfigDict(frozen=True)

    alpha: float
    k: int = 2
    dim: int = 1

    @field_validator("alpha")
    @classmethod
    def alpha_above_minus_one(cls, v: float) -> float:
        if not math.isfinite(v) or v <= ALPHA_FLOOR:
            raise ValueError(f"alpha must be a finite number greater than -1, got {v}")
        return v

    @field_validator("k")
    @classmethod
    def slant_order_at_least_two(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"slant order k must be at least 2, got {v}")
        return v

    @field_validator("dim")
    @classmethod
    def dim_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"truncation dimension must be at least 1, got {v}")
        return v

    def with_dim(self, dim: int) -> "SpaceParams":
        return SpaceParams(alpha=self.alpha, k=self.k, dim=dim)


# Analysis records
class CommutatorNorms(BaseModel):
    operator_norm: float
    frobenius: float


class DecayProfile(BaseModel):
    axis: Literal["row", "column", "diagonal"]
    values: List[float]

    @field_validator("values")
    @classmethod
    def non_negative(cls, v: List[float]) -> List[float]:
        if any(x < 0 for x in v):
            raise ValueError("decay profile values must be non-negative")
        return v

    def ratios(self) -> List[float]:
        """Successive ratios values[j+1]/values[j], skipping zero denominators"""
        return [
            self.values[j + 1] / self.values[j] if self.values[j] > 0 else math.inf
            for j in range(len(self.values) - 1)
        ]


class TailReport(BaseModel):
    k: int
    alpha: float
    j_values: List[int]
    sup_values: List[float]

    def eventually_zero_from(self) -> Optional[int]:
        """First j after which every reported value is exactly zero"""
        last_nonzero = None
        for j, v in zip(self.j_values, self.sup_values):
            if v != 0.0:
                last_nonzero = j
        if last_nonzero is None:
            return self.j_values[0] if self.j_values else None
        if last_nonzero == self.j_values[-1]:
            return None
        return last_nonzero + 1


class SweepSummary(BaseModel):
    n_dim: int
    eig_count: int
    eps: float
    small_fraction: float = Field(ge=0.0, le=1.0)
    max_modulus: float
    max_residual: float


class BenchRecord(BaseModel):
    kind: str
    n_dim: int
    construction_wall_time: float = Field(ge=0.0)
    sparsity: float = Field(ge=0.0, le=1.0)
    eigen_time: float = Field(ge=0.0)
    peak_entry_storage: int = Field(ge=0)


# Reporting
class ManifestFile(BaseModel):
    path: str
    sha256: str
    bytes: int


class Manifest(BaseModel):
    schema_version: str = MANIFEST_SCHEMA_VERSION
    experiment: str
    inputs: Dict[str, Any]
    files: List[ManifestFile] = []
    environment: Optional[Dict[str, str]] = None


# Command line
# Inputs each subcommand requires besides the space parameters
REQUIRED_INPUTS: Dict[str, Tuple[str, ...]] = {
    "build": ("kind",),
    "spectrum": ("kind",),
    "commutator": ("kind", "symbol", "symbol2"),
    "normality": ("kind",),
    "compactness": (),
    "decay": ("kind",),
    "pseudo": ("kind",),
    "sweep": ("kind", "dims"),
    "bench": ("dims",),
}


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    params: SpaceParams
    kind: Optional[str] = None
    symbol: Optional[Path] = None
    symbol2: Optional[Path] = None
    normalized_coeffs: bool = False
    output: Path
    tol: float = 1e-10
    convention: Convention = "monomial"
    format: Literal["csv", "json"] = "csv"
    grid: Optional[Tuple[float, float, float, float, int]] = None
    dims: List[int] = []
    reps: int = 3
    j_max: int = 400
    family: Optional[str] = None
    degree: int = Field(default=15, ge=0)
    eps: float = 1e-8

    @field_validator("tol", "eps")
    @classmethod
    def positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("tolerances must be positive")
        return v

    @field_validator("dims")
    @classmethod
    def increasing_dims(cls, v: List[int]) -> List[int]:
        if any(d < 1 for d in v):
            raise ValueError("dimensions must be at least 1")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("dimensions must be strictly increasing")
        return v

    @model_validator(mode="after")
    def required_inputs_present(self) -> "RunConfig":
        missing = [
            name for name in REQUIRED_INPUTS[self.subcommand]
            if getattr(self, name) in (None, [])
        ]
        if missing:
            raise ValueError(f"'{self.subcommand}' requires: {', '.join(missing)}")
        if self.symbol2 is not None and self.subcommand != "commutator":
            raise ValueError(f"'{self.subcommand}' does not take a second symbol")
        if self.subcommand == "bench" and self.reps < 3:
            raise ValueError("bench requires at least 3 repetitions")
        return self
