"""
Report models
Pydantic records for every bound, check and profile, plus JSON/CSV/table rendering
"""

import json
from typing import Dict, List, Literal, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel, Field, model_validator
from rich.console import Console
from rich.table import Table

OutputFormat = Literal["json", "csv", "table"]


# Data models
class BoundParams(BaseModel):
    filter: str = "prawitz"
    tol: float
    p: Optional[float] = None
    mode: Optional[str] = None
    tail: Optional[str] = None
    n: Optional[int] = None
    c_T: Optional[float] = None
    dist: Optional[str] = None


class BoundReport(BaseModel):
    kind: Literal["cdf_sandwich", "tail_moment", "positive_part"]
    x: float
    T: float
    k: Optional[int] = None
    lower: float
    upper: float
    center: Optional[float] = None
    radius: Optional[float] = None
    quadrature_error: float = Field(ge=0.0)
    clamped: bool = False
    params: BoundParams
    exact: Optional[Dict[str, float]] = None
    contains: Optional[bool] = None
    notes: List[str] = []

    @model_validator(mode="after")
    def _ordered(self):
        if self.upper < self.lower:
            raise ValueError(f"upper {self.upper} is below lower {self.lower}")
        return self

    def check(self, values: Dict[str, float]) -> "BoundReport":
        """Attach exact oracle values and record whether each lies in [lower, upper] up to the tolerance."""
        slack = self.params.tol
        inside = all(self.lower - slack <= v <= self.upper + slack for v in values.values())
        return self.model_copy(update={"exact": dict(values), "contains": inside})


class FixCorrection(BaseModel):
    k: int
    p: float
    x: float
    T: float
    coefficient: float
    exact_term: float
    moment_min_term: float


class ERatReport(BaseModel):
    x: float
    n: int
    beta3: float
    exact: float
    chain1: float
    chain2: float
    chain3: float
    tyurin_ub: float
    chain2_symmetric: Optional[float] = None
    notes: List[str] = ["externally sourced inequality: tyurin_ub"]

    @property
    def chain_holds(self) -> bool:
        ok = self.exact <= self.chain1 <= self.chain2 <= self.chain3 and self.exact <= self.tyurin_ub
        if self.chain2_symmetric is not None:
            ok = ok and self.chain1 <= self.chain2_symmetric <= self.chain2
        return ok


class DerivationStep(BaseModel):
    claim: str
    lhs: float
    rhs: float
    holds: bool


class NagaevCheck(BaseModel):
    beta3: float
    n: int
    x: float
    ratio: float
    bound: float
    applicable: bool
    derivation: List[DerivationStep]
    observed: Optional[float] = None
    passed: Optional[bool] = None


class DeltaProfile(BaseModel):
    dist: str
    n: int
    beta3: float
    r_L: float = Field(gt=0.0)
    small_n: bool
    z: List[float]
    delta: List[float]
    normalized: List[float]
    max_normalized: float
    argmax_z: float
    max_uniform_ratio: float
    c_nu_checks: Dict[str, bool]
    uniform_upper: float
    uniform_lower: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "z": self.z,
            "delta": self.delta,
            "normalized": self.normalized,
            "r_L": [self.r_L] * len(self.z),
        })


class PsiReport(BaseModel):
    x: float
    psi: float
    abs_error: float


class ConstantEntry(BaseModel):
    name: str
    value: float
    provenance: str
    description: str = ""


class FilterReport(BaseModel):
    filter: str
    kappa: float
    p_max: float
    support_ok: bool
    parity_max_error: float
    l1_bounded: bool
    c2p: Dict[str, float]
    kernel_residuals: Dict[str, float]


Report = Union[BoundReport, FixCorrection, ERatReport, NagaevCheck, DeltaProfile, PsiReport,
               ConstantEntry, FilterReport]


def to_frame(reports: Sequence[BaseModel]) -> pd.DataFrame:
    """One row per report; nested models flatten to dotted columns."""
    if len(reports) == 1 and isinstance(reports[0], DeltaProfile):
        return reports[0].to_frame()
    return pd.json_normalize([r.model_dump(mode="json") for r in reports])


def render(reports: Sequence[BaseModel], fmt: OutputFormat = "json") -> str:
    """Serialize reports; JSON is a single object for one report and an array otherwise."""
    if fmt == "json":
        payload = [r.model_dump(mode="json") for r in reports]
        return json.dumps(payload[0] if len(payload) == 1 else payload, indent=2)
    if fmt == "csv":
        return to_frame(reports).to_csv(index=False)
    raise ValueError(f"render() does not handle format '{fmt}'; use print_table")


def print_table(reports: Sequence[BaseModel], title: str, console: Optional[Console] = None) -> None:
    frame = to_frame(reports)
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column), overflow="fold")
    for row in frame.itertuples(index=False):
        table.add_row(*[f"{v:.10g}" if isinstance(v, float) else str(v) for v in row])
    (console or Console()).print(table)
