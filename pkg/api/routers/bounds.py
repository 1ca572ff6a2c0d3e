"""
Bounds API Router
Prawitz CDF sandwiches and two-sided tail-moment bounds over a grid of points
"""

from typing import List, Literal, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field, model_validator

from api.routers import http_error
from bebound import bounds
from bebound.cf_core import DiscreteDist, load_source
from bebound.config import get_settings
from bebound.errors import BoundError
from bebound.reports import BoundReport


# Data models
class SourceRequest(BaseModel):
    dist: str = Field(..., description="rademacher | bernoulli:p | point:c | atoms:x,p;... | normal")
    n: int = Field(1, ge=1)
    T: Optional[float] = Field(None, gt=0)
    c_T: Optional[float] = Field(None, gt=0)
    xs: List[float] = Field(..., min_length=1)
    tol: Optional[float] = Field(None, gt=0)
    raw: bool = False

    @model_validator(mode="after")
    def _one_T(self):
        if self.T is not None and self.c_T is not None:
            raise ValueError("T and c_T are mutually exclusive")
        return self

    def load(self):
        cf, beta3 = load_source(self.dist, self.n, raw=self.raw, max_atoms=get_settings().max_atoms)
        return cf, bounds.resolve_T(self.T, self.c_T, beta3, self.n)


class CdfRequest(SourceRequest):
    reflect: bool = False


class TailRequest(SourceRequest):
    k: int = Field(3, ge=1)
    mode: Literal["exact_abs", "surrogate"] = "exact_abs"
    p: Optional[float] = Field(None, gt=0)
    xs: List[float] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _nonnegative(self):
        if any(x < 0 for x in self.xs):
            raise ValueError("tail bounds need x >= 0")
        return self


# Create router
router = APIRouter()


@router.post("/bounds/cdf", response_model=List[BoundReport])
def cdf_bounds(request: CdfRequest):
    """lower <= F(x-) <= F(x+) <= upper at every requested x"""
    try:
        cf, T = request.load()
        producer = bounds.cdf_bounds_by_reflection if request.reflect else bounds.cdf_bounds
        return bounds.evaluate_grid(lambda x: producer(cf, 1.0, x, T, tol=request.tol), request.xs)
    except BoundError as e:
        raise http_error(e)


@router.post("/bounds/tail", response_model=List[BoundReport])
def tail_bounds(request: TailRequest):
    """Two-sided bounds on x^k P(X >= x) and x^k P(X > x)"""
    try:
        cf, T = request.load()
        source = cf.law if request.mode == "exact_abs" and isinstance(cf.law, DiscreteDist) else cf
        return bounds.evaluate_grid(
            lambda x: bounds.tail_moment_bound(source, request.k, x, T, mode=request.mode, p=request.p,
                                               tol=request.tol),
            request.xs,
        )
    except BoundError as e:
        raise http_error(e)
