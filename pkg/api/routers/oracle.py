"""
Oracle API Router
Exact convolution of discrete laws and the Delta profile against the standard normal tail
"""

from typing import List, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from api.routers import http_error
from bebound import oracle
from bebound.cf_core import DiscreteDist, parse_dist_spec
from bebound.config import get_settings
from bebound.errors import BoundError, DomainError
from bebound.reports import DeltaProfile


# Data models
class ConvolveRequest(BaseModel):
    dist: str
    n: int = Field(1, ge=1)


class ConvolveResult(BaseModel):
    dist: str
    n: int
    atoms: int
    xs: List[float]
    ps: List[float]


class DeltaProfileRequest(BaseModel):
    dist: str
    n: int = Field(1, ge=1)
    z: Optional[List[float]] = None


# Create router
router = APIRouter()


def _discrete(spec: str) -> DiscreteDist:
    law = parse_dist_spec(spec)
    if not isinstance(law, DiscreteDist):
        raise DomainError(f"'{spec}' is not a discrete distribution")
    return law


@router.post("/oracle/convolve", response_model=ConvolveResult)
def convolve(request: ConvolveRequest):
    """Exact law of the n-fold sum"""
    try:
        total = oracle.convolve_iid(_discrete(request.dist), request.n, max_atoms=get_settings().max_atoms)
    except BoundError as e:
        raise http_error(e)
    return ConvolveResult(dist=request.dist, n=request.n, atoms=len(total.xs),
                          xs=total.xs.tolist(), ps=total.ps.tolist())


@router.post("/oracle/delta-profile", response_model=DeltaProfile)
def delta_profile(request: DeltaProfileRequest):
    """|P(S > Bz) - P(Z > z)| over z and its nonuniform normalization"""
    try:
        return oracle.delta_profile(_discrete(request.dist), request.n, request.z,
                                    max_atoms=get_settings().max_atoms)
    except BoundError as e:
        raise http_error(e)
