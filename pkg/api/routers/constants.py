"""
Constants API Router
Filter constants, correction coefficients, psi samples and the literature table
"""

from typing import List, Optional

from fastapi import APIRouter, Query

from api.routers import http_error
from bebound import bounds
from bebound.errors import BoundError
from bebound.reports import ConstantEntry, PsiReport

# Create router
router = APIRouter()


@router.get("/constants", response_model=List[ConstantEntry])
def get_constants(tol: Optional[float] = Query(None, gt=0, description="absolute quadrature tolerance")):
    """Every named constant with its provenance"""
    try:
        return bounds.constants_table(tol)
    except BoundError as e:
        raise http_error(e)


@router.get("/psi", response_model=PsiReport)
def get_psi(x: float = Query(..., gt=0), tol: Optional[float] = Query(None, gt=0)):
    """psi(x) = x^2 E|Z_-|^3 / (|Z_-| + x)^2 for a standard normal Z"""
    try:
        value, error = bounds.psi_with_error(x, tol)
    except BoundError as e:
        raise http_error(e)
    return PsiReport(x=x, psi=value, abs_error=error)
