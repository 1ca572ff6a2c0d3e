"""
Filters API Router
Filter conditions, c_{2,p} constants and kernel residuals
"""

from typing import List

from fastapi import APIRouter, HTTPException, Query

from api.routers import http_error
from bebound.errors import BoundError
from bebound.filters import FILTERS, c2p_constant, kernel_residual, validate_filter
from bebound.reports import FilterReport

# Create router
router = APIRouter()


@router.get("/filters/{name}", response_model=FilterReport)
def inspect_filter(name: str, x: List[float] = Query([50.0, 500.0], description="kernel residual points, |x| >= 1")):
    """Validate a registered smoothing filter"""
    filt = FILTERS.get(name.lower())
    if filt is None:
        raise HTTPException(status_code=404, detail=f"Filter '{name}' not found")
    if any(abs(point) < 1 for point in x):
        raise HTTPException(status_code=400, detail="kernel residual points need |x| >= 1")

    try:
        validation = validate_filter(filt)
        c2p = {f"{p:g}": c2p_constant(p, filt).value for p in (0.5, 1.0, 2.0) if p <= filt.p_max}
        residuals = {f"{point:g}": kernel_residual(filt, point) for point in x}
    except BoundError as e:
        raise http_error(e)

    return FilterReport(
        filter=filt.name,
        kappa=filt.kappa,
        p_max=filt.p_max,
        support_ok=validation.support_ok,
        parity_max_error=validation.parity_max_error,
        l1_bounded=validation.l1_bounded,
        c2p=c2p,
        kernel_residuals=residuals,
    )
