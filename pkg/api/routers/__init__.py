"""
API Routers Package
Shared mapping from library errors to HTTP status codes
"""

from fastapi import HTTPException

from bebound.errors import AuditFailure, BoundError, DomainError, QuadratureError


def http_error(e: BoundError) -> HTTPException:
    """DomainError -> 400, QuadratureError -> 422, AuditFailure -> 409, anything else 500."""
    if isinstance(e, DomainError):
        return HTTPException(status_code=400, detail=str(e))
    if isinstance(e, QuadratureError):
        return HTTPException(status_code=422, detail=str(e))
    if isinstance(e, AuditFailure):
        return HTTPException(status_code=409, detail=str(e))
    return HTTPException(status_code=500, detail=str(e))
