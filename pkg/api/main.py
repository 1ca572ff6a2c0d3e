"""
bebound - FastAPI Application Entry Point
Serves the bound producers, the exact oracles and the filter checks over HTTP
"""

import logging
import sys
from pathlib import Path

import uvicorn
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

# Add project root to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.append(str(project_root))

from api.routers import bounds, constants, filters, oracle  # noqa: E402
from bebound import __version__  # noqa: E402
from bebound.config import configure_logging, get_settings  # noqa: E402

configure_logging()
logger = logging.getLogger(__name__)

# Create FastAPI application
app = FastAPI(
    title="bebound API",
    description="Computable Berry-Esseen and Prawitz smoothing bounds with exact oracles",
    version=__version__,
    docs_url="/api/docs",
    redoc_url="/api/redoc"
)

# CORS configuration for local notebooks and dashboards
origins = [
    "http://localhost:3000",
    "http://localhost:5173",
    "http://localhost:8888",
]

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API routers
app.include_router(constants.router, prefix="/api/v1", tags=["constants"])
app.include_router(bounds.router, prefix="/api/v1", tags=["bounds"])
app.include_router(oracle.router, prefix="/api/v1", tags=["oracle"])
app.include_router(filters.router, prefix="/api/v1", tags=["filters"])


# Health check endpoint
@app.get("/api/health")
async def health_check():
    """System health check endpoint"""
    settings = get_settings()
    return {
        "status": "healthy",
        "version": __version__,
        "settings": {
            "tol": settings.tol,
            "max_subdivisions": settings.max_subdivisions,
            "max_atoms": settings.max_atoms,
        },
    }


# Development server configuration
if __name__ == "__main__":
    port = get_settings().port
    logger.info(f"Starting bebound API on port {port}")
    uvicorn.run(
        "api.main:app",
        host="0.0.0.0",
        port=port,
        log_level="info"
    )
