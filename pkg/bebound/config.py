"""
Runtime configuration for bebound
Reads tolerances, limits and logging options from the environment (and a local .env)
"""

import os
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from bebound.errors import ConfigError

# Load environment variables from the working directory
load_dotenv()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

project_root = Path(__file__).parent.parent


@dataclass(frozen=True)
class Settings:
    tol: float = 1e-9
    max_subdivisions: int = 60000
    max_atoms: int = 1_000_000
    max_workers: int = 4
    log_level: str = "INFO"
    audit_matrix: Path = project_root / "config" / "audit_matrix.yaml"
    port: int = 8000


def _read(name: str, default: str, cast):
    raw = os.getenv(name, default).strip()
    try:
        return cast(raw)
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} is not a valid {cast.__name__}") from e


def get_settings() -> Settings:
    """Build settings from the current environment; read at call time."""
    tol = _read('BEBOUND_TOL', '1e-9', float)
    if not tol > 0:
        raise ConfigError(f"BEBOUND_TOL must be positive, got {tol}")

    max_subdivisions = _read('BEBOUND_MAX_SUBDIVISIONS', '60000', int)
    max_atoms = _read('BEBOUND_MAX_ATOMS', '1000000', int)
    max_workers = _read('BEBOUND_MAX_WORKERS', '4', int)
    if min(max_subdivisions, max_atoms, max_workers) < 1:
        raise ConfigError("BEBOUND_MAX_* limits must be positive integers")

    debug = os.getenv('DEBUG', 'False').lower() == 'true'
    log_level = 'DEBUG' if debug else os.getenv('BEBOUND_LOG_LEVEL', 'INFO').upper()

    matrix = Path(os.getenv('BEBOUND_AUDIT_MATRIX', str(Settings.audit_matrix)))

    return Settings(
        tol=tol,
        max_subdivisions=max_subdivisions,
        max_atoms=max_atoms,
        max_workers=max_workers,
        log_level=log_level,
        audit_matrix=matrix,
        port=_read('PORT', '8000', int),
    )


def resolve_tol(tol: Optional[float]) -> float:
    """Explicit tolerance if given, else the configured default."""
    if tol is None:
        return get_settings().tol
    if not tol > 0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    return float(tol)


def configure_logging(level: Optional[str] = None, log_file: Optional[Path] = None) -> None:
    """Configure root logging once for an entry point (CLI, API, audit)."""
    level_name = (level or get_settings().log_level).upper()
    handlers = [logging.StreamHandler()]
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
