"""
Exact oracles
n-fold convolutions of discrete distributions, the standard normal CDF, the constants table
and Delta(z) profiles for nonuniform Berry-Esseen audits
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from bebound.cf_core import DiscreteDist
from bebound.config import get_settings
from bebound.errors import DomainError, QuadratureError, SupportBlowupError
from bebound.reports import DeltaProfile

logger = logging.getLogger(__name__)

_LATTICE_DIVISORS = range(1, 13)
_LATTICE_TOL = 1e-9
# dense lattice pmfs may be at most this many times wider than the atom count
_LATTICE_FILL = 16
# relative slack when comparing standardized sums against z
_TAIL_SNAP = 1e-10
_SQRT_PI = math.sqrt(math.pi)
_ERF_SERIES_MAX = 1.0
_CF_MAXIT = 2000
_CF_EPS = 1e-16
_TINY = 1e-300


@dataclass(frozen=True)
class NamedConstant:
    value: float
    provenance: str
    description: str


X0 = (4.5 / 0.4748 - 1.0) ** (1.0 / 3.0)

CONSTANTS: Dict[str, NamedConstant] = {
    "c_u_iid_upper": NamedConstant(0.4748, "literature", "best known iid uniform constant"),
    "c_u_lower": NamedConstant((3 + math.sqrt(10)) / (6 * math.sqrt(2 * math.pi)), "closed form",
                               "lower bound on the uniform constant"),
    "c_u_general_upper": NamedConstant(0.5600, "literature", "non-iid uniform constant"),
    "c_u_general_upper_alt": NamedConstant(0.5606, "literature", "non-iid uniform constant, alternative"),
    "c_nu_small_n": NamedConstant(4.5, "derived", "nonuniform constant when beta3/sqrt(n) >= 2/3"),
    "c_nu_envelope": NamedConstant(25.0, "literature", "generous envelope for the nonuniform constant"),
    "c_nu_gap_factor": NamedConstant(31.0, "literature", "ratio of known upper to lower nonuniform constants"),
    "c_T_default": NamedConstant(1.0 / math.sqrt(3.0), "derived", "default T = c_T sqrt(n)/beta3"),
    "x0": NamedConstant(X0, "closed form", "crossover where 4.5/(1+x^3) drops below 0.4748"),
    "sqrt_2_over_pi": NamedConstant(math.sqrt(2 / math.pi), "closed form", "E|Z_-|^3 and psi at infinity"),
    "normal_abs_third": NamedConstant(2 * math.sqrt(2 / math.pi), "closed form", "E|Z|^3"),
}


# ---------------------------------------------------------------------------
# Convolution
# ---------------------------------------------------------------------------

def _lattice(xs: np.ndarray) -> Optional[tuple]:
    """Return (origin, step, integer offsets) if the atoms sit on an affine lattice."""
    if xs.size == 1:
        return xs[0], 1.0, np.zeros(1, dtype=np.int64)
    origin = xs[0]
    span = xs - origin
    base_step = float(np.min(np.diff(xs)))
    for divisor in _LATTICE_DIVISORS:
        step = base_step / divisor
        offsets = span / step
        rounded = np.rint(offsets)
        if np.all(np.abs(offsets - rounded) <= _LATTICE_TOL * np.maximum(1.0, rounded)):
            # snap integral steps so integer lattices keep exact atom positions
            if round(step) > 0 and abs(step - round(step)) <= _LATTICE_TOL * step:
                step = float(round(step))
            return origin, step, rounded.astype(np.int64)
    return None


def _convolve_pmf(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Linear convolution, one shifted copy of left per lag of right, with Neumaier-compensated sums."""
    total = np.zeros(left.size + right.size - 1)
    carry = np.zeros_like(total)
    for lag, weight in enumerate(right):
        if weight == 0.0:
            continue
        window = slice(lag, lag + left.size)
        term = left * weight
        current = total[window]
        updated = current + term
        carry[window] += np.where(np.abs(current) >= np.abs(term),
                                  (current - updated) + term,
                                  (term - updated) + current)
        total[window] = updated
    return total + carry


def convolve_iid(base: DiscreteDist, n: int, max_atoms: Optional[int] = None) -> DiscreteDist:
    """
    Exact distribution of S = X_1 + ... + X_n for iid X_i ~ base.

    Lattice bases are convolved on integer offsets and mapped back to positions only at the end;
    other bases coalesce atoms at exact float equality after each step.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if max_atoms is None:
        max_atoms = get_settings().max_atoms
    label = f"{base.label}*{n}"
    if n == 1:
        return DiscreteDist(base.xs, base.ps, base.label)

    lattice = _lattice(base.xs)
    if lattice is not None and int(lattice[2][-1]) + 1 > _LATTICE_FILL * base.xs.size:
        logger.debug(f"lattice of {base.label} is too sparse ({int(lattice[2][-1]) + 1} slots for "
                     f"{base.xs.size} atoms); using sparse convolution")
        lattice = None
    if lattice is not None:
        origin, step, offsets = lattice
        width = int(offsets[-1]) + 1
        support = n * (width - 1) + 1
        if support > max_atoms:
            raise SupportBlowupError(f"convolution of {base.label} with n={n} needs {support} atoms > {max_atoms}")
        pmf = np.zeros(width)
        pmf[offsets] = base.ps
        total = pmf
        for _ in range(n - 1):
            total = _convolve_pmf(total, pmf)
        positions = n * origin + step * np.arange(total.size)
        keep = total > 0
        logger.debug(f"lattice convolution {label}: step={step}, {int(keep.sum())} atoms")
        return DiscreteDist(positions[keep], total[keep] / math.fsum(total[keep]), label)

    atoms = {float(x): [float(p)] for x, p in zip(base.xs, base.ps)}
    current = {x: math.fsum(ps) for x, ps in atoms.items()}
    for step_index in range(n - 1):
        buckets: Dict[float, list] = {}
        for x, p in current.items():
            for y, q in zip(base.xs, base.ps):
                buckets.setdefault(x + float(y), []).append(p * float(q))
        if len(buckets) > max_atoms:
            raise SupportBlowupError(
                f"convolution of {base.label} exceeded {max_atoms} atoms at step {step_index + 2} of {n}"
            )
        current = {x: math.fsum(ps) for x, ps in buckets.items()}
    xs = np.array(sorted(current))
    ps = np.array([current[x] for x in xs])
    logger.debug(f"sparse convolution {label}: {xs.size} atoms")
    return DiscreteDist(xs, ps / math.fsum(ps), label)


# ---------------------------------------------------------------------------
# Standard normal CDF
# ---------------------------------------------------------------------------

def _erf_series(z: float) -> float:
    # erf(z) = (2/sqrt(pi)) e^{-z^2} sum_n 2^n z^{2n+1} / (2n+1)!!, all terms positive for z > 0
    term = z
    total = z
    n = 0
    while term > 1e-17 * total:
        n += 1
        term *= 2.0 * z * z / (2 * n + 1)
        total += term
    return 2.0 / _SQRT_PI * math.exp(-z * z) * total


def _erfc_continued_fraction(z: float) -> float:
    # erfc(z) = e^{-z^2} / (sqrt(pi) (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))), modified Lentz
    f = z
    c = f
    d = 0.0
    for n in range(1, _CF_MAXIT):
        a = 0.5 * n
        d = z + a * d
        d = 1.0 / (d if d != 0.0 else _TINY)
        c = z + a / c
        if c == 0.0:
            c = _TINY
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    else:
        raise QuadratureError(f"erfc continued fraction did not converge at z={z}")
    return math.exp(-z * z) / (_SQRT_PI * f)


def normal_cdf(x: float) -> float:
    """
    Phi(x) for the standard normal.

    With z = |x|/sqrt(2): the erf power series for z < 1, the erfc continued fraction above.
    The smaller of Phi(x), 1 - Phi(x) is always computed directly so tails keep full relative accuracy.
    """
    x = float(x)
    if math.isnan(x):
        raise DomainError("normal_cdf requires a number")
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    z = abs(x) / math.sqrt(2.0)
    if z < _ERF_SERIES_MAX:
        half_erf = 0.5 * _erf_series(z)
        return 0.5 + half_erf if x >= 0 else 0.5 - half_erf
    small = 0.5 * _erfc_continued_fraction(z)
    return 1.0 - small if x > 0 else small


def normal_sf(x: float) -> float:
    """P(Z > x)."""
    return normal_cdf(-x)


# ---------------------------------------------------------------------------
# Delta profiles
# ---------------------------------------------------------------------------

def default_z_grid() -> np.ndarray:
    """81 points on [0, 4] merged with the window [2, 3.5] at step 0.05."""
    body = np.linspace(0.0, 4.0, 81)
    window = np.linspace(2.0, 3.5, 31)
    return np.unique(np.round(np.concatenate([body, window]), 12))


def _standardized_tail(total: DiscreteDist, B: float, z: float) -> float:
    """P(S/B > z); atoms within rounding of z count as equal to it."""
    threshold = z + _TAIL_SNAP * max(1.0, abs(z))
    return math.fsum(total.ps[total.xs / B > threshold])


def delta_profile(base: DiscreteDist, n: int, z_grid: Optional[Sequence[float]] = None,
                  max_atoms: Optional[int] = None) -> DeltaProfile:
    """
    Delta(z) = |P(S > B z) - P(Z > z)| for S a sum of n iid copies of the centered base, B = sqrt(n) sigma.

    Normalized values are Delta(z) (1 + z^3) / r_L, with r_L = n E|X - mu|^3 / B^3 = beta3 / sqrt(n).
    """
    variance = base.variance
    if not variance > 0:
        raise DomainError(f"distribution '{base.label}' has zero variance")
    z = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    if z.size == 0 or np.any(~np.isfinite(z)):
        raise DomainError("z grid must be a nonempty list of finite numbers")

    mean = base.mean
    centered = DiscreteDist(base.xs - mean, base.ps, base.label)
    total = convolve_iid(centered, n, max_atoms=max_atoms)
    sigma = math.sqrt(variance)
    B = math.sqrt(n) * sigma
    beta3 = centered.abs_moment(3) / sigma ** 3
    r_L = beta3 / math.sqrt(n)

    delta = np.array([abs(_standardized_tail(total, B, zi) - normal_sf(zi)) for zi in z])
    normalized = delta * (1.0 + z ** 3) / r_L
    worst = int(np.argmax(normalized))
    max_uniform = float(np.max(delta) / r_L)

    envelopes = {
        "c_nu_small_n": CONSTANTS["c_nu_small_n"].value,
        "c_nu_envelope": CONSTANTS["c_nu_envelope"].value,
    }
    logger.info(f"delta profile {base.label} n={n}: max normalized {normalized[worst]:.4f} at z={z[worst]:.3f}")
    return DeltaProfile(
        dist=base.label,
        n=int(n),
        beta3=beta3,
        r_L=r_L,
        small_n=r_L >= 2.0 / 3.0,
        z=z.tolist(),
        delta=delta.tolist(),
        normalized=normalized.tolist(),
        max_normalized=float(normalized[worst]),
        argmax_z=float(z[worst]),
        max_uniform_ratio=max_uniform,
        c_nu_checks={name: bool(normalized[worst] <= value) for name, value in envelopes.items()},
        uniform_upper=CONSTANTS["c_u_iid_upper"].value,
        uniform_lower=CONSTANTS["c_u_lower"].value,
    )
