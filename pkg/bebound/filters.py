"""
Bounding smoothing filters
Prawitz's filter M on [-1, 1], its parity components M1/M2, the remainder N2 = M2(t)/t,
the Fourier transform of N2 and the c_{2,p} constants that control the surrogate correction
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

from bebound.config import resolve_tol
from bebound.errors import DomainError, QuadratureError

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]

# x cot x = 1 - x^2/3 - x^4/45 - 2x^6/945 - x^8/4725 - 2x^10/93555 - ...
_XCOTX_SERIES = (1.0, -1.0 / 3.0, -1.0 / 45.0, -2.0 / 945.0, -1.0 / 4725.0, -2.0 / 93555.0)
_SERIES_CUTOFF = 0.05

SCAN_SPAN = 200.0
SCAN_POINTS = 100_000


def _as_output(values: np.ndarray, scalar: bool):
    return values.item() if scalar else values


def _pi_y_cot_pi_y(y: np.ndarray) -> np.ndarray:
    """pi*y*cot(pi*y) for y in [0, 1/2]."""
    out = np.empty_like(y)
    small = y < _SERIES_CUTOFF
    z2 = (np.pi * y[small]) ** 2
    acc = np.zeros_like(z2)
    for coef in reversed(_XCOTX_SERIES):
        acc = acc * z2 + coef
    out[small] = acc
    big = y[~small]
    out[~small] = np.pi * big / np.tan(np.pi * big)
    return out


def _prawitz_parts(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a = np.abs(t)
    inside = a < 1.0
    m1 = np.zeros_like(a)
    m2 = np.zeros_like(a)
    ai = a[inside]
    near_zero = ai <= 0.5
    # (1-a) pi a cot(pi a) == -a * pi(1-a) cot(pi(1-a)); the second form has no pole at a=1
    lead = (1.0 - ai) * _pi_y_cot_pi_y(np.minimum(ai, 0.5))
    tail = -ai * _pi_y_cot_pi_y(np.minimum(1.0 - ai, 0.5))
    m1[inside] = np.where(near_zero, lead, tail) + ai
    m2[inside] = -np.pi * t[inside] * (1.0 - ai)
    return m1, m2


def _prawitz_m1(t):
    return _prawitz_parts(np.asarray(t, dtype=float))[0]


def _prawitz_m2(t):
    return _prawitz_parts(np.asarray(t, dtype=float))[1]


def _prawitz_n2(t):
    t = np.asarray(t, dtype=float)
    return -np.pi * np.clip(1.0 - np.abs(t), 0.0, None)


def _prawitz_n2_hat(u):
    u = np.asarray(u, dtype=float)
    return -np.pi * np.sinc(u / (2.0 * np.pi)) ** 2


@dataclass(frozen=True)
class SmoothingFilter:
    """A bounding smoothing filter M = M1 + i*M2 supported on [-1, 1]."""

    name: str
    m1: ArrayFn
    m2: ArrayFn
    kappa: float = 1.0
    support_radius: float = 1.0
    n2: Optional[ArrayFn] = None
    n2_hat: Optional[ArrayFn] = None
    p_max: float = 2.0

    def eval(self, t):
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        inside = np.abs(t) <= self.support_radius
        values = np.where(inside, self.m1(t) + 1j * self.m2(t), 0.0 + 0.0j)
        return _as_output(values, scalar)

    __call__ = eval

    def reflected(self) -> ArrayFn:
        """t -> M(-t), i.e. conj(M(t)) for a filter with the required parity."""
        return lambda s: self.eval(-np.asarray(s, dtype=float))

    def component(self, j: int) -> ArrayFn:
        """M1 for j=1; i*M2 for j=2, so that G of the product is real for Hermitian weights."""
        if j == 1:
            return lambda s: np.asarray(self.m1(np.asarray(s, dtype=float)), dtype=complex)
        if j == 2:
            return lambda s: 1j * np.asarray(self.m2(np.asarray(s, dtype=float)), dtype=float)
        raise DomainError(f"filter component must be 1 or 2, got {j}")

    def n2_values(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.n2 is not None:
            return self.n2(t)
        # removable point at t=0: slope of M2 from a symmetric difference
        step = 1e-6
        at_zero = (self.m2(np.array([step])) - self.m2(np.array([-step])))[0] / (2 * step)
        safe = np.where(t == 0.0, 1.0, t)
        return np.where(t == 0.0, at_zero, self.m2(safe) / safe)


PRAWITZ = SmoothingFilter(
    name="prawitz",
    m1=_prawitz_m1,
    m2=_prawitz_m2,
    kappa=1.0,
    n2=_prawitz_n2,
    n2_hat=_prawitz_n2_hat,
    p_max=2.0,
)

FILTERS: Dict[str, SmoothingFilter] = {PRAWITZ.name: PRAWITZ}


def get_filter(name: str) -> SmoothingFilter:
    if name not in FILTERS:
        raise DomainError(f"Unknown filter '{name}'; available: {sorted(FILTERS)}")
    return FILTERS[name]


def prawitz_eval(t):
    """
    Prawitz's filter

        M(t) = [(1-|t|) pi t cot(pi t) + |t| - i (1-|t|) pi t] 1{|t| < 1},

    continuous at t = 0 (value 1) and at |t| = 1 (value 0).
    """
    return PRAWITZ.eval(t)


def n2_hat_quadrature(u: float, filt: SmoothingFilter = PRAWITZ, tol: float = 1e-12) -> float:
    """Fourier transform of N2 = M2(t)/t by oscillatory quadrature (N2 is real and even)."""
    n2 = lambda t: float(filt.n2_values(np.array([t]))[0])
    if u == 0.0:
        value, err = integrate.quad(n2, 0.0, filt.support_radius, epsabs=tol, limit=200)
    else:
        value, err = integrate.quad(n2, 0.0, filt.support_radius, weight='cos', wvar=abs(u),
                                    epsabs=tol, limit=200)
    if err > max(tol, 1e-10):
        raise QuadratureError(f"N2 transform at u={u} did not converge (err={err:.2e})", abs_error=err, tol=tol)
    return 2.0 * value


def n2_hat_eval(u, filt: SmoothingFilter = PRAWITZ):
    """N2-hat(u) = int e^{iut} M2(t)/t dt; for Prawitz's filter -pi (sin(u/2)/(u/2))^2."""
    scalar = np.ndim(u) == 0
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if filt.n2_hat is not None:
        return _as_output(filt.n2_hat(u), scalar)
    return _as_output(np.array([n2_hat_quadrature(v, filt) for v in u]), scalar)


@dataclass(frozen=True)
class FilterConstant:
    p: float
    value: float
    argmax_u: Optional[float]
    attained_in_limit: bool = False
    filter_name: str = PRAWITZ.name


def _check_p(p: float, filt: SmoothingFilter) -> None:
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if p > filt.p_max:
        raise DomainError(
            f"sup |u|^p |N2-hat(u)| is infinite for p > {filt.p_max} with the {filt.name} filter (got p={p})"
        )


def _weighted_n2_hat(u: np.ndarray, p: float, filt: SmoothingFilter) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return np.abs(u) ** p * np.abs(n2_hat_eval(u, filt))


def _scan_sup(p: float, lo: float, filt: SmoothingFilter) -> Tuple[float, float]:
    """Grid scan over [lo, lo + SCAN_SPAN] followed by golden-section refinement."""
    grid = np.linspace(lo, lo + SCAN_SPAN, SCAN_POINTS)
    values = _weighted_n2_hat(grid, p, filt)
    best = int(np.argmax(values))
    best_u, best_value = float(grid[best]), float(values[best])
    if best == 0 or best == len(grid) - 1:
        return best_value, best_u

    objective = lambda u: -float(_weighted_n2_hat(np.array([u]), p, filt)[0])
    try:
        res = optimize.minimize_scalar(
            objective, bracket=(grid[best - 1], grid[best], grid[best + 1]), method='golden', tol=1e-12
        )
    except ValueError:
        logger.debug(f"golden-section bracket rejected at u={best_u}; keeping grid maximum")
        return best_value, best_u
    if -res.fun > best_value and grid[best - 1] <= res.x <= grid[best + 1]:
        return float(-res.fun), float(res.x)
    return best_value, best_u


def c2p_constant(p: float, filt: SmoothingFilter = PRAWITZ) -> FilterConstant:
    """
    c_{2,p} = sup_u |u|^p |N2-hat(u)|

    For Prawitz's filter |u|^2 |N2-hat(u)| = 4 pi sin^2(u/2), so c_{2,2} = 4 pi (attained at u = pi);
    for p < 2 the lobes of u^{p-2} sin^2(u/2) shrink, so a scan of (0, 200] brackets the maximum.
    """
    _check_p(p, filt)
    if filt is PRAWITZ and p == 2.0:
        return FilterConstant(p=p, value=4.0 * math.pi, argmax_u=math.pi)
    value, argmax = _scan_sup(p, 0.0, filt)
    return FilterConstant(p=p, value=value, argmax_u=argmax, filter_name=filt.name)


def refined_sup(p: float, threshold: float, filt: SmoothingFilter = PRAWITZ) -> float:
    """sup { u^p |N2-hat(u)| : u >= threshold }; nonincreasing in threshold."""
    _check_p(p, filt)
    if threshold < 0 or not math.isfinite(threshold):
        raise DomainError(f"threshold must be a nonnegative finite number, got {threshold}")
    overall = c2p_constant(p, filt)
    if overall.argmax_u is not None and threshold <= overall.argmax_u:
        return overall.value
    if filt is PRAWITZ and p == 2.0:
        # 4 pi sin^2(u/2) reaches 4 pi at every odd multiple of pi
        return overall.value
    value, _ = _scan_sup(p, threshold, filt)
    return min(value, overall.value)


def kernel_residual(filt: SmoothingFilter, x: float, tol: float = 1e-6) -> float:
    """
    x^2 * M-check(x) - sin(x), with M-check(x) = (1/2pi) int e^{-itx} M(t) dt.

    For Prawitz's filter this tends to 0 as |x| grows. The quadrature error, scaled by x^2,
    must stay below tol.
    """
    if abs(x) < 1:
        raise DomainError(f"kernel residual is defined for |x| >= 1, got {x}")
    m1 = lambda t: float(filt.m1(np.array([t]))[0])
    m2 = lambda t: float(filt.m2(np.array([t]))[0])
    epsabs = max(tol * math.pi / (x * x), 1e-15)
    # M Hermitian: M-check(x) = (1/pi) int_0^1 [M1(t) cos(xt) + M2(t) sin(xt)] dt
    cos_part, cos_err = integrate.quad(m1, 0.0, filt.support_radius, weight='cos', wvar=x,
                                       epsabs=epsabs, limit=400)
    sin_part, sin_err = integrate.quad(m2, 0.0, filt.support_radius, weight='sin', wvar=x,
                                       epsabs=epsabs, limit=400)
    scaled_err = (cos_err + sin_err) * x * x / math.pi
    if scaled_err > tol:
        raise QuadratureError(f"kernel transform at x={x} has error {scaled_err:.2e} > {tol:.1e}",
                              abs_error=scaled_err, tol=tol)
    kernel = (cos_part + sin_part) / math.pi
    return x * x * kernel - math.sin(x)


@dataclass(frozen=True)
class FilterValidation:
    filter_name: str
    support_ok: bool
    parity_max_error: float
    l1_partial_integrals: List[Tuple[float, float]] = field(default_factory=list)
    l1_bounded: bool = False

    @property
    def ok(self) -> bool:
        return self.support_ok and self.parity_max_error <= 1e-12 and self.l1_bounded


def validate_filter(filt: SmoothingFilter, samples: int = 1000, seed: int = 0,
                    tol: Optional[float] = None) -> FilterValidation:
    """
    Numerical check of the filter conditions: M = 0 off [-1, 1], Re M even / Im M odd,
    and (M(t) - kappa)/t integrable near 0 (partial integrals stop growing as the cutoff shrinks).
    """
    tol = resolve_tol(tol)
    rng = np.random.default_rng(seed)
    outside = np.concatenate([rng.uniform(1.0 + 1e-12, 10.0, samples), -rng.uniform(1.0 + 1e-12, 10.0, samples)])
    support_ok = bool(np.all(filt.eval(outside) == 0))

    t = rng.uniform(-1.0, 1.0, samples)
    parity_error = float(np.max(np.abs(filt.eval(-t) - np.conj(filt.eval(t)))))

    def excess(s: float) -> float:
        value = filt.eval(np.array([s, -s]))
        return float(np.abs(value - filt.kappa).sum()) / s

    partials = []
    for cutoff in (1e-2, 1e-4, 1e-6, 1e-8):
        value, _ = integrate.quad(excess, cutoff, filt.support_radius, epsabs=tol, limit=400,
                                  points=[cutoff * 10] if cutoff * 10 < filt.support_radius else None)
        partials.append((cutoff, value))
    growth = abs(partials[-1][1] - partials[-2][1])
    l1_bounded = growth <= 1e-3 * max(1.0, abs(partials[-1][1]))

    logger.debug(f"filter {filt.name}: support_ok={support_ok}, parity={parity_error:.1e}, L1 growth={growth:.1e}")
    return FilterValidation(
        filter_name=filt.name,
        support_ok=support_ok,
        parity_max_error=parity_error,
        l1_partial_integrals=partials,
        l1_bounded=l1_bounded,
    )
