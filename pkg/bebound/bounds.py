"""
Bound producers
Prawitz CDF sandwiches, two-sided tail-moment bounds, the surrogate correction and the scalar
helpers (psi, Rosenthal, small-n Nagaev, |h'''|) used to audit the nonuniform Berry-Esseen chain
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from bebound.cf_core import (
    CharFn,
    DiscreteDist,
    NormalLaw,
    abs_w_plus_v,
    char_fn_of,
    choose_alpha_nodes,
    dilation_kernel,
    dilation_average,
    law_of,
    make_standardized_iid_sum,
    signed_w_minus_v,
    signed_w_plus_v,
)
from bebound.config import get_settings, resolve_tol
from bebound.errors import DomainError, QuadratureError
from bebound.filters import PRAWITZ, SmoothingFilter, c2p_constant
from bebound.oracle import CONSTANTS, X0, normal_sf
from bebound.pv_transform import QuadratureResult, g_transform
from bebound.reports import (
    BoundParams,
    BoundReport,
    ConstantEntry,
    DerivationStep,
    ERatReport,
    FixCorrection,
    NagaevCheck,
)

logger = logging.getLogger(__name__)

NORMAL_ABS_THIRD = 2.0 * math.sqrt(2.0 / math.pi)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
DEFAULT_C_T = 1.0 / math.sqrt(3.0)
SMALL_N_RATIO = 2.0 / 3.0
C_NU_SMALL_N = 4.5
C_U_IID = 0.4748

ArrayFn = Callable[[np.ndarray], np.ndarray]
Source = Union[CharFn, DiscreteDist, NormalLaw]
R = TypeVar("R")


def _check_T(T: float) -> None:
    if not T > 0 or not math.isfinite(T):
        raise DomainError(f"T must be a positive finite number, got {T}")


def default_T(beta3: float, n: int, c_T: float = DEFAULT_C_T) -> float:
    """T = c_T sqrt(n) / beta3."""
    if not c_T > 0:
        raise DomainError(f"c_T must be positive, got {c_T}")
    if not beta3 > 0 or n < 1:
        raise DomainError(f"need beta3 > 0 and n >= 1, got beta3={beta3}, n={n}")
    return c_T * math.sqrt(n) / beta3


def resolve_T(T: Optional[float], c_T: Optional[float], beta3: float, n: int) -> float:
    """An explicit T, or T = c_T sqrt(n)/beta3 with c_T defaulting to 1/sqrt(3)."""
    if T is not None and c_T is not None:
        raise DomainError("T and c_T are mutually exclusive")
    if T is not None:
        _check_T(T)
        return float(T)
    return default_T(beta3, n, DEFAULT_C_T if c_T is None else c_T)


# ---------------------------------------------------------------------------
# CDF sandwich
# ---------------------------------------------------------------------------

def _as_array_fn(cf) -> ArrayFn:
    if isinstance(cf, CharFn):
        return cf.func
    return lambda t: np.asarray(cf(np.asarray(t, dtype=float)), dtype=complex)


def _prawitz_pair(weight: ArrayFn, x: float, T: float, tol: float,
                  filt: SmoothingFilter) -> Tuple[QuadratureResult, QuadratureResult]:
    lower = g_transform(filt.reflected(), weight, T, x, tol=tol)
    upper = g_transform(filt.eval, weight, T, x, tol=tol)
    return lower, upper


def cdf_bounds(cf, total_mass: float, x: float, T: float, tol: Optional[float] = None,
               filt: SmoothingFilter = PRAWITZ) -> BoundReport:
    """
    Prawitz sandwich for a scaled d.f. F with Fourier-Stieltjes transform cf and mass total_mass:

        total_mass/2 + G(M_T(-.) f)(x) <= F(x-) <= F(x+) <= total_mass/2 + G(M_T(.) f)(x)

    The reported lower/upper are widened by their quadrature error estimates. When cf carries
    an exact law, F(x-) and F(x+) are attached and containment is recorded.
    """
    _check_T(T)
    tol = resolve_tol(tol)
    if isinstance(cf, (DiscreteDist, NormalLaw)):
        cf = cf.char_fn()
    if total_mass < 0:
        raise DomainError(f"total mass must be nonnegative, got {total_mass}")
    weight = _as_array_fn(cf)
    at_zero = complex(np.asarray(weight(np.zeros(1)))[0])
    if abs(at_zero - total_mass) > 1e-9 * max(1.0, total_mass):
        raise DomainError(f"transform at 0 is {at_zero}, expected the total mass {total_mass}")

    lower, upper = _prawitz_pair(weight, x, T, tol, filt)
    error = lower.abs_error_estimate + upper.abs_error_estimate
    report = BoundReport(
        kind="cdf_sandwich",
        x=x,
        T=T,
        lower=total_mass / 2 + lower.value - lower.abs_error_estimate,
        upper=total_mass / 2 + upper.value + upper.abs_error_estimate,
        quadrature_error=error,
        params=BoundParams(filter=filt.name, tol=tol, dist=getattr(cf, "label", None)),
    )
    law = cf.law if isinstance(cf, CharFn) else None
    if law is not None:
        report = report.check({"cdf_left": law.cdf_left(x), "cdf": law.cdf(x)})
    return report


def cdf_bounds_by_reflection(cf: CharFn, total_mass: float, x: float, T: float, tol: Optional[float] = None,
                             filt: SmoothingFilter = PRAWITZ) -> BoundReport:
    """Lower bound as total_mass minus the upper bound for -X at -x; upper bound as in cdf_bounds."""
    _check_T(T)
    tol = resolve_tol(tol)
    if isinstance(cf, (DiscreteDist, NormalLaw)):
        cf = cf.char_fn()
    weight = _as_array_fn(cf)
    mirrored = lambda t: weight(-np.asarray(t, dtype=float))
    upper_of_negated = g_transform(filt.eval, mirrored, T, -x, tol=tol)
    upper = g_transform(filt.eval, weight, T, x, tol=tol)
    lower_value = total_mass / 2 - upper_of_negated.value
    report = BoundReport(
        kind="cdf_sandwich",
        x=x,
        T=T,
        lower=lower_value - upper_of_negated.abs_error_estimate,
        upper=total_mass / 2 + upper.value + upper.abs_error_estimate,
        quadrature_error=upper_of_negated.abs_error_estimate + upper.abs_error_estimate,
        params=BoundParams(filter=filt.name, tol=tol, dist=getattr(cf, "label", None)),
        notes=["lower bound obtained by reflection X -> -X"],
    )
    law = cf.law if isinstance(cf, CharFn) else None
    if law is not None:
        report = report.check({"cdf_left": law.cdf_left(x), "cdf": law.cdf(x)})
    return report


# ---------------------------------------------------------------------------
# Tail-moment sandwich
# ---------------------------------------------------------------------------

def _default_p(k: int, filt: SmoothingFilter) -> float:
    return min(filt.p_max, float(k - 1)) if k > 1 else 0.5


def _tail_values(law, k: int, x: float) -> dict:
    scale = x ** k
    return {"tail_ge": scale * law.tail_ge(x), "tail_gt": scale * law.tail_gt(x)}


def tail_moment_bound(source: Source, k: int, x: float, T: float, mode: str = "exact_abs",
                      p: Optional[float] = None, tol: Optional[float] = None,
                      filt: SmoothingFilter = PRAWITZ) -> BoundReport:
    """
    Two-sided bound on x^k P(X >= x) (equally x^k P(X > x)):

        |x^k P(X >= x) - center| <= radius,  center = G(M1_T E X^k (W - V))(x)

    exact_abs: radius = i G(M2_T E|X|^k (W + V))(x), from exact atom sums (discrete laws only).
    surrogate: radius = |i G(M2_T E X^k (W + V))(x)| plus the correction for swapping E|X|^k
    with E X^k; E X^k (W + V) comes from the c.f. derivative averaged over the dilation.
    """
    if x < 0 or not math.isfinite(x):
        raise DomainError(f"x must be a nonnegative finite number, got {x}")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    _check_T(T)
    tol = resolve_tol(tol)
    mode = mode.replace("-", "_")
    if mode not in ("exact_abs", "surrogate"):
        raise DomainError(f"mode must be exact_abs or surrogate, got '{mode}'")

    cf = char_fn_of(source)
    law = law_of(source)
    if k > cf.k_max:
        raise DomainError(f"k={k} exceeds the derivative order {cf.k_max} available for {cf.label}")
    discrete = isinstance(law, DiscreteDist)
    notes: List[str] = []

    alpha_gap = 0.0
    if discrete:
        minus = lambda t: signed_w_minus_v(law, k, t)
    else:
        n_nodes, alpha_gap = choose_alpha_nodes(cf, k, T, tol)
        notes.append(f"alpha rule: {n_nodes} Gauss-Legendre nodes")
        minus = lambda t: dilation_average(cf, k, t, sign=-1, n_nodes=n_nodes)

    center = g_transform(filt.component(1), minus, T, x, tol=tol)

    correction = 0.0
    if mode == "exact_abs":
        if not discrete:
            raise DomainError("exact_abs mode needs a discrete law for the E|X|^k (W + V) atom sums")
        radius_result = g_transform(filt.component(2), lambda t: abs_w_plus_v(law, k, t), T, x, tol=tol)
        radius = radius_result.value
    else:
        p = _default_p(k, filt) if p is None else p
        if discrete:
            plus = lambda t: signed_w_plus_v(law, k, t)
        else:
            plus = lambda t: dilation_average(cf, k, t, sign=1, n_nodes=n_nodes)
        radius_result = g_transform(filt.component(2), plus, T, x, tol=tol)
        correction = _correction_terms(law, cf, k, p, x, T, filt)[0]
        radius = abs(radius_result.value) + correction
        notes.append(f"surrogate correction {correction:.6g} with p={p:g}")

    # the alpha rule error enters G through int |M2(t/T)/t| dt / 2pi <= 1/2
    error = center.abs_error_estimate + radius_result.abs_error_estimate + 0.5 * alpha_gap
    clamped = False
    if radius < 0:
        if radius < -(tol + error):
            raise QuadratureError(
                f"negative radius {radius:.3e} at x={x}, T={T} exceeds the tolerance", abs_error=error, tol=tol
            )
        logger.warning(f"radius {radius:.3e} at x={x}, T={T} clamped to 0")
        radius = 0.0
        clamped = True

    report = BoundReport(
        kind="tail_moment",
        x=x,
        T=T,
        k=int(k),
        center=center.value,
        radius=radius,
        lower=center.value - radius - error,
        upper=center.value + radius + error,
        quadrature_error=error,
        clamped=clamped,
        params=BoundParams(filter=filt.name, tol=tol, mode=mode, p=p if mode == "surrogate" else None,
                           dist=cf.label),
        notes=notes,
    )
    if law is not None:
        report = report.check(_tail_values(law, k, x))
    return report


def positive_part_bounds(dist: DiscreteDist, k: int, x: float, T: float, tol: Optional[float] = None,
                         filt: SmoothingFilter = PRAWITZ) -> BoundReport:
    """
    Bounds on x^k P(X_+ > x) and x^k P(X_+ >= x) for x > 0 from the scaled d.f.'s F and G of X_+:
    x^k P(X_+ > x) = G(x) - F(x), so Prawitz sandwiches of G and F combine into
    lower_G - upper_F <= L <= upper_G - lower_F.
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    _check_T(T)
    tol = resolve_tol(tol)
    positive = dist.positive_part()
    weights = positive.ps * positive.xs ** k
    mass = math.fsum(weights)

    def f_hat(t: np.ndarray) -> np.ndarray:
        return positive._phases(t) @ weights

    def g_hat(t: np.ndarray) -> np.ndarray:
        z = 1j * np.multiply.outer(np.asarray(t, dtype=float), positive.xs)
        return dilation_kernel(z, k) @ weights

    f_lower, f_upper = _prawitz_pair(f_hat, x, T, tol, filt)
    g_lower, g_upper = _prawitz_pair(g_hat, x, T, tol, filt)
    error = sum(r.abs_error_estimate for r in (f_lower, f_upper, g_lower, g_upper))
    # the mass/2 terms cancel in G - F
    report = BoundReport(
        kind="positive_part",
        x=x,
        T=T,
        k=int(k),
        lower=g_lower.value - f_upper.value - error,
        upper=g_upper.value - f_lower.value + error,
        quadrature_error=error,
        params=BoundParams(filter=filt.name, tol=tol, dist=positive.label),
        notes=[f"E X_+^k = {mass:.12g}"],
    )
    return report.check(_tail_values(positive, k, x))


# ---------------------------------------------------------------------------
# Surrogate correction
# ---------------------------------------------------------------------------

def _coefficient(k: int, p: float, filt: SmoothingFilter) -> float:
    if not 0 < p < k:
        raise DomainError(f"p must lie in (0, k) = (0, {k}), got {p}")
    c2p = c2p_constant(p, filt).value
    return c2p / math.pi * (2 * k - p) / (k - p)


def _correction_terms(law, cf: Optional[CharFn], k: int, p: float, x: float, T: float,
                      filt: SmoothingFilter) -> Tuple[float, float, float]:
    """(exact_term, moment_min_term, coefficient); x = 0 is allowed here."""
    coefficient = _coefficient(k, p, filt)
    scale = coefficient * T ** (-p)
    if law is not None:
        exact = law.neg_ratio_moment(k, p, x)
        lower_order = law.neg_abs_moment(k - p)
        top = law.neg_abs_moment(k)
    elif cf is not None and cf.moments is not None and (k - p) in cf.moments.negative_abs:
        lower_order = cf.moments.negative_abs[k - p]
        top = cf.moments.negative_abs[k]
        exact = min(lower_order, top / x ** p) if x > 0 else lower_order
    else:
        raise DomainError("the surrogate correction needs E|X_-|^k data: supply a law or moment data")
    moment_min = min(lower_order, top / x ** p) if x > 0 else lower_order
    return scale * exact, scale * moment_min, coefficient


def fix_correction(dist: Union[DiscreteDist, NormalLaw], k: int, p: float, x: float, T: float,
                   filt: SmoothingFilter = PRAWITZ) -> FixCorrection:
    """
    Bound on the error from replacing E|X|^k (W + V) with E X^k (W + V) in the radius:

        exact_term      = (c_{2,p}/pi) (2k - p)/(k - p) E[|X_-|^k / (|X_-| + x)^p] T^{-p}
        moment_min_term = (c_{2,p}/pi) (2k - p)/(k - p) min(E|X_-|^{k-p}, E|X_-|^k / x^p) T^{-p}
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    _check_T(T)
    exact, moment_min, coefficient = _correction_terms(dist, None, k, p, x, T, filt)
    return FixCorrection(k=int(k), p=p, x=x, T=T, coefficient=coefficient,
                         exact_term=exact, moment_min_term=moment_min)


def surrogate_swap_error(dist: DiscreteDist, k: int, x: float, T: float, tol: Optional[float] = None,
                         filt: SmoothingFilter = PRAWITZ) -> Tuple[float, float]:
    """
    |i G(M2_T E|X|^k (W + V))(x) - i G(M2_T E X^k (W + V))(x)| and its quadrature error,
    taken as one transform of the difference.
    """
    _check_T(T)
    tol = resolve_tol(tol)
    difference = lambda t: abs_w_plus_v(dist, k, t) - signed_w_plus_v(dist, k, t)
    result = g_transform(filt.component(2), difference, T, x, tol=tol)
    return abs(result.value), result.abs_error_estimate


# ---------------------------------------------------------------------------
# Moment chains
# ---------------------------------------------------------------------------

def psi(x: float, tol: Optional[float] = None) -> float:
    """psi(x) = x^2 E|Z_-|^3 / (|Z_-| + x)^2, increasing from 0 to sqrt(2/pi)."""
    return psi_with_error(x, tol)[0]


def psi_with_error(x: float, tol: Optional[float] = None) -> Tuple[float, float]:
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"psi needs a positive finite x, got {x}")
    tol = resolve_tol(tol)
    return NormalLaw().scaled_neg_ratio_moment(3, 2, x, tol=tol)


def tyurin_envelope(x: float, ratio: float, psi_bound: float = 0.8) -> float:
    """(psi_bound + beta3/sqrt(n)) / x^2 with psi bounded by 0.8."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    return (psi_bound + ratio) / (x * x)


def rosenthal_ub(beta3: float, n: int) -> float:
    """E|S/sqrt(n)|^3 <= 2 + beta3/sqrt(n); compare E|Z|^3 = 2 sqrt(2/pi)."""
    if beta3 < 1.0 - 1e-12:
        raise DomainError(f"beta3 must be at least 1 for a standardized summand, got {beta3}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return 2.0 + beta3 / math.sqrt(n)


def e_rat_bounds(dist: DiscreteDist, x: float, n: int = 1, standardize: bool = True,
                 tol: Optional[float] = None) -> ERatReport:
    """
    The chain for E[|X_-|^3 / (|X_-| + x)^2], X = S/sqrt(n):

        exact <= min(E|X_-|, E|X_-|^3/x^2) <= min(1, E|X|^3/x^2) <= min(1, (2 + beta3/sqrt(n))/x^2)

    and exact <= (psi(x) + beta3/sqrt(n))/x^2, the last one resting on an external theorem.
    With standardize=False the distribution is taken as X itself and beta3 = E|X|^3.
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if standardize:
        beta3 = dist.standardized().beta3
        law = make_standardized_iid_sum(dist, n).law
    else:
        beta3 = dist.beta3
        law = dist
    ratio = beta3 / math.sqrt(n)
    x2 = x * x
    abs_third = law.abs_moment(3)
    report = ERatReport(
        x=x,
        n=int(n),
        beta3=beta3,
        exact=law.neg_ratio_moment(3, 2, x),
        chain1=min(law.neg_abs_moment(1), law.neg_abs_moment(3) / x2),
        chain2=min(1.0, abs_third / x2),
        chain3=min(1.0, (2.0 + ratio) / x2),
        tyurin_ub=(psi(x, tol) + ratio) / x2,
        chain2_symmetric=min(1.0, abs_third / (2 * x2)) if law.is_symmetric else None,
    )
    logger.debug(f"E-ratio chain at x={x}: exact={report.exact:.6g}, chain1={report.chain1:.6g}")
    return report


# ---------------------------------------------------------------------------
# Small-n Nagaev audit
# ---------------------------------------------------------------------------

def _step(claim: str, lhs: float, rhs: float) -> DerivationStep:
    return DerivationStep(claim=claim, lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs * (1 + 1e-12) + 1e-15))


def small_n_nagaev(beta3: float, n: int, x: float, law: Optional[DiscreteDist] = None) -> NagaevCheck:
    """
    Delta(x) <= 4.5 beta3 / ((1 + x^3) sqrt(n)) when beta3/sqrt(n) >= 2/3.

    The derivation record lists the Markov-Rosenthal chain and the split at x0: the uniform
    bound 0.4748 r carries x <= x0, Markov with Rosenthal carries x > x0. With the law of
    X = S/sqrt(n), the Markov step is evaluated at x from exact tails.
    """
    if beta3 < 1.0 - 1e-12:
        raise DomainError(f"beta3 must be at least 1, got {beta3}")
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    ratio = beta3 / math.sqrt(n)
    cube = x ** 3
    rosenthal = rosenthal_ub(beta3, n)
    steps: List[DerivationStep] = []

    if law is not None:
        abs_third = law.abs_moment(3)
        worst_tail = max(law.tail_gt(x), normal_sf(x))
        steps.append(_step("(1+x^3) max(P(X>x), P(Z>x)) <= 1 + max(E|X|^3, E|Z|^3)",
                           (1 + cube) * worst_tail, 1 + max(abs_third, NORMAL_ABS_THIRD)))
        steps.append(_step("E|X|^3 <= 2 + beta3/sqrt(n)", abs_third, rosenthal))
    steps.append(_step("1 + max(E|X|^3, E|Z|^3) <= 3 + beta3/sqrt(n)",
                       1 + max(NORMAL_ABS_THIRD, law.abs_moment(3) if law is not None else rosenthal - 1),
                       1 + rosenthal))
    steps.append(_step("3 + beta3/sqrt(n) <= 4.5 beta3/sqrt(n)", 3 + ratio, C_NU_SMALL_N * ratio))
    steps.append(_step("x <= x0: (1 + x0^3) 0.4748 beta3/sqrt(n) <= 4.5 beta3/sqrt(n)",
                       (1 + X0 ** 3) * C_U_IID * ratio, C_NU_SMALL_N * ratio))
    steps.append(_step("x > x0: (1 + x0^-3)(2 + beta3/sqrt(n)) <= 4.5 beta3/sqrt(n)",
                       (1 + X0 ** -3) * rosenthal, C_NU_SMALL_N * ratio))
    steps.append(_step("x > x0: (1 + x0^-3) sqrt(2/pi) <= 4.5 beta3/sqrt(n)",
                       (1 + X0 ** -3) * SQRT_2_OVER_PI, C_NU_SMALL_N * ratio))

    return NagaevCheck(
        beta3=beta3,
        n=int(n),
        x=x,
        ratio=ratio,
        bound=C_NU_SMALL_N * ratio / (1 + cube),
        applicable=ratio >= SMALL_N_RATIO,
        derivation=steps,
    )


def nagaev_audit(base: DiscreteDist, n: int, c_nu: float = C_NU_SMALL_N,
                 z_grid: Optional[Sequence[float]] = None) -> NagaevCheck:
    """Compare the exact normalized Delta profile with c_nu; the check passes vacuously outside the small-n case."""
    from bebound.oracle import delta_profile

    if not isinstance(base, DiscreteDist):
        raise DomainError(f"the Nagaev audit needs a discrete distribution, got '{base.label}'")
    profile = delta_profile(base, n, z_grid)
    law = make_standardized_iid_sum(base, n).law
    check = small_n_nagaev(profile.beta3, n, profile.argmax_z, law=law)
    passed = profile.max_normalized <= c_nu or not check.applicable
    return check.model_copy(update={"observed": profile.max_normalized, "passed": passed})


# ---------------------------------------------------------------------------
# |h'''| check
# ---------------------------------------------------------------------------

def _h(v: np.ndarray, x: float) -> np.ndarray:
    w = np.maximum(-np.asarray(v, dtype=float), 0.0)
    return w ** 3 / (w + x) ** 2


def h_triple_prime_exact(x: float, v) -> np.ndarray:
    """Closed form of h''' for h(v) = |v_-|^3/(|v_-| + x)^2 at v < 0 (0 for v > 0)."""
    v = np.asarray(v, dtype=float)
    w = np.maximum(-v, 0.0)
    # h = w - 2x + 3x^2/(w+x) - x^3/(w+x)^2, and d/dv = -d/dw
    value = 18 * x * x / (w + x) ** 4 - 24 * x ** 3 / (w + x) ** 5
    return np.where(v < 0, value, 0.0)


def h_triple_prime_check(x: float, u_grid: Iterable[float]) -> float:
    """max over the grid of |h'''(u)| x^2 / 6, h''' from a 4th-order central difference."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    u = np.asarray(list(u_grid), dtype=float)
    if u.size == 0:
        raise DomainError("u grid is empty")
    if np.any(u == 0):
        raise DomainError("h''' is undefined at u = 0; remove 0 from the grid")
    h = 0.05 * np.minimum(np.abs(u), x)
    third = (_h(u - 3 * h, x) - 8 * _h(u - 2 * h, x) + 13 * _h(u - h, x)
             - 13 * _h(u + h, x) + 8 * _h(u + 2 * h, x) - _h(u + 3 * h, x)) / (8 * h ** 3)
    return float(np.max(np.abs(third)) * x * x / 6.0)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

def constants_table(tol: Optional[float] = None) -> List[ConstantEntry]:
    """Filter constants, correction coefficients, psi samples and the literature table, with provenance."""
    c22 = c2p_constant(2.0)
    c21 = c2p_constant(1.0)
    entries = [
        ConstantEntry(name="c22", value=c22.value, provenance="closed form", description="sup u^2 |N2-hat(u)| = 4 pi"),
        ConstantEntry(name="c21", value=c21.value, provenance="numeric",
                      description=f"sup |u| |N2-hat(u)|, attained at u = {c21.argmax_u:.6f}"),
        ConstantEntry(name="coef_k3_p2", value=_coefficient(3, 2.0, PRAWITZ), provenance="closed form",
                      description="(c22/pi)(2k-p)/(k-p) for k=3, p=2"),
        ConstantEntry(name="coef_k3_p1", value=_coefficient(3, 1.0, PRAWITZ), provenance="numeric",
                      description="(c21/pi)(2k-p)/(k-p) for k=3, p=1; at most 3.6231"),
        ConstantEntry(name="tyurin_envelope_x0", value=tyurin_envelope(X0, SMALL_N_RATIO), provenance="closed form",
                      description="(0.8 + 2/3)/x0^2"),
    ]
    for x, name in ((1.0, "psi_1"), (2.0, "psi_2"), (3.5, "psi_3_5"), (5.0, "psi_5")):
        entries.append(ConstantEntry(name=name, value=psi(x, tol), provenance="numeric",
                                     description=f"psi({x:g}) by quadrature"))
    for name, constant in CONSTANTS.items():
        entries.append(ConstantEntry(name=name, value=constant.value, provenance=constant.provenance,
                                     description=constant.description))
    return entries


# ---------------------------------------------------------------------------
# Grid dispatch
# ---------------------------------------------------------------------------

def evaluate_grid(func: Callable[[float], R], xs: Sequence[float], max_workers: Optional[int] = None) -> List[R]:
    """Evaluate func over xs in a thread pool; results keep grid order."""
    workers = max_workers or get_settings().max_workers
    if workers <= 1 or len(xs) <= 1:
        return [func(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, xs))
