"""
Principal-value transform G(f)(x) = (i/2pi) pv int e^{-itx} f(t) dt / t
Evaluates filter-weighted integrands on [-T, T] with the t=0 pole removed through the sine integral
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from bebound.config import get_settings, resolve_tol
from bebound.errors import DomainError, QuadratureError, SymmetryError

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]

# Kronrod 15-point rule with its embedded 7-point Gauss rule (QUADPACK qk15 constants)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
])
_WGK_CENTER = 0.209482141084727828012999174891714
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
])
_WG_CENTER = 0.417959183673469387755102040816327

GK_NODES = np.concatenate([-_XGK, [0.0], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK, [_WGK_CENTER], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG
GAUSS_WEIGHTS[7] = _WG_CENTER
GAUSS_WEIGHTS[[13, 11, 9]] = _WG

_SI_SERIES_MAX = 2.0
_CF_EPS = 1e-16
_CF_MAXIT = 1000
_FPMIN = 1e-300


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    imag_residual: float
    abs_error_estimate: float
    subdivisions: int

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            imag_residual=self.imag_residual + other.imag_residual,
            abs_error_estimate=self.abs_error_estimate + other.abs_error_estimate,
            subdivisions=self.subdivisions + other.subdivisions,
        )


def _si_series(t: float) -> float:
    term = t
    total = t
    n = 0
    while abs(term) > 1e-18 * max(abs(total), 1e-300):
        n += 1
        term *= -t * t / ((2 * n) * (2 * n + 1))
        total += term / (2 * n + 1)
    return total


def _si_continued_fraction(t: float) -> float:
    # E1(it) by modified Lentz; Si(t) = pi/2 + Im E1(it)
    b = complex(1.0, t)
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(2, _CF_MAXIT):
        a = -float((i - 1) ** 2)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < _CF_EPS:
            break
    else:
        raise QuadratureError(f"sine integral continued fraction did not converge at x={t}")
    h *= cmath.exp(complex(0.0, -t))
    return math.pi / 2 + h.imag


def _sine_integral_scalar(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        if math.isnan(x):
            raise DomainError("sine_integral requires a finite argument")
        return math.copysign(math.pi / 2, x)
    t = abs(x)
    if t == 0.0:
        return 0.0
    value = _si_series(t) if t <= _SI_SERIES_MAX else _si_continued_fraction(t)
    return math.copysign(value, x)


def sine_integral(x):
    """
    Si(x) = int_0^x sin(u)/u du

    Power series for |x| <= 2, continued fraction for the auxiliary functions above.
    Accepts scalars or arrays.
    """
    if np.ndim(x) == 0:
        return _sine_integral_scalar(x)
    arr = np.asarray(x, dtype=float)
    return np.array([_sine_integral_scalar(v) for v in arr.ravel()]).reshape(arr.shape)


def _panel_rule(lefts: np.ndarray, rights: np.ndarray, integrand: ArrayFn):
    """Kronrod and Gauss sums of a complex integrand on each panel."""
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    nodes = mid[:, None] + half[:, None] * GK_NODES[None, :]
    values = integrand(nodes.ravel()).reshape(nodes.shape)
    kronrod = (values @ GK_WEIGHTS) * half
    gauss = (values @ GAUSS_WEIGHTS) * half
    return kronrod, gauss


def _initial_edges(T: float, x: float) -> np.ndarray:
    width = min(math.pi / (4.0 * (abs(x) + 1.0)), T / 16.0)
    count = max(1, int(math.ceil(T / width)))
    return np.linspace(0.0, T, count + 1)


def g_transform(
    filter_part: ArrayFn,
    weight: ArrayFn,
    T: float,
    x: float,
    tol: Optional[float] = None,
    max_subdivisions: Optional[int] = None,
) -> QuadratureResult:
    """
    Evaluate G(M_j(./T) h)(x) for a Hermitian-symmetric product M_j(t/T) h(t).

    filter_part is the filter component on [-1, 1] (pass i*M_2 to obtain i*G(M_2 ...));
    weight is the c.f.-derived factor h. The constant kappa_eff = Re M_j(0) h(0) is split
    off and integrated exactly as kappa_eff * Si(Tx) / pi; the remainder is folded onto
    (0, T] and integrated with adaptive Gauss-Kronrod panels no wider than
    min(pi / (4(|x|+1)), T/16).
    """
    if not T > 0 or not math.isfinite(T):
        raise DomainError(f"T must be a positive finite number, got {T}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    tol = resolve_tol(tol)
    if max_subdivisions is None:
        max_subdivisions = get_settings().max_subdivisions

    zero = np.zeros(1)
    kappa_eff = float(np.real(np.asarray(filter_part(zero)) * np.asarray(weight(zero)))[0])

    def product(t: np.ndarray) -> np.ndarray:
        return np.asarray(filter_part(t / T), dtype=complex) * np.asarray(weight(t), dtype=complex)

    def folded(t: np.ndarray) -> np.ndarray:
        both = product(np.concatenate([t, -t]))
        plus, minus = both[: t.size] - kappa_eff, both[t.size:] - kappa_eff
        phase = np.exp(-1j * t * x)
        return (phase * plus - np.conj(phase) * minus) / t

    edges = _initial_edges(T, x)
    lefts, rights = edges[:-1], edges[1:]
    kronrod, gauss = _panel_rule(lefts, rights, folded)

    done_left, done_k, done_err_im, done_err_re = [], [], [], []
    total_err = math.inf
    passes = 0
    while True:
        err_im = np.abs(kronrod.imag - gauss.imag)
        err_re = np.abs(kronrod.real - gauss.real)
        total_err = (math.fsum(done_err_im) + float(err_im.sum())) / (2 * math.pi)
        if total_err <= tol:
            break

        share = 2 * math.pi * tol * (rights - lefts) / T
        split = err_im > share
        if not split.any():
            split[np.argmax(err_im)] = True

        keep = ~split
        done_left.extend(lefts[keep].tolist())
        done_k.extend(kronrod[keep].tolist())
        done_err_im.extend(err_im[keep].tolist())
        done_err_re.extend(err_re[keep].tolist())

        panel_count = len(done_left) + 2 * int(split.sum())
        if panel_count > max_subdivisions:
            raise QuadratureError(
                f"G transform at x={x}, T={T} did not converge: error {total_err:.3e} > tol {tol:.1e} "
                f"with {panel_count} panels",
                abs_error=total_err,
                tol=tol,
            )

        mids = 0.5 * (lefts[split] + rights[split])
        lefts = np.concatenate([lefts[split], mids])
        rights = np.concatenate([mids, rights[split]])
        kronrod, gauss = _panel_rule(lefts, rights, folded)
        passes += 1

    done_left.extend(lefts.tolist())
    done_k.extend(kronrod.tolist())
    done_err_re.extend(np.abs(kronrod.real - gauss.real).tolist())

    # fixed left-to-right summation order keeps results bit-reproducible
    order = np.argsort(np.asarray(done_left), kind="stable")
    panel_values = np.asarray(done_k, dtype=complex)[order]
    im_sum = math.fsum(panel_values.imag)
    re_sum = math.fsum(panel_values.real)

    value = kappa_eff * sine_integral(T * x) / math.pi - im_sum / (2 * math.pi)
    imag_residual = abs(re_sum) / (2 * math.pi)
    residual_budget = tol + math.fsum(done_err_re) / (2 * math.pi)
    logger.debug(f"G transform x={x} T={T}: {len(done_left)} panels, {passes} refinement passes, err={total_err:.2e}")

    if imag_residual > residual_budget:
        raise SymmetryError(
            f"imaginary residual {imag_residual:.3e} exceeds {residual_budget:.1e}; integrand is not Hermitian",
            abs_error=imag_residual,
            tol=tol,
        )

    return QuadratureResult(
        value=value,
        imag_residual=imag_residual,
        abs_error_estimate=total_err,
        subdivisions=len(done_left),
    )
