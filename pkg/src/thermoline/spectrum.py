r"""Observable line shapes of a thermal gas of monochromatic radiators.

Frequencies are ratios ``x = omega / omega0``. The intensity spectrum is in
units of ``I0' / omega0`` and the counting distribution in ``1 / omega0``;
both integrate to one over ``(0, inf)``.

Both shapes share the kernel

.. math::
    \exp\left[-\frac{\alpha}{2}\left(x + \frac{1}{x}\right)\right],

whose Mellin moments are :math:`\int_0^\infty x^{\nu-1} e^{\cdots} dx =
2 K_\nu(\alpha)`. That identity turns every weighted moment into a ratio of
Bessel functions, and it is what :func:`spectral_moment` returns.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .errors import DomainError, UnsupportedOrderError
from .juttner import EnsembleParams
from .numerics import integrate_adaptive
from .special_functions import MAX_ORDER, bessel_k, bessel_k_ratio


class SpectrumKind(str, enum.Enum):
    INTENSITY = "intensity"
    COUNTING = "counting"


# power of x multiplying the kernel
_KERNEL_POWER = {SpectrumKind.INTENSITY: 1, SpectrumKind.COUNTING: -3}


def _kind(kind):
    try:
        return SpectrumKind(kind)
    except ValueError:
        raise DomainError(f"unknown spectrum kind {kind!r}") from None


def _check_alpha(alpha):
    alpha = float(alpha)
    if not alpha > 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite and > 0, got {alpha!r}")
    return alpha


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)) or np.any(np.isinf(x)):
        raise DomainError("frequency ratio x must be finite and > 0")
    return x


def _log_kernel_excess(x, alpha):
    # (alpha/2)(x + 1/x) - alpha, written to stay exact near x = 1
    return 0.5 * alpha * (x - 1.0) ** 2 / x


def log_spectrum(x, alpha, kind="intensity"):
    """Natural log of the normalized spectral density of the given kind."""
    kind = _kind(kind)
    alpha = _check_alpha(alpha)
    x = _check_x(x)
    log_norm = -math.log(2.0) - math.log(bessel_k(2, alpha, scaled=True))
    return log_norm + _KERNEL_POWER[kind] * np.log(x) - _log_kernel_excess(x, alpha)


def intensity_spectrum(x, alpha):
    """Energy spectrum ``x exp[-(alpha/2)(x + 1/x)] / (2 K2(alpha))``.

    Finite (possibly zero) for any ``alpha``; use :func:`log_spectrum` when
    the far wings matter at large ``alpha``.
    """
    return np.exp(log_spectrum(x, alpha, SpectrumKind.INTENSITY))


def counting_spectrum(x, alpha):
    """Wave-counting distribution ``x^-3 exp[-(alpha/2)(x + 1/x)] / (2 K2(alpha))``."""
    return np.exp(log_spectrum(x, alpha, SpectrumKind.COUNTING))


def spectrum(x, alpha, kind="intensity"):
    return np.exp(log_spectrum(x, alpha, kind))


def high_temperature_limit(x, alpha):
    """Leading small-``alpha`` form of the intensity spectrum, ``(alpha/2)^2 x``."""
    return (0.5 * alpha) ** 2 * np.asarray(x, dtype=float)


def line_center(alpha):
    """Frequency ratio at the maximum of the intensity spectrum."""
    alpha = _check_alpha(alpha)
    inv = 1.0 / alpha
    return inv + math.hypot(1.0, inv)


def line_shift(alpha):
    """``line_center(alpha) - 1`` without cancellation at large ``alpha``."""
    alpha = _check_alpha(alpha)
    inv = 1.0 / alpha
    root = math.hypot(1.0, inv)
    return inv + inv * inv / (root + 1.0)


def kernel_breakpoints(alpha):
    """Break points that bracket the bulk of the line for quadrature meshes."""
    alpha = _check_alpha(alpha)
    width = 1.0 / math.sqrt(alpha)
    centre = line_center(alpha)
    offsets = np.array([-16, -8, -4, -2, -1, 0, 1, 2, 4, 8, 16, 32], dtype=float)
    pts = centre + width * offsets
    pts = np.concatenate([pts, 1.0 + width * offsets])
    return sorted({float(p) for p in pts if p > 0})


# --- the beta-marginal route -------------------------------------------------

def _lower_speed(x, squared):
    b = float(abs(x * x - 1.0) / (x * x + 1.0))
    return b * b if squared else b


def marginal_beta_integral(x, alpha, squared_lower_limit=False, rel_tol=1e-12):
    r"""Scaled speed integral left after averaging over directions.

    Returns :math:`\alpha\, e^{\alpha\gamma_b}\int_b^1 \beta\gamma^3
    e^{-\alpha\gamma}\,d\beta`, where ``b`` is the lowest speed able to reach
    ratio ``x`` and ``gamma_b`` its Lorentz factor. Substituting
    ``u = gamma`` shows this equals one exactly; evaluating it numerically is
    an independent check of that step.

    With ``squared_lower_limit`` the lower limit is ``b**2`` instead of ``b``.
    """
    alpha = _check_alpha(alpha)
    x = float(_check_x(x))
    b = _lower_speed(x, squared_lower_limit)
    g_b = 1.0 / math.sqrt((1.0 - b) * (1.0 + b))

    def integrand(beta):
        out = np.zeros_like(beta)
        ok = beta < 1.0
        bt = beta[ok]
        g = 1.0 / np.sqrt((1.0 - bt) * (1.0 + bt))
        # gamma - gamma_b written as a difference of kinetic terms
        excess = (bt - b) * (bt + b) * g * g * g_b * g_b / (g + g_b)
        with np.errstate(over="ignore", invalid="ignore"):
            val = bt * g ** 3 * np.exp(-alpha * excess)
        out[ok] = np.where(np.isfinite(val), val, 0.0)
        return out

    span = 1.0 - b
    scales = np.logspace(-10, -0.3, 16)
    pts = [b + span * s for s in scales]
    pts += [p for p in (1.0 / math.sqrt(alpha), 3.0 / math.sqrt(alpha)) if b < p < 1.0]
    res = integrate_adaptive(integrand, b, 1.0, rel_tol=rel_tol, points=pts)
    return alpha * res.value, b, g_b


def marginal_spectrum_quadrature(x, alpha, squared_lower_limit=False, rel_tol=1e-12):
    """Intensity spectrum from numerical integration over the speed.

    Independent of the closed form: it integrates the direction-averaged
    Jüttner expression between the kinematic lower limit and one.
    """
    alpha = _check_alpha(alpha)
    xs = np.atleast_1d(_check_x(x))
    out = np.empty(xs.shape)
    log_k2s = math.log(bessel_k(2, alpha, scaled=True))
    for i, xi in enumerate(xs.flat):
        j, b, g_b = marginal_beta_integral(xi, alpha, squared_lower_limit, rel_tol)
        # x * alpha / (2 K2) * e^{-alpha gamma_b} * (j / alpha), with
        # K2 = K2s e^{-alpha}
        t_b = b * b * g_b * g_b / (1.0 + g_b)
        out.flat[i] = xi * j * math.exp(-alpha * t_b - log_k2s) / 2.0
    return out if np.ndim(x) else float(out[0])


# --- moments -----------------------------------------------------------------

def _moment_orders(kind, weight_exponent, order):
    base = _KERNEL_POWER[_kind(kind)] + 1
    num = base + order - weight_exponent
    den = base - weight_exponent
    if abs(num) > MAX_ORDER or abs(den) > MAX_ORDER:
        raise UnsupportedOrderError(
            f"moment needs Bessel orders {num} and {den}; supported |order| <= {MAX_ORDER}"
        )
    return num, den


def spectral_moment(alpha, kind="intensity", weight_exponent=0, order=1):
    """Weighted raw moment ``<x^order>`` of a spectrum under weight ``x^-weight_exponent``.

    Exact Bessel-ratio form ``K_{nu+order-p} / K_{nu-p}`` with ``nu = 2`` for
    the intensity spectrum and ``nu = -2`` for the counting distribution.
    ``weight_exponent = 4`` on the intensity spectrum is the
    ``(omega_d / omega)^4`` detector weighting and reproduces the counting
    mean.
    """
    alpha = _check_alpha(alpha)
    num, den = _moment_orders(kind, int(weight_exponent), int(order))
    return bessel_k_ratio(num, den, alpha)


def _weighted_integral(alpha, kind, power, rel_tol):
    alpha = _check_alpha(alpha)
    kind = _kind(kind)

    def f(x):
        x = np.asarray(x)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = x[pos] ** power * spectrum(x[pos], alpha, kind)
        return out

    return integrate_adaptive(f, 0.0, math.inf, rel_tol=rel_tol,
                              points=kernel_breakpoints(alpha)).value


def spectral_moment_quadrature(alpha, kind="intensity", weight_exponent=0, order=1,
                               rel_tol=1e-12):
    """Same moment as :func:`spectral_moment`, by direct quadrature."""
    num = _weighted_integral(alpha, kind, order - weight_exponent, rel_tol)
    den = _weighted_integral(alpha, kind, -weight_exponent, rel_tol)
    return num / den


def spectral_norm_quadrature(alpha, kind="intensity", rel_tol=1e-12):
    """Total area under the spectrum, by quadrature."""
    return _weighted_integral(alpha, kind, 0, rel_tol)


def spectral_variance(alpha):
    """Variance of ``x`` under the intensity spectrum, ``K4/K2 - (K3/K2)^2``."""
    alpha = _check_alpha(alpha)
    return bessel_k_ratio(4, 2, alpha) - bessel_k_ratio(3, 2, alpha) ** 2


def spectral_variance_quadrature(alpha, rel_tol=1e-12):
    """Central second moment of the intensity spectrum by quadrature."""
    alpha = _check_alpha(alpha)
    mean = spectral_moment_quadrature(alpha, "intensity", 0, 1, rel_tol)

    def f(x):
        x = np.asarray(x)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = (x[pos] - mean) ** 2 * intensity_spectrum(x[pos], alpha)
        return out

    pts = kernel_breakpoints(alpha) + [mean]
    var = integrate_adaptive(f, 0.0, math.inf, rel_tol=rel_tol, points=pts).value
    return var / spectral_norm_quadrature(alpha, "intensity", rel_tol)


@dataclass(frozen=True)
class WidthFit:
    alphas: tuple
    variances: tuple
    leading_coefficient: float
    next_coefficient: float
    loglog_slope: float


def fit_width_coefficient(alphas=(1e2, 1e3, 1e4)):
    """Fit ``variance = c / alpha + d / alpha^2`` and the log-log slope.

    Returns a :class:`WidthFit`; ``c`` is the coefficient to compare with any
    quoted asymptotic width law.
    """
    alphas = np.asarray(alphas, dtype=float)
    var = np.array([spectral_variance(a) for a in alphas])
    design = np.column_stack([1.0 / alphas, 1.0 / alphas ** 2])
    (c, d), *_ = np.linalg.lstsq(design, var, rcond=None)
    slope = np.polyfit(np.log(alphas), np.log(var), 1)[0]
    return WidthFit(tuple(alphas), tuple(var), float(c), float(d), float(slope))


# --- tabulation --------------------------------------------------------------

@dataclass(frozen=True)
class SpectralDensity:
    """A spectrum tabulated on an ascending grid of frequency ratios."""

    params: EnsembleParams
    kind: SpectrumKind
    x: np.ndarray
    density: np.ndarray
    log_density: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.x) <= 0):
            raise DomainError("x grid must be strictly ascending")

    def unit_scale(self):
        """Factor converting ``density`` to the physical units of ``params``."""
        p = self.params
        if self.kind is SpectrumKind.INTENSITY:
            return p.intensity0 / p.omega0
        return 1.0 / p.omega0

    def physical(self):
        """``(omega, density)`` in the units carried by ``params``."""
        return self.x * self.params.omega0, self.density * self.unit_scale()


def tabulate(params, x, kind="intensity"):
    kind = _kind(kind)
    x = _check_x(np.asarray(x, dtype=float))
    log_d = log_spectrum(x, params.alpha, kind)
    return SpectralDensity(params, kind, x, np.exp(log_d), log_d)
