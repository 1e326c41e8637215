r"""Modified Bessel functions of the second kind for integer orders.

Values of :math:`K_0` and :math:`K_1` come from their ascending series for
``x <= 2`` and from Steed's continued fraction (the Temme/Thompson-Barnett
form) above that. Higher orders follow from the upward recurrence

.. math::
    K_{\nu+1}(x) = K_{\nu-1}(x) + \frac{2\nu}{x} K_\nu(x),

which is stable in the upward direction. Everything is computed in the
exponentially scaled form :math:`e^x K_\nu(x)`, so ratios of different orders
stay finite for arguments where the unscaled functions underflow.

Negative orders are mapped through :math:`K_{-\nu} = K_\nu`.
"""

import math

from .errors import ConvergenceError, DomainError, UnsupportedOrderError

MAX_ORDER = 8

_EULER_GAMMA = 0.57721566490153286061
_SERIES_LIMIT = 2.0
_EPS = 1e-17
_MAXIT = 10000


def _check_argument(x):
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"argument must be finite and > 0, got {x!r}")
    return x


def _check_order(order):
    if isinstance(order, bool) or int(order) != order:
        raise UnsupportedOrderError(f"order must be an integer, got {order!r}")
    n = abs(int(order))
    if n > MAX_ORDER:
        raise UnsupportedOrderError(
            f"|order| must be <= {MAX_ORDER}, got {order!r}"
        )
    return n


def _k01_series_scaled(x):
    # Ascending series; all terms positive except the log prefactor.
    y = 0.25 * x * x
    log_half = math.log(0.5 * x)
    term0 = 1.0  # y^k / (k!)^2
    term1 = 1.0  # y^k / (k! (k+1)!)
    harmonic = 0.0
    i0 = 0.0
    i1_sum = 0.0
    k0_tail = 0.0
    k1_tail = 0.0
    k = 0
    while True:
        i0 += term0
        i1_sum += term1
        k0_tail += harmonic * term0
        # psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        k1_tail += (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * _EULER_GAMMA) * term1
        k += 1
        harmonic += 1.0 / k
        term0 *= y / (k * k)
        term1 *= y / (k * (k + 1))
        if term0 < _EPS * i0 and term1 < _EPS * i1_sum:
            break
    i1 = 0.5 * x * i1_sum
    k0 = -(log_half + _EULER_GAMMA) * i0 + k0_tail
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_tail
    scale = math.exp(x)
    return k0 * scale, k1 * scale


def _k01_continued_fraction_scaled(x):
    # Steed's algorithm for the order-zero pair, scaled by e^x.
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT + 1):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise ConvergenceError(f"continued fraction failed at x={x!r}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def scaled_sequence(x, max_order):
    """Return ``[e^x K_0(x), ..., e^x K_max_order(x)]``."""
    x = _check_argument(x)
    max_order = _check_order(max_order)
    if x <= _SERIES_LIMIT:
        k0, k1 = _k01_series_scaled(x)
    else:
        k0, k1 = _k01_continued_fraction_scaled(x)
    values = [k0, k1]
    for n in range(1, max_order):
        values.append(values[n - 1] + (2.0 * n / x) * values[n])
    return values[: max_order + 1]


def bessel_k(order, x, scaled=False):
    """Modified Bessel function of the second kind, ``K_order(x)``.

    Parameters
    ----------
    order : int
        Integer order with ``|order| <= MAX_ORDER``.
    x : float
        Positive, finite argument.
    scaled : bool
        Return ``exp(x) * K_order(x)`` instead.

    Returns
    -------
    float
        The unscaled value silently underflows to ``0.0`` once ``x`` exceeds
        roughly 700; use ``scaled=True``, :func:`log_bessel_k` or
        :func:`bessel_k_ratio` in that regime. Overflow near ``x -> 0`` gives
        ``inf``.

    Raises
    ------
    DomainError
        If ``x <= 0`` or ``x`` is not finite.
    UnsupportedOrderError
        If the order is not an integer or exceeds ``MAX_ORDER``.
    """
    n = _check_order(order)
    value = scaled_sequence(x, max(n, 1))[n]
    if scaled:
        return value
    return value * math.exp(-float(x))


def log_bessel_k(order, x):
    """Natural log of ``K_order(x)``, finite for every ``x`` in (0, inf)."""
    n = _check_order(order)
    return math.log(scaled_sequence(x, max(n, 1))[n]) - float(x)


def bessel_k_underflows(order, x):
    """True when the unscaled ``K_order(x)`` is not representable as a normal float."""
    return log_bessel_k(order, x) < math.log(2.2250738585072014e-308)


def bessel_k_ratio(num_order, den_order, x):
    """Ratio ``K_num_order(x) / K_den_order(x)`` computed from scaled values.

    The exponential factors cancel, so the result is accurate from tiny
    arguments up to ``x ~ 1e15`` and beyond.
    """
    n = _check_order(num_order)
    m = _check_order(den_order)
    if n == m:
        _check_argument(x)
        return 1.0
    seq = scaled_sequence(x, max(n, m, 1))
    return seq[n] / seq[m]
