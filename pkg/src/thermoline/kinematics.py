"""Special-relativity building blocks for a moving monochromatic radiator.

Units: ``c = 1`` unless passed explicitly, frequencies as ratios
``x = omega / omega0``. Scalar helpers broadcast over NumPy arrays so the
Monte Carlo code can call them on whole sample batches.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EmissionState:
    """Speed and line-of-sight angle of one radiator in the lab frame."""

    beta: float
    cos_theta: float

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta must lie in [0, 1), got {self.beta!r}")
        if not -1.0 <= self.cos_theta <= 1.0:
            raise ValueError(f"cos_theta must lie in [-1, 1], got {self.cos_theta!r}")

    @property
    def gamma(self):
        return lorentz_factor(self.beta)

    def doppler_factor(self):
        return doppler_factor(self.beta, self.cos_theta)

    def energy_rate_boost(self):
        return energy_rate_boost(self.beta, self.cos_theta)

    def power_boost(self):
        return power_boost(self.beta, self.cos_theta)


@dataclass(frozen=True)
class FourAcceleration:
    time_component: float
    space_component: np.ndarray


def lorentz_factor(beta):
    beta = np.asarray(beta, dtype=float)
    return 1.0 / np.sqrt((1.0 - beta) * (1.0 + beta))


def doppler_factor(beta, cos_theta):
    """Observed over emitted frequency, ``sqrt(1 - b^2) / (1 - b cos)``."""
    beta = np.asarray(beta, dtype=float)
    return np.sqrt((1.0 - beta) * (1.0 + beta)) / (1.0 - beta * cos_theta)


def energy_rate_boost(beta, cos_theta):
    """Energy per unit observer time relative to the rest-frame power.

    ``(1 - b^2)^2 / (1 - b cos)^3``: the emitted-power boost times the
    ``dt'/dt`` retardation factor.
    """
    beta = np.asarray(beta, dtype=float)
    return ((1.0 - beta) * (1.0 + beta)) ** 2 / (1.0 - beta * cos_theta) ** 3


def power_boost(beta, cos_theta):
    """Angular power boost ``(1 - b^2)^2 / (1 - b cos)^4`` per unit emission time."""
    beta = np.asarray(beta, dtype=float)
    return ((1.0 - beta) * (1.0 + beta)) ** 2 / (1.0 - beta * cos_theta) ** 4


def counting_weight(beta, cos_theta):
    """Wave-arrival rate per unit observer time, ``1 - b cos``."""
    return 1.0 - np.asarray(beta, dtype=float) * cos_theta


def aberration(cos_theta_lab, beta):
    """Direction cosine in the radiator frame for a lab-frame direction."""
    return (cos_theta_lab - beta) / (1.0 - beta * cos_theta_lab)


def doppler_support(beta):
    """Range ``(x_min, x_max)`` of frequency ratios reachable at speed ``beta``."""
    beta = np.asarray(beta, dtype=float)
    return np.sqrt((1.0 - beta) / (1.0 + beta)), np.sqrt((1.0 + beta) / (1.0 - beta))


def beta_min(x):
    """Smallest speed that can shift the proper frequency to ratio ``x``.

    Inverse of :func:`doppler_support`: ``|x^2 - 1| / (x^2 + 1)``.
    """
    x = np.asarray(x, dtype=float)
    x2 = x * x
    return np.abs(x2 - 1.0) / (x2 + 1.0)


def four_acceleration(beta_vec, beta_dot_vec, c=1.0):
    """Lab-frame four-acceleration of a body with velocity ``beta_vec``.

    ``beta_dot_vec`` is the coordinate-time derivative of ``beta_vec``. The
    time component is ``c * gamma^4 * (beta . beta_dot)``, i.e. the
    ``d(beta^2)/dt / 2`` reading of the squared-dot notation, which is the one
    consistent with ``a . u = 0``.
    """
    beta_vec = np.asarray(beta_vec, dtype=float)
    beta_dot_vec = np.asarray(beta_dot_vec, dtype=float)
    b2 = beta_vec @ beta_vec
    if not b2 < 1.0:
        raise ValueError("|beta| must be < 1")
    g2 = 1.0 / (1.0 - b2)
    a0 = c * g2 * g2 * (beta_vec @ beta_dot_vec)
    a = c * g2 * beta_dot_vec + a0 * beta_vec
    return FourAcceleration(float(a0), a)


def minkowski_dot(t1, v1, t2, v2):
    """Inner product with signature (+, -, -, -)."""
    return t1 * t2 - np.dot(v1, v2)


def four_velocity(beta_vec, c=1.0):
    beta_vec = np.asarray(beta_vec, dtype=float)
    g = 1.0 / np.sqrt(1.0 - beta_vec @ beta_vec)
    return g * c, g * c * beta_vec


def boost_to_rest_frame(time_component, space_component, beta_vec):
    """Apply the pure boost into the frame moving with ``beta_vec``.

    Returns the transformed ``(time, space)`` pair.
    """
    beta_vec = np.asarray(beta_vec, dtype=float)
    space = np.asarray(space_component, dtype=float)
    b2 = beta_vec @ beta_vec
    if b2 == 0.0:
        return float(time_component), space.copy()
    g = 1.0 / np.sqrt(1.0 - b2)
    bs = beta_vec @ space
    t_new = g * (time_component - bs)
    s_new = space + ((g - 1.0) * bs / b2 - g * time_component) * beta_vec
    return float(t_new), s_new


def rest_frame_acceleration(beta_vec, beta_dot_vec, c=1.0):
    """Proper acceleration measured in the instantaneous rest frame."""
    fa = four_acceleration(beta_vec, beta_dot_vec, c)
    _, a_rest = boost_to_rest_frame(fa.time_component, fa.space_component, beta_vec)
    return a_rest


def coordinate_acceleration(rest_accel, beta_vec, c=1.0):
    """Velocity derivative ``d beta / dt`` from the rest-frame acceleration.

    ``(1 - b^2) / c * [a' - gamma / (1 + gamma) (a' . beta) beta]``.
    """
    rest_accel = np.asarray(rest_accel, dtype=float)
    beta_vec = np.asarray(beta_vec, dtype=float)
    b2 = beta_vec @ beta_vec
    if not b2 < 1.0:
        raise ValueError("|beta| must be < 1")
    g = 1.0 / np.sqrt(1.0 - b2)
    bracket = rest_accel - (g / (1.0 + g)) * (rest_accel @ beta_vec) * beta_vec
    return (1.0 - b2) / c * bracket
