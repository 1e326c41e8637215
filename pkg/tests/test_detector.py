import numpy as np
import pytest

from thermoline.detector import (
    MAX_DRIVE,
    DetectorConfig,
    doppler_scan,
    lorentzian,
    registered_mean,
    scan_centroid,
    scan_centroid_values,
)
from thermoline.errors import ConfigError, DataError
from thermoline.numerics import integrate_adaptive
from thermoline.spectrum import spectral_moment


@pytest.mark.parametrize("alpha", [1.0, 10.0, 1e3, 1e6])
def test_registered_mean_is_counting_mean(alpha):
    assert registered_mean(alpha, DetectorConfig()) == pytest.approx(
        spectral_moment(alpha, "counting"), rel=1e-10)


def test_unweighted_detector_sees_intensity_mean():
    cfg = DetectorConfig(weight_exponent=0)
    assert registered_mean(10.0, cfg) == pytest.approx(spectral_moment(10.0), rel=1e-10)


def test_lorentzian_unit_area():
    r = integrate_adaptive(lambda u: lorentzian(u, 1e-3), -1e6, 1e6,
                           points=[-1e-3, 0.0, 1e-3])
    assert r.value == pytest.approx(1.0 - 1e-3 / (np.pi * 1e6), rel=1e-9)


def test_scan_centroid_near_counting_mean():
    alpha = 100.0
    cfg = DetectorConfig(gamma_d=1e-4, drive_velocities=np.linspace(-0.6, 0.8, 281))
    curve = doppler_scan(alpha, cfg)
    target = spectral_moment(alpha, "counting")
    assert abs(curve.centroid_frequency_ratio - target) <= 5 * cfg.gamma_d
    assert scan_centroid(curve) == curve.centroid_velocity


def test_absorber_is_mirror_image():
    v = np.linspace(-0.3, 0.3, 61)
    emit = doppler_scan(100.0, DetectorConfig(gamma_d=1e-3, drive_velocities=v))
    absorb = doppler_scan(100.0, DetectorConfig(gamma_d=1e-3, drive_velocities=v, absorber=True))
    total = emit.count_rate + absorb.count_rate
    assert np.allclose(total, total[0], rtol=1e-9)
    assert absorb.centroid_velocity == pytest.approx(emit.centroid_velocity, rel=1e-9)


def test_cold_source_centroid_at_rest_frequency():
    v = np.linspace(-0.01, 0.01, 201)
    curve = doppler_scan(1e12, DetectorConfig(gamma_d=1e-4, drive_velocities=v))
    assert abs(curve.centroid_velocity) <= 1e-6


def test_synthetic_source():
    x0, s = 1.003, 2e-3
    src = lambda x: np.exp(-0.5 * ((x - x0) / s) ** 2) / (s * np.sqrt(2 * np.pi))  # noqa: E731
    v = np.linspace(-0.03, 0.04, 141)
    cfg = DetectorConfig(gamma_d=1e-4, weight_exponent=0, drive_velocities=v)
    curve = doppler_scan(None, cfg, source=src, source_points=[x0 + k * s for k in range(-8, 9)])
    assert curve.centroid_velocity == pytest.approx(0.003, abs=5e-6)


@pytest.mark.parametrize("kwargs", [dict(gamma_d=0.0), dict(gamma_d=0.2), dict(x_d=-1.0),
                                    dict(weight_exponent=-1),
                                    dict(drive_velocities=[0.1, 0.0]),
                                    dict(drive_velocities=[0.0, MAX_DRIVE])])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        DetectorConfig(**kwargs)


def test_scan_requires_velocities():
    with pytest.raises(ConfigError):
        doppler_scan(10.0, DetectorConfig())


def test_flat_curve_rejected():
    with pytest.raises(DataError):
        scan_centroid_values([0.0, 1.0, 2.0], [3.0, 3.0, 3.0])


def test_centroid_of_symmetric_peak():
    v = np.linspace(-1, 1, 11)
    assert scan_centroid_values(v, np.exp(-v ** 2)) == pytest.approx(0.0, abs=1e-15)
