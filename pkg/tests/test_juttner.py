import math

import mpmath
import numpy as np
import pytest
from scipy import stats

from thermoline.errors import DomainError
from thermoline.juttner import (
    PROPOSAL_SWITCH_ALPHA,
    EnsembleParams,
    juttner_cdf,
    juttner_log_pdf,
    juttner_pdf,
    juttner_quantile,
    juttner_sample,
    juttner_sample_t,
    mean_inverse_gamma,
    sample_emission,
)
from thermoline.numerics import RandomStream


def _mp_pdf(beta, alpha):
    mpmath.mp.dps = 30
    b = mpmath.mpf(beta)
    g = 1 / mpmath.sqrt(1 - b * b)
    return float(alpha * g ** 5 * b * b * mpmath.exp(-alpha * g) / mpmath.besselk(2, alpha))


@pytest.mark.parametrize("alpha,beta", [(0.3, 0.9), (1.0, 0.5), (10.0, 0.3), (300.0, 0.05)])
def test_pdf_matches_direct_formula(alpha, beta):
    assert juttner_pdf(beta, alpha) == pytest.approx(_mp_pdf(beta, alpha), rel=1e-12)


def test_pdf_support():
    assert juttner_pdf(0.0, 5.0) == 0.0
    with pytest.raises(DomainError):
        juttner_pdf(1.0, 5.0)
    assert np.isneginf(juttner_log_pdf(0.0, 5.0))


def test_pdf_finite_for_extreme_alpha():
    beta = np.array([1e-8, 1e-7, 3e-7])
    p = juttner_pdf(beta, 1e13)
    assert np.all(np.isfinite(p)) and p.max() > 0


@pytest.mark.parametrize("alpha", [0.0, -1.0, math.inf, math.nan])
def test_bad_alpha(alpha):
    with pytest.raises(DomainError):
        juttner_pdf(0.5, alpha)
    with pytest.raises(DomainError):
        EnsembleParams(alpha)


def test_params_validation():
    with pytest.raises(DomainError):
        EnsembleParams(1.0, omega0=0.0)
    with pytest.raises(DomainError):
        EnsembleParams(1.0, intensity0=-1.0)


@pytest.mark.parametrize("alpha", [0.2, 3.0, 80.0])
def test_cdf_and_quantile(alpha):
    q = np.array([0.01, 0.3, 0.5, 0.9, 0.999])
    b = np.array([juttner_quantile(qi, alpha) for qi in q])
    assert np.all(np.diff(b) > 0)
    assert juttner_cdf(b, alpha) == pytest.approx(q, abs=1e-10)
    assert juttner_cdf(0.0, alpha) == 0.0 and juttner_cdf(1.0, alpha) == 1.0


def test_mean_inverse_gamma_example():
    assert mean_inverse_gamma(1.0) == pytest.approx(0.37044117463141794, rel=1e-12)


def test_sampler_determinism():
    a = juttner_sample(5.0, 1000, RandomStream(7, 2))
    b = juttner_sample(5.0, 1000, RandomStream(7, 2))
    assert np.array_equal(a, b)


def test_sampler_range():
    for alpha in (0.05, 1.0, 1e4):
        b = juttner_sample(alpha, 10_000, RandomStream(1, 0))
        assert b.shape == (10_000,)
        assert np.all((b >= 0) & (b < 1))


@pytest.mark.parametrize("alpha", [0.1, 0.5, PROPOSAL_SWITCH_ALPHA * 0.99, PROPOSAL_SWITCH_ALPHA,
                                   5.0, 150.0, 1e4])
def test_sampler_ks(alpha):
    beta = juttner_sample(alpha, 50_000, RandomStream(11, 0))
    p = stats.kstest(beta, lambda b: juttner_cdf(b, alpha)).pvalue
    assert p > 1e-3


@pytest.mark.parametrize("alpha", [1e6, 1e15])
def test_sampler_cold_limit(alpha):
    # t = gamma - 1 tends to Gamma(3/2, 1/alpha)
    t = juttner_sample_t(alpha, 50_000, RandomStream(3, 0))
    p = stats.kstest(t * alpha, stats.gamma(1.5).cdf).pvalue
    assert p > 1e-3


def test_mean_inverse_gamma_from_samples():
    alpha = 2.0
    b = juttner_sample(alpha, 400_000, RandomStream(5, 0))
    s = np.sqrt(1 - b * b)
    assert abs(s.mean() - mean_inverse_gamma(alpha)) <= 5 * s.std() / math.sqrt(s.size)


def test_emission_isotropy():
    s = sample_emission(3.0, 200_000, RandomStream(2, 0))
    assert len(s) == 200_000
    assert stats.kstest((s.cos_theta + 1) / 2, "uniform").pvalue > 1e-3


def test_zero_samples():
    assert juttner_sample(3.0, 0, RandomStream(0)).size == 0
