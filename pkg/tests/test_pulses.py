import numpy as np
import pytest

from cascadeqed import PulseSpec, quad_complex


def _l2(pulse, lo, hi):
    res = quad_complex(lambda x: np.abs(pulse.envelope(x)) ** 2, lo, hi,
                       osc_period=None, rel_tol=1e-10)
    return res.value.real


def test_none_variant():
    p = PulseSpec.none()
    assert p.weight == 0.0
    assert np.all(p.envelope(np.linspace(-5, 5, 11)) == 0)
    with pytest.raises(ValueError):
        PulseSpec(variant="none", weight=0.3)
    with pytest.raises(ValueError):
        PulseSpec(variant="gaussian", weight=0.0, width=1.0)


def test_gaussian_norm_matches_weight():
    p = PulseSpec.gaussian(center=-30.0, width=4.0, carrier=0.97, weight=0.8)
    assert _l2(p, -80.0, 20.0) == pytest.approx(0.8, abs=1e-8)


def test_rectangular_norm_and_support():
    p = PulseSpec.rectangular(left=-12.0, right=-2.0, carrier=1.0, weight=0.5)
    assert _l2(p, -12.0, -2.0) == pytest.approx(0.5, abs=1e-8)
    assert p.envelope(-13.0) == 0.0
    assert p.envelope(-1.0) == 0.0


def test_sampled_weight_exact_piecewise_linear():
    x = np.linspace(-10.0, -2.0, 400)
    vals = 0.25 * np.exp(1j * 0.9 * x) * np.exp(-((x + 6.0) ** 2) / 4.0)
    p = PulseSpec.sampled(x, vals)
    assert p.weight == pytest.approx(_l2(p, -10.0, -2.0), abs=1e-8)
    # interpolation hits the samples
    assert p.envelope(x[17]) == pytest.approx(vals[17])


def test_sampled_validation():
    with pytest.raises(ValueError):
        PulseSpec.sampled(np.array([0.0, 0.0, 1.0]), np.zeros(3, complex))
    with pytest.raises(ValueError):
        PulseSpec.sampled(np.array([0.0, 1.0]), np.zeros(3, complex))
    big = np.full(50, 10.0 + 0j)
    with pytest.raises(ValueError):
        PulseSpec.sampled(np.linspace(0, 1, 50), big)


@pytest.mark.parametrize("make,ks", [
    (lambda: PulseSpec.gaussian(center=-30.0, width=4.0, carrier=0.97, weight=1.0),
     (0.75, 0.97, 1.2)),
    (lambda: PulseSpec.rectangular(left=-12.0, right=-2.0, carrier=0.5, weight=1.0),
     (0.0, 0.35, 0.5, 1.4)),
])
def test_fourier_matches_quadrature(make, ks):
    # spot-check the closed-form transforms against direct quadrature
    # (gaussian k's stay near the carrier: the real-space support cutoff at
    # 8 sigma limits agreement in the deep k-tails)
    p = make()
    lo, hi = p.support()
    for k in ks:
        res = quad_complex(lambda x: np.exp(-1j * k * x) * p.envelope(x), lo, hi,
                           osc_period=2 * np.pi / (abs(k) + p.k_scale()))
        direct = res.value / np.sqrt(2 * np.pi)
        assert abs(p.fourier(k) - direct) < 5e-8


def test_fourier_parseval_gaussian():
    p = PulseSpec.gaussian(center=-100.0, width=10.0, carrier=0.97, weight=0.9)
    k = np.linspace(0.97 - 1.0, 0.97 + 1.0, 20001)
    norm = np.trapezoid(np.abs(p.fourier(k)) ** 2, k)
    assert norm == pytest.approx(0.9, rel=1e-6)


def test_sampled_fourier_matches_quadrature():
    x = np.linspace(-20.0, -5.0, 600)
    vals = 0.2 * np.exp(1j * 1.1 * x - ((x + 12.0) ** 2) / 9.0)
    p = PulseSpec.sampled(x, vals)
    for k in (0.0, 0.8, 1.3):
        res = quad_complex(lambda xx: np.exp(-1j * k * xx) * p.envelope(xx),
                           -20.0, -5.0, osc_period=2 * np.pi / (abs(k) + 2.0))
        assert abs(p.fourier(k) - res.value / np.sqrt(2 * np.pi)) < 1e-6
