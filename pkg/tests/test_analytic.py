import numpy as np
import pytest

from cascadeqed import (
    PulseSpec,
    alpha_spontaneous,
    beta_spontaneous,
    gamma_spontaneous,
    general_solution,
    heaviside_reg,
    make_params,
    quad_complex,
    state_probabilities,
)

P = make_params(1.0, -0.03, 0.02, 1.5)


def test_heaviside_regularized():
    assert heaviside_reg(-3.2) == 0.0
    assert heaviside_reg(0.0) == 0.5
    assert heaviside_reg(1e-300) == 1.0
    np.testing.assert_array_equal(heaviside_reg(np.array([-1.0, 0.0, 2.0])),
                                  [0.0, 0.5, 1.0])


def test_alpha_spontaneous_values():
    assert alpha_spontaneous(0.0, P) == 1.0 + 0.0j
    t = 2.0 / P.gamma2
    assert alpha_spontaneous(t, P) == pytest.approx(np.exp(-1.0), abs=1e-15)
    with pytest.raises(ValueError):
        alpha_spontaneous(-0.1, P)


def test_alpha_squared_is_pf0():
    rng = np.random.default_rng(3)
    t = rng.uniform(0.0, 20.0 / P.gamma2, 50)
    pf, _, _ = state_probabilities(t, P)
    np.testing.assert_allclose(np.abs(alpha_spontaneous(t, P)) ** 2, pf, rtol=1e-13)


def test_beta_spontaneous_causal_wedge():
    assert beta_spontaneous(-1.0, 5.0, P) == 0.0
    t = 3.0
    assert beta_spontaneous(2.0 * P.v_g * t, t, P) == 0.0
    with pytest.raises(ValueError):
        beta_spontaneous(0.5, -1.0, P)


def test_beta_spontaneous_equal_rates_value():
    # Gamma1 = Gamma2 = G, G t = 1, x = v_g t/2: the two exponents contribute
    # G t/4 each, so |beta| = sqrt(G/v_g) e^{-1/2}
    g = 0.05
    p = make_params(1.0, -0.03, g, 1.0)
    t = 1.0 / g
    val = beta_spontaneous(0.5 * p.v_g * t, t, p)
    assert abs(val) == pytest.approx(np.sqrt(g / p.v_g) * np.exp(-0.5), rel=1e-12)


def test_beta_front_regularization_is_half_limit():
    t = 7.0
    x = P.v_g * t
    inside = beta_spontaneous(x * (1 - 1e-12), t, P)
    front = beta_spontaneous(x, t, P)
    assert abs(front - 0.5 * inside) < 1e-10 * abs(inside)


def test_gamma_exchange_symmetry_bitwise():
    rng = np.random.default_rng(5)
    x1 = rng.uniform(-1.0, 60.0, 10_000)
    x2 = rng.uniform(-1.0, 60.0, 10_000)
    t = rng.uniform(0.0, 55.0, 10_000)
    a = gamma_spontaneous(x1, x2, t, P)
    b = gamma_spontaneous(x2, x1, t, P)
    np.testing.assert_array_equal(a, b)


def test_gamma_support_gates():
    assert gamma_spontaneous(-0.1, 0.5, 1.0, P) == 0.0
    assert gamma_spontaneous(0.5, -0.1, 1.0, P) == 0.0
    t = 2.0
    assert gamma_spontaneous(3.0 * t, 0.5, t, P) == 0.0


def _pg2_quadrature(p, t):
    # 2 * int_0^{v t} dx2 int_0^{x2} dx1 |gamma(x1 <= x2)|^2, smooth integrand
    amp2 = p.gamma1 * p.gamma2 / (2.0 * p.v_g**2)

    def inner(x2):
        def f(x1):
            return amp2 * np.exp(-p.gamma2 * (t - x2 / p.v_g)
                                 - p.gamma1 * (x2 - x1) / p.v_g)
        return quad_complex(f, 0.0, x2, rel_tol=1e-11).value.real

    def outer(x2s):
        return np.array([inner(x2) for x2 in np.atleast_1d(x2s)])

    return 2.0 * quad_complex(outer, 0.0, p.v_g * t, rel_tol=1e-9).value.real


def test_gamma_norm_matches_pg2_closed_form():
    # ratio 2, Gamma2 t = 1 -> P_g2 = 0.1548181
    p = make_params(1.0, -0.03, 1.0, 2.0)
    got = _pg2_quadrature(p, 1.0)
    assert got == pytest.approx(0.1548181, abs=1e-6)
    _, _, pg = state_probabilities(1.0, p)
    assert got == pytest.approx(pg, abs=1e-6)


def test_spontaneous_norm_conservation():
    p = make_params(1.0, -0.03, 0.6, 1.7)
    for t in (0.4, 1.5, 4.0):
        pf = abs(alpha_spontaneous(t, p)) ** 2

        def b2(x):
            return np.abs(beta_spontaneous(x, t, p)) ** 2

        pe = quad_complex(b2, 0.0, p.v_g * t, rel_tol=1e-10).value.real
        pg = _pg2_quadrature(p, t)
        assert pf + pe + pg == pytest.approx(1.0, abs=1e-6)


# -- general solution ---------------------------------------------------------


def _rect_closed_forms(p, pulse, alpha0):
    """Independent closed forms for a rectangular pulse (all integrals analytic)."""
    A = np.sqrt(pulse.weight / (pulse.right - pulse.left))
    k0 = pulse.carrier
    vg = p.v_g

    def alpha(t):
        lo = max(0.0, -pulse.right / vg)
        hi = min(t, -pulse.left / vg)
        val = alpha0 * np.exp(-0.5 * p.gamma2 * t)
        if hi > lo:
            z = 1j * (p.delta_omega - k0 * vg) + 0.5 * (p.gamma2 - p.gamma1)
            integral = A * (np.exp(z * hi) - np.exp(z * lo)) / z
            val = val - 1j * p.V2 * np.exp(-0.5 * p.gamma2 * t) * integral
        return val

    def beta(x, t):
        # free propagation of the pulse, damped by the |e> population decay
        val = np.exp(-0.5 * p.gamma1 * t) * pulse.envelope(x - vg * t)
        if x < 0 or t - x / vg < 0:
            return complex(val)
        mask = heaviside_reg(x) * heaviside_reg(t - x / vg)
        r = t - x / vg
        val = val + (-1j * p.V2 / vg) * mask * np.exp(
            -1j * p.delta_omega * r - 0.5 * p.gamma1 * x / vg) * alpha(r)
        lo = max(0.0, t + pulse.left / vg)
        hi = min(x / vg, t + pulse.right / vg)
        if hi > lo:
            z = -0.5 * p.gamma1 + 1j * (k0 * vg - p.omega1)
            integral = A * np.exp(1j * p.omega1 * x / vg - 1j * k0 * vg * t) \
                * (np.exp(z * hi) - np.exp(z * lo)) / z
            val = val - p.gamma1 * mask * np.exp(-0.5 * p.gamma1 * r) * integral
        return complex(val)

    return alpha, beta


def test_general_reduces_to_spontaneous_exactly():
    sol = general_solution(P, 1.0, PulseSpec.none())
    rng = np.random.default_rng(9)
    x = rng.uniform(-10.0, 400.0, 300)
    t = rng.uniform(0.0, 350.0, 300)
    np.testing.assert_allclose(sol.beta(x, t), beta_spontaneous(x, t, P),
                               rtol=0, atol=1e-15)
    x2 = rng.uniform(-10.0, 400.0, 300)
    np.testing.assert_allclose(sol.gamma(x, x2, t), gamma_spontaneous(x, x2, t, P),
                               rtol=0, atol=1e-15)
    ts = rng.uniform(0.0, 300.0, 60)
    np.testing.assert_allclose(sol.alpha(ts), alpha_spontaneous(ts, P),
                               rtol=0, atol=1e-15)


def test_vacuum_stays_vacuum():
    sol = general_solution(P, 0.0, PulseSpec.none())
    assert sol.alpha(13.0) == 0.0
    assert np.all(sol.beta(np.linspace(0, 10, 11), 12.0) == 0.0)


def test_general_normalization_guard():
    with pytest.raises(ValueError):
        general_solution(P, 1.0, PulseSpec.gaussian(-50.0, 5.0, 0.97, weight=0.5))


def test_general_alpha_matches_rect_closed_form():
    p = make_params(1.0, -0.03, 0.08, 2.0)
    pulse = PulseSpec.rectangular(-30.0, -10.0, 0.9, weight=0.64)
    sol = general_solution(p, 0.6, pulse)
    ref_alpha, _ = _rect_closed_forms(p, pulse, 0.6)
    for t in (0.0, 5.0, 12.0, 15.0, 27.0, 40.0, 80.0):
        assert sol.alpha(t) == pytest.approx(ref_alpha(t), abs=1e-9)


def test_general_beta_matches_rect_closed_form():
    p = make_params(1.0, -0.03, 0.08, 2.0)
    pulse = PulseSpec.rectangular(-30.0, -10.0, 0.9, weight=0.64)
    sol = general_solution(p, 0.6, pulse)
    _, ref_beta = _rect_closed_forms(p, pulse, 0.6)
    rng = np.random.default_rng(21)
    for _ in range(40):
        t = rng.uniform(0.0, 70.0)
        x = rng.uniform(-5.0, 75.0)
        assert sol.beta(x, t) == pytest.approx(ref_beta(x, t), abs=1e-8)


def test_general_gamma_exchange_symmetry():
    p = make_params(1.0, -0.03, 0.08, 2.0)
    pulse = PulseSpec.gaussian(-40.0, 8.0, 0.97, weight=0.75)
    sol = general_solution(p, 0.5, pulse)
    rng = np.random.default_rng(31)
    x1 = rng.uniform(-5.0, 60.0, 40)
    x2 = rng.uniform(-5.0, 60.0, 40)
    a = sol.gamma(x1, x2, 55.0)
    b = sol.gamma(x2, x1, 55.0)
    np.testing.assert_array_equal(a, b)


def test_general_norm_conservation_with_pulse():
    # resonant gaussian: |alpha|^2 + int|beta|^2 + iint|gamma|^2 = 1.
    # |beta|^2 and |gamma|^2 jump at x = 0 and at the wavefront, so the
    # trapezoid sum converges at first order; assert the Richardson
    # extrapolation over a grid doubling.
    p = make_params(1.0, -0.03, 0.1, 1.5)
    pulse = PulseSpec.gaussian(-18.0, 4.0, p.delta_omega / p.v_g, weight=1.0)
    sol = general_solution(p, 0.0, pulse)
    t = 30.0

    def total(n):
        x = np.linspace(-12.0, p.v_g * t, n)
        fld = sol.sample(t, x=x)
        pf = abs(fld.alpha) ** 2
        pe = np.trapezoid(np.abs(fld.beta) ** 2, x)
        pg = np.trapezoid(np.trapezoid(np.abs(fld.gamma) ** 2, x, axis=1), x)
        return pf + pe + pg

    coarse, fine = total(281), total(561)
    assert abs(fine - 1.0) < abs(coarse - 1.0)
    assert 2.0 * fine - coarse == pytest.approx(1.0, abs=1e-4)


def test_sample_field_symmetry_and_causality():
    sol = general_solution(P, 1.0, PulseSpec.none())
    fld = sol.sample(40.0, n=101)
    np.testing.assert_array_equal(fld.gamma, fld.gamma.T)
    assert fld.x[0] == 0.0 and fld.x[-1] == P.v_g * 40.0
    assert fld.beta[-1] == pytest.approx(0.5 * beta_spontaneous(
        40.0 * P.v_g * (1 - 1e-13), 40.0, P), rel=1e-9)
