"""Closed-form wavefunction amplitudes for the two-excitation decay problem.

Covers both the spontaneous-decay specialization (fully excited emitter, no
incident field) and the general initial condition (arbitrary superposition of
the doubly excited emitter and a single incident photon pulse), where the
memory and convolution integrals are evaluated by adaptive quadrature.

Amplitude conventions follow the slowly-varying decomposition in which the
doubly-excited amplitude alpha(t) and single-photon amplitude beta(x, t) have
their bare carrier phases factored out, while the two-photon amplitude
gamma(x1, x2, t) carries its full phases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SystemParams
from .pulses import PulseSpec
from .quadrature import quad_complex


def heaviside_reg(x):
    """Step function with the symmetric regularization theta(0) = 1/2."""
    return np.heaviside(x, 0.5)


def _check_time(t):
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be nonnegative")


def alpha_spontaneous(t, p: SystemParams):
    """Doubly-excited-state amplitude e^{-gamma2 t / 2} for the fully excited start."""
    _check_time(t)
    return np.exp(-0.5 * p.gamma2 * np.asarray(t, dtype=float)) + 0.0j


def beta_spontaneous(x, t, p: SystemParams):
    """Single-photon amplitude of spontaneous decay; zero outside 0 <= x <= v_g t."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x, t = np.broadcast_arrays(x, t)
    retard = t - x / p.v_g
    mask = heaviside_reg(x) * heaviside_reg(retard)
    inside = mask > 0
    # exponent grows outside the causal wedge; evaluate only under the mask
    re = np.where(inside, -0.5 * p.gamma2 * retard - 0.5 * p.gamma1 * x / p.v_g, 0.0)
    im = np.where(inside, -p.delta_omega * retard, 0.0)
    amp = -1j * np.sqrt(p.gamma2 / p.v_g)
    out = amp * mask * np.exp(re + 1j * im)
    return out if out.shape else complex(out)


def _gamma_term(xa, xb, t, p: SystemParams):
    # one ordered term of the symmetrized two-photon amplitude (support xa <= xb)
    ra = t - xa / p.v_g
    rb = t - xb / p.v_g
    mask = (heaviside_reg(xa) * heaviside_reg(xb - xa)
            * heaviside_reg(ra) * heaviside_reg(rb))
    inside = mask > 0
    re = np.where(inside, -0.5 * p.gamma2 * rb - 0.5 * p.gamma1 * (xb - xa) / p.v_g, 0.0)
    im = np.where(inside, -p.omega1 * ra - p.delta_omega * rb, 0.0)
    return mask * np.exp(re + 1j * im)


def gamma_spontaneous(x1, x2, t, p: SystemParams):
    """Two-photon amplitude of spontaneous decay; exchange-symmetric by construction."""
    _check_time(t)
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    t = np.asarray(t, dtype=float)
    x1, x2, t = np.broadcast_arrays(x1, x2, t)
    amp = -np.sqrt(p.gamma1 * p.gamma2 / 2.0) / p.v_g
    out = amp * (_gamma_term(x1, x2, t, p) + _gamma_term(x2, x1, t, p))
    return out if out.shape else complex(out)


@dataclass(frozen=True)
class AmplitudeField:
    """Sampled wavefunction amplitudes at a fixed time on declared grids.

    gamma is stored as the exact mirror of its upper triangle, so the
    exchange symmetry gamma[i, j] == gamma[j, i] holds bit-for-bit.
    """

    t: float
    x: np.ndarray
    alpha: complex
    beta: np.ndarray
    gamma: np.ndarray


class GeneralSolution:
    """Evaluator for the general initial condition alpha(0) = alpha0, beta(x, 0) = beta0(x).

    alpha(t) is the decayed initial amplitude plus a convolution of the pulse
    history against the emitter response; beta(x, t) consists of the freely
    propagated (and population-damped) pulse, the re-emission from alpha, and
    a memory integral over the pulse history; gamma composes from beta.
    With pulse = none the quadrature terms vanish identically and the
    evaluator reduces to the spontaneous closed forms pointwise.
    """

    def __init__(self, p: SystemParams, alpha0: complex, pulse: PulseSpec,
                 abs_tol: float = 1e-10, rel_tol: float = 1e-8, max_panels: int = 4000):
        norm = abs(alpha0) ** 2 + pulse.weight
        if norm > 1.0 + 1e-9:
            raise ValueError(
                f"initial norm |alpha0|^2 + pulse.weight = {norm} exceeds 1"
            )
        self.p = p
        self.alpha0 = complex(alpha0)
        self.pulse = pulse
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.max_panels = max_panels
        self._alpha_cache: dict[float, complex] = {}

    # -- alpha ---------------------------------------------------------------

    def _alpha_pulse_term(self, t: float) -> complex:
        p = self.p
        sup = self.pulse.support()
        if sup is None:
            return 0.0j
        # beta0(-v_g tau) != 0 only for tau in [-x_hi, -x_lo]/v_g
        lo = max(0.0, -sup[1] / p.v_g)
        hi = min(t, -sup[0] / p.v_g)
        if hi <= lo:
            return 0.0j

        def f(tau):
            return (np.exp(-0.5 * p.gamma2 * (t - tau)
                           + (1j * p.delta_omega - 0.5 * p.gamma1) * tau)
                    * self.pulse.envelope(-p.v_g * tau))

        freq = p.delta_omega + p.v_g * self.pulse.k_scale()
        res = quad_complex(f, lo, hi, abs_tol=self.abs_tol, rel_tol=self.rel_tol,
                           osc_period=2.0 * np.pi / freq, max_panels=self.max_panels)
        return -1j * p.V2 * res.value

    def alpha(self, t):
        """Amplitude of the doubly excited state at time(s) t."""
        _check_time(t)
        if np.ndim(t) == 0:
            return self._alpha_scalar(float(t))
        return np.array([self._alpha_scalar(float(ti)) for ti in np.ravel(t)]
                        ).reshape(np.shape(t))

    def _alpha_scalar(self, t: float) -> complex:
        hit = self._alpha_cache.get(t)
        if hit is not None:
            return hit
        val = self.alpha0 * np.exp(-0.5 * self.p.gamma2 * t)
        if self.pulse.weight > 0.0:
            val = val + self._alpha_pulse_term(t)
        val = complex(val)
        self._alpha_cache[t] = val
        return val

    # -- beta ----------------------------------------------------------------

    def _beta_memory_term(self, x: float, t: float) -> complex:
        p = self.p
        sup = self.pulse.support()
        if sup is None:
            return 0.0j
        # beta0(v_g (t' - t)) != 0 only for t' in t + [x_lo, x_hi]/v_g
        lo = max(0.0, t + sup[0] / p.v_g)
        hi = min(x / p.v_g, t + sup[1] / p.v_g)
        if hi <= lo:
            return 0.0j

        def f(tp):
            return (np.exp(-0.5 * p.gamma1 * tp - 1j * p.omega1 * (tp - x / p.v_g))
                    * self.pulse.envelope(p.v_g * (tp - t)))

        freq = p.omega1 + p.v_g * self.pulse.k_scale()
        res = quad_complex(f, lo, hi, abs_tol=self.abs_tol, rel_tol=self.rel_tol,
                           osc_period=2.0 * np.pi / freq, max_panels=self.max_panels)
        return -p.gamma1 * np.exp(-0.5 * p.gamma1 * (t - x / p.v_g)) * res.value

    def beta(self, x, t):
        """Single-photon amplitude at position(s) x and time(s) t."""
        _check_time(t)
        p = self.p
        shape = np.broadcast_shapes(np.shape(x), np.shape(t))
        scalar = shape == ()
        x, tt = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        x = np.atleast_1d(x).ravel()
        tt = np.atleast_1d(tt).ravel()

        retard = tt - x / p.v_g
        mask = heaviside_reg(x) * heaviside_reg(retard)
        inside = mask > 0

        out = np.exp(-0.5 * p.gamma1 * tt) * self.pulse.envelope(x - p.v_g * tt)

        if np.any(inside):
            alph = np.zeros(x.shape, dtype=complex)
            for i in np.nonzero(inside)[0]:
                alph[i] = self._alpha_scalar(retard[i])
            re = np.where(inside, -0.5 * p.gamma1 * x / p.v_g, 0.0)
            im = np.where(inside, -p.delta_omega * retard, 0.0)
            out = out + (-1j * p.V2 / p.v_g) * mask * np.exp(re + 1j * im) * alph
            if self.pulse.weight > 0.0:
                mem = np.zeros(x.shape, dtype=complex)
                for i in np.nonzero(inside)[0]:
                    mem[i] = self._beta_memory_term(x[i], tt[i])
                out = out + mask * mem

        if scalar:
            return complex(out[0])
        return out.reshape(shape)

    # -- gamma ---------------------------------------------------------------

    def _gamma_term(self, xa, xb, t):
        p = self.p
        retard = t - xa / p.v_g
        mask = heaviside_reg(xa) * heaviside_reg(retard)
        if np.ndim(mask) == 0:
            if mask == 0:
                return 0.0j
            return (mask * np.exp(-1j * p.omega1 * retard)
                    * self.beta(xb - xa, retard))
        out = np.zeros(np.shape(mask), dtype=complex)
        inside = mask > 0
        if np.any(inside):
            xa_i = np.broadcast_to(xa, mask.shape)[inside]
            xb_i = np.broadcast_to(xb, mask.shape)[inside]
            r_i = np.broadcast_to(retard, mask.shape)[inside]
            out[inside] = (mask[inside] * np.exp(-1j * p.omega1 * r_i)
                           * self.beta(xb_i - xa_i, r_i))
        return out

    def gamma(self, x1, x2, t):
        """Two-photon amplitude, composed from beta; exchange-symmetric."""
        _check_time(t)
        p = self.p
        amp = -1j * p.V1 / (np.sqrt(2.0) * p.v_g)
        return amp * (self._gamma_term(np.asarray(x1, dtype=float),
                                       np.asarray(x2, dtype=float), np.asarray(t, dtype=float))
                      + self._gamma_term(np.asarray(x2, dtype=float),
                                         np.asarray(x1, dtype=float), np.asarray(t, dtype=float)))

    # -- field sampling ------------------------------------------------------

    def sample(self, t: float, x: np.ndarray | None = None, n: int = 401) -> AmplitudeField:
        """Sample alpha, beta, gamma on a grid (default n points over [0, v_g t])."""
        _check_time(t)
        if x is None:
            x = np.linspace(0.0, self.p.v_g * t, n)
        x = np.asarray(x, dtype=float)
        beta = self.beta(x, t)
        nx = x.size
        gamma = np.empty((nx, nx), dtype=complex)
        iu, ju = np.triu_indices(nx)
        vals = self.gamma(x[iu], x[ju], t)
        gamma[iu, ju] = vals
        gamma[ju, iu] = vals
        return AmplitudeField(t=float(t), x=x, alpha=self._alpha_scalar(float(t)),
                              beta=beta, gamma=gamma)


def general_solution(p: SystemParams, alpha0: complex, pulse: PulseSpec,
                     **kwargs) -> GeneralSolution:
    """Build the general-initial-condition evaluator; see GeneralSolution."""
    return GeneralSolution(p, alpha0, pulse, **kwargs)
