"""Detection probabilities, momentum-space amplitudes, and two-photon spectra.

All spectra refer to the asymptotic two-photon state of the spontaneous decay
of the fully excited emitter. The two-photon spectral density is normalized
so that its integral over both frequencies equals the asymptotic two-photon
detection probability (= 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .params import SystemParams
from .quadrature import quad_complex

# relative rate difference below which the degenerate (gamma1 == gamma2)
# limit forms of the probabilities are used; the generic closed forms have a
# 0/0 there
_DEGENERATE_EPS = 1e-8


def state_probabilities(t, p: SystemParams):
    """(P_f0, P_e1, P_g2): probabilities of the three detectable configurations.

    P_f0: emitter doubly excited, no photons; P_e1: singly excited plus one
    photon anywhere; P_g2: ground state plus two photons. Sum is 1 for all t.
    """
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be nonnegative")
    t = np.asarray(t, dtype=float)
    g1, g2 = p.gamma1, p.gamma2
    e2 = np.exp(-g2 * t)
    p_f0 = e2
    if abs(g2 - g1) < _DEGENERATE_EPS * g2:
        gt = g2 * t
        p_e1 = gt * e2
        p_g2 = 1.0 - e2 * (1.0 + gt)
    else:
        eps = g2 - g1
        # e^{-g1 t} - e^{-g2 t} = e^{-g2 t} expm1(eps t), stable for small eps
        em = np.expm1(eps * t)
        p_e1 = g2 / eps * e2 * em
        p_g2 = 1.0 - e2 * (g2 * em / eps + 1.0)
    if t.shape:
        return p_f0, p_e1, p_g2
    return float(p_f0), float(p_e1), float(p_g2)


def beta_k(k, t, p: SystemParams):
    """Momentum-space single-photon amplitude at wavenumber k (omega = k v_g).

    The removable singularity at i(omega - delta_omega) = (gamma2 - gamma1)/2
    is evaluated through a series branch, not naive division.
    """
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be nonnegative")
    k = np.asarray(k, dtype=float)
    t = np.asarray(t, dtype=float)
    k, t = np.broadcast_arrays(k, t)
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    t = np.atleast_1d(t)

    omega = k * p.v_g
    pre = 1j * np.sqrt(p.gamma2 * p.v_g / (2.0 * np.pi))
    d = 1j * (omega - p.delta_omega) - 0.5 * (p.gamma2 - p.gamma1)
    e_f = np.exp(-(1j * p.delta_omega + 0.5 * p.gamma2) * t)  # decay of the |f> line
    w = d * t
    series = (np.abs(w) < 1e-3) | (np.abs(d) < 1e-10 * p.gamma2)
    phi = 1.0 - w / 2.0 + w**2 / 6.0 - w**3 / 24.0 + w**4 / 120.0
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (np.exp(-(1j * omega + 0.5 * p.gamma1) * t) - e_f) \
            / np.where(series, 1.0, d)
    out = pre * np.where(series, -t * e_f * phi, direct)
    return complex(out[0]) if scalar else out


def _phi_exp(w):
    """(e^w - 1)/w, elementwise, stable near w = 0."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1e-4
    safe = np.where(small, 1.0, w)
    return np.where(small, 1.0 + w / 2.0 + w**2 / 6.0 + w**3 / 24.0,
                    (np.exp(w) - 1.0) / safe)


def _phi_prime(w):
    """d/dw (e^w - 1)/w, stable near w = 0."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1e-3
    safe = np.where(small, 1.0, w)
    return np.where(small, 0.5 + w / 3.0 + w**2 / 8.0 + w**3 / 30.0,
                    (np.exp(w) * (w - 1.0) + 1.0) / safe**2)


def _dd_phi(w1, w2):
    """Divided difference (phi(w1) - phi(w2))/(w1 - w2) of phi = (e^w - 1)/w."""
    w1 = np.asarray(w1, dtype=complex)
    w2 = np.asarray(w2, dtype=complex)
    dw = w1 - w2
    near = np.abs(dw) < 1e-5 * np.maximum(1.0, np.maximum(np.abs(w1), np.abs(w2)))
    safe = np.where(near, 1.0, dw)
    return np.where(near, _phi_prime(0.5 * (w1 + w2)),
                    (_phi_exp(w1) - _phi_exp(w2)) / safe)


def gamma_k(k1, k2, t, p: SystemParams):
    """Momentum-space two-photon amplitude; t may be numpy.inf for the asymptote.

    At t = inf the decaying exponentials are dropped and the residual global
    phase e^{-i(omega1+omega2) t} is omitted (it cancels in the modulus).
    Symmetric under k1 <-> k2 exactly.
    """
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    scalar = np.broadcast_shapes(k1.shape, k2.shape) == () and np.ndim(t) == 0
    w1 = np.atleast_1d(k1 * p.v_g)
    w2 = np.atleast_1d(k2 * p.v_g)
    w1, w2 = np.broadcast_arrays(w1, w2)

    pre = (p.v_g / (2.0 * np.pi)) * np.sqrt(p.gamma1 * p.gamma2 / 2.0)
    a1 = 1j * (w1 - p.omega1) - 0.5 * p.gamma1
    a2 = 1j * (w2 - p.omega1) - 0.5 * p.gamma1
    zb = 1j * (w1 + w2 - p.omega2) - 0.5 * p.gamma2

    if np.isinf(t):
        out = -pre * (a1 + a2) / (a1 * a2 * zb)
    else:
        if t < 0:
            raise ValueError("time must be nonnegative")
        # each ordered term is a divided difference of g(z) = (e^{z t} - 1)/z
        dd = _dd_phi(a2 * t, zb * t) + _dd_phi(a1 * t, zb * t)
        out = -pre * np.exp(-1j * (w1 + w2) * t) * t**2 * dd
    return complex(out.ravel()[0]) if scalar else out


def spectral_density(omega1, omega2, p: SystemParams):
    """Two-photon spectral density S(omega1, omega2) of the completed decay.

    Explicit rational form; nonnegative, exchange-symmetric, and integrating
    to 1 over both frequencies.
    """
    w1 = np.asarray(omega1, dtype=float)
    w2 = np.asarray(omega2, dtype=float)
    g1, g2 = p.gamma1, p.gamma2
    s = w1 + w2
    num = g1 * g2 * ((s - 2.0 * p.omega1) ** 2 + g1**2)
    den = (((s - p.omega2) ** 2 + 0.25 * g2**2)
           * ((w1 - p.omega1) ** 2 + 0.25 * g1**2)
           * ((w2 - p.omega1) ** 2 + 0.25 * g1**2))
    out = num / (8.0 * np.pi**2 * den)
    return float(out) if out.ndim == 0 else out


def identical_spectrum(delta_omega, p: SystemParams):
    """Spectral density of two identical photons vs detuning from omega1.

    Product of two Lorentzian factors: one peaked at zero detuning, one at
    half the (negative) anharmonicity shift alpha_r*omega1/2.
    """
    d = np.asarray(delta_omega, dtype=float)
    g1, g2 = p.gamma1, p.gamma2
    anh = p.delta_omega - p.omega1  # alpha_r * omega1
    out = (1.0 / (2.0 * np.pi**2)
           * g1 / (d**2 + 0.25 * g1**2)
           * g2 / ((2.0 * d - anh) ** 2 + 0.25 * g2**2))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SpectrumGrid:
    """Dense spectral density values[i, j] = S(axis1[i], axis2[j])."""

    axis1: np.ndarray
    axis2: np.ndarray
    values: np.ndarray
    params: SystemParams


@dataclass(frozen=True)
class PeakList:
    """Strict local maxima of a SpectrumGrid, sorted by height descending."""

    peaks: list  # (omega1, omega2, S) tuples
    min_prominence: float
    detection_radius: int = 1


def spectrum_grid(w1_range, w2_range, n1: int, n2: int, p: SystemParams) -> SpectrumGrid:
    """Evaluate the spectral density on a dense rectangular grid."""
    if n1 < 2 or n2 < 2:
        raise ValueError("need at least 2 points per axis")
    lo1, hi1 = map(float, w1_range)
    lo2, hi2 = map(float, w2_range)
    if not (np.isfinite([lo1, hi1, lo2, hi2]).all() and hi1 > lo1 and hi2 > lo2):
        raise ValueError("ranges must be finite and ordered")
    ax1 = np.linspace(lo1, hi1, n1)
    ax2 = np.linspace(lo2, hi2, n2)
    vals = spectral_density(ax1[:, None], ax2[None, :], p)
    return SpectrumGrid(axis1=ax1, axis2=ax2, values=vals, params=p)


def find_peaks(grid: SpectrumGrid, min_prominence: float = 0.01) -> PeakList:
    """Strict 8-neighborhood local maxima above min_prominence * max(S)."""
    v = grid.values
    thr = min_prominence * v.max()
    c = v[1:-1, 1:-1]
    mask = c > thr
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= c > v[1 + di:v.shape[0] - 1 + di, 1 + dj:v.shape[1] - 1 + dj]
    ii, jj = np.nonzero(mask)
    peaks = [(float(grid.axis1[i + 1]), float(grid.axis2[j + 1]), float(c[i, j]))
             for i, j in zip(ii, jj)]
    peaks.sort(key=lambda rec: -rec[2])
    return PeakList(peaks=peaks, min_prominence=min_prominence)


class SpectrumNorm(NamedTuple):
    value: float
    truncation_bound: float


def _sum_ridge_envelope(p: SystemParams) -> float:
    """sup over s of [(s - 2 omega1)^2 + gamma1^2] / [(s - omega2)^2 + gamma2^2/4]."""
    a = p.omega2 - 2.0 * p.omega1  # anharmonicity shift
    c1 = p.gamma1**2
    c2 = 0.25 * p.gamma2**2
    # stationary points of ((u + a)^2 + c1)/(u^2 + c2): -a u^2 + (c2 - a^2 - c1) u + a c2 = 0
    cand = [1.0]
    if a != 0.0:
        disc = (c2 - a**2 - c1) ** 2 + 4.0 * a**2 * c2
        for sgn in (-1.0, 1.0):
            u = ((c2 - a**2 - c1) + sgn * np.sqrt(disc)) / (2.0 * a)
            cand.append(((u + a) ** 2 + c1) / (u**2 + c2))
    return max(cand)


def spectrum_norm(p: SystemParams, half_width: float, n: int = 4000) -> SpectrumNorm:
    """Integral of the spectral density over [omega1 +- half_width]^2.

    Iterated 1D adaptive quadrature (the Lorentzian ridges are narrow relative
    to the window); n is the panel budget per 1D integral. Returns the value
    and an analytic bound on the mass truncated outside the window. Expected
    to approach 1; any constant-factor deviation is reported, never rescaled.
    """
    need = 50.0 * max(p.gamma1, p.gamma2) + abs(p.delta_omega - p.omega1)
    if half_width < need:
        raise ValueError(
            f"half_width {half_width} too small; needs >= {need} to cover both transitions"
        )
    lo = p.omega1 - half_width
    hi = p.omega1 + half_width
    lines = (p.omega1, p.delta_omega)
    scale = min(p.gamma1, p.gamma2)

    def inner(w1_arr):
        out = np.empty(w1_arr.shape, dtype=float)
        for i, w1 in enumerate(w1_arr):
            bp = [pt for pt in (*lines, p.omega2 - w1) if lo < pt < hi]
            res = quad_complex(lambda w2: spectral_density(w1, w2, p), lo, hi,
                               abs_tol=1e-13, rel_tol=1e-9, breakpoints=bp,
                               osc_period=None, max_panels=n)
            out[i] = res.value.real
        return out

    res = quad_complex(inner, lo, hi, abs_tol=1e-10, rel_tol=1e-7,
                       breakpoints=[pt for pt in lines if lo < pt < hi],
                       max_panels=n)

    # tail bound: outside the box is contained in the union of the two
    # single-variable tails; bounding the sum-ridge factor by its envelope C
    # gives marginal m(omega1) <= gamma2 C / (4 pi (omega1 - Omega1)^2), so
    # each tail contributes at most gamma2 C / (2 pi half_width)
    c_ridge = _sum_ridge_envelope(p)
    tail_one = c_ridge * p.gamma2 / (2.0 * np.pi * half_width)
    bound = 2.0 * tail_one + res.error
    return SpectrumNorm(value=float(res.value.real), truncation_bound=float(bound))
