"""Incident single-photon pulse envelopes for the general two-excitation solution.

A pulse is the initial photon amplitude beta0(x) accompanying the emitter in
its first excited state. Carrier phase conventions: analytic variants carry
e^{i k0 x}; sampled variants must include the carrier in the samples.
All envelopes are L2-normalized to `weight` = the single-photon population.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SUPPORT_SIGMAS = 8.0  # gaussian support cutoff; envelope^2 tail mass ~ 1e-29


@dataclass(frozen=True, eq=False)
class PulseSpec:
    """Incident pulse envelope; build via the none/gaussian/rectangular/sampled constructors."""

    variant: str
    weight: float
    center: float = 0.0          # gaussian
    width: float = 0.0           # gaussian sigma
    left: float = 0.0            # rectangular
    right: float = 0.0           # rectangular
    carrier: float = 0.0         # k0 for gaussian/rectangular
    x_samples: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.variant not in ("none", "gaussian", "rectangular", "sampled"):
            raise ValueError(f"unknown pulse variant {self.variant!r}")
        if not (0.0 <= self.weight <= 1.0):
            raise ValueError(f"weight must lie in [0, 1], got {self.weight}")
        if (self.variant == "none") != (self.weight == 0.0):
            raise ValueError("variant 'none' if and only if weight == 0")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def none() -> "PulseSpec":
        return PulseSpec(variant="none", weight=0.0)

    @staticmethod
    def gaussian(center: float, width: float, carrier: float, weight: float = 1.0) -> "PulseSpec":
        """|beta0(x)|^2 is a Gaussian density of std `width` centered at `center`."""
        if not (width > 0):
            raise ValueError(f"gaussian width must be positive, got {width}")
        return PulseSpec(variant="gaussian", weight=weight, center=center,
                         width=width, carrier=carrier)

    @staticmethod
    def rectangular(left: float, right: float, carrier: float, weight: float = 1.0) -> "PulseSpec":
        if not (right > left):
            raise ValueError(f"need right > left, got [{left}, {right}]")
        return PulseSpec(variant="rectangular", weight=weight, left=left,
                         right=right, carrier=carrier)

    @staticmethod
    def sampled(x: np.ndarray, values: np.ndarray) -> "PulseSpec":
        """Piecewise-linear envelope through (x, values); carrier phase included in values.

        The weight is the exact L2 norm of the interpolant.
        """
        x = np.asarray(x, dtype=float)
        values = np.asarray(values, dtype=complex)
        if x.ndim != 1 or x.shape != values.shape or x.size < 2:
            raise ValueError("need matching 1D x and values arrays with >= 2 samples")
        if not np.all(np.diff(x) > 0):
            raise ValueError("x samples must be strictly increasing")
        h = np.diff(x)
        v0, v1 = values[:-1], values[1:]
        # exact integral of |linear interpolant|^2 per segment
        w = float(np.sum(h * (np.abs(v0) ** 2 + np.abs(v1) ** 2 + (v0 * v1.conj()).real) / 3.0))
        if w > 1.0 + 1e-9:
            raise ValueError(f"sampled pulse norm {w} exceeds 1")
        x.setflags(write=False)
        values.setflags(write=False)
        return PulseSpec(variant="sampled", weight=min(w, 1.0), x_samples=x, values=values)

    # -- evaluation ---------------------------------------------------------

    def envelope(self, x) -> np.ndarray:
        """beta0(x), vectorized; zero outside the support."""
        x = np.asarray(x, dtype=float)
        if self.variant == "none":
            return np.zeros(x.shape, dtype=complex)
        if self.variant == "gaussian":
            sig = self.width
            norm = np.sqrt(self.weight) * (2.0 * np.pi * sig**2) ** -0.25
            return norm * np.exp(-((x - self.center) ** 2) / (4.0 * sig**2)
                                 + 1j * self.carrier * x)
        if self.variant == "rectangular":
            amp = np.sqrt(self.weight / (self.right - self.left))
            box = (x >= self.left) & (x <= self.right)
            return np.where(box, amp * np.exp(1j * self.carrier * x), 0.0 + 0.0j)
        re = np.interp(x, self.x_samples, self.values.real, left=0.0, right=0.0)
        im = np.interp(x, self.x_samples, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def fourier(self, k) -> np.ndarray:
        """beta0 in k-space, (1/sqrt(2 pi)) \\int dx e^{-ikx} beta0(x)."""
        k = np.asarray(k, dtype=float)
        if self.variant == "none":
            return np.zeros(k.shape, dtype=complex)
        if self.variant == "gaussian":
            sig = self.width
            kk = k - self.carrier
            norm = np.sqrt(self.weight) * (2.0 * sig**2 / np.pi) ** 0.25
            return norm * np.exp(-(sig**2) * kk**2 - 1j * kk * self.center)
        if self.variant == "rectangular":
            kk = k - self.carrier
            length = self.right - self.left
            mid = 0.5 * (self.left + self.right)
            amp = np.sqrt(self.weight / length) * length / np.sqrt(2.0 * np.pi)
            return amp * np.exp(-1j * kk * mid) * np.sinc(kk * length / (2.0 * np.pi))
        return self._fourier_sampled(k)

    def _fourier_sampled(self, k: np.ndarray) -> np.ndarray:
        # exact transform of the piecewise-linear interpolant
        x = self.x_samples
        v = self.values
        h = np.diff(x)
        out = np.zeros(np.broadcast(k).shape if k.ndim else (), dtype=complex)
        k2 = np.atleast_1d(k).astype(float)
        acc = np.zeros(k2.shape, dtype=complex)
        for i in range(len(h)):
            u = k2 * h[i]
            small = np.abs(u) < 1e-4
            iu = 1j * u
            with np.errstate(divide="ignore", invalid="ignore"):
                e0 = np.where(small,
                              1.0 - iu / 2.0 - u**2 / 6.0 + iu * u**2 / 24.0,
                              (1.0 - np.exp(-iu)) / np.where(small, 1.0, iu))
                e1 = np.where(small,
                              0.5 - iu / 3.0 - u**2 / 8.0 + iu * u**2 / 30.0,
                              -np.exp(-iu) / np.where(small, 1.0, iu)
                              - (1.0 - np.exp(-iu)) / np.where(small, 1.0, u**2 + 0j))
            seg = np.exp(-1j * k2 * x[i]) * h[i] * (v[i] * e0 + (v[i + 1] - v[i]) * e1)
            acc += seg
        acc /= np.sqrt(2.0 * np.pi)
        if np.ndim(k) == 0:
            return acc[0]
        out[...] = acc
        return out

    # -- geometry hints for quadrature --------------------------------------

    def support(self) -> tuple[float, float] | None:
        """(xmin, xmax) outside which the envelope is treated as zero."""
        if self.variant == "none":
            return None
        if self.variant == "gaussian":
            r = _SUPPORT_SIGMAS * self.width
            return (self.center - r, self.center + r)
        if self.variant == "rectangular":
            return (self.left, self.right)
        return (float(self.x_samples[0]), float(self.x_samples[-1]))

    def k_scale(self) -> float:
        """Magnitude of the highest significant wavenumber content (for panel seeding)."""
        if self.variant == "none":
            return 0.0
        if self.variant == "gaussian":
            return abs(self.carrier) + 4.0 / self.width
        if self.variant == "rectangular":
            return abs(self.carrier) + 4.0 / (self.right - self.left)
        dx = float(np.min(np.diff(self.x_samples)))
        return np.pi / dx
