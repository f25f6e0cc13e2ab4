"""System parameters for a three-level ladder emitter in a chiral 1D waveguide.

Internal unit conventions: dimensionless, with the photon group velocity
v_g = 1 and the lower transition frequency omega1 = 1 unless the caller
overrides them. All rates and frequencies are angular.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


class RegimeWarning(UserWarning):
    """Parameters are evaluable but outside the regime the model describes well."""


@dataclass(frozen=True)
class SystemParams:
    """Immutable emitter/waveguide parameter set.

    omega1      frequency of the |g> <-> |e> transition
    delta_omega frequency of the |e> <-> |f> transition (Omega2 - Omega1)
    gamma1      radiative decay rate of |e>  (= V1^2 / v_g)
    gamma2      radiative decay rate of |f>  (= V2^2 / v_g)
    v_g         photon group velocity
    """

    omega1: float
    delta_omega: float
    gamma1: float
    gamma2: float
    v_g: float = 1.0

    def __post_init__(self):
        if not (self.omega1 > 0):
            raise ValueError(f"omega1 must be positive, got {self.omega1}")
        if not (self.delta_omega > 0):
            raise ValueError(
                f"delta_omega must be positive (ladder structure), got {self.delta_omega}"
            )
        if not (self.gamma1 > 0):
            raise ValueError(f"gamma1 must be positive, got {self.gamma1}")
        if not (self.gamma2 > 0):
            raise ValueError(f"gamma2 must be positive, got {self.gamma2}")
        if not (self.v_g > 0):
            raise ValueError(f"v_g must be positive, got {self.v_g}")

    @property
    def omega2(self) -> float:
        """Frequency of the second excited state |f> above the ground state."""
        return self.omega1 + self.delta_omega

    @property
    def alpha_r(self) -> float:
        """Relative anharmonicity (delta_omega - omega1)/omega1; negative for transmons."""
        return (self.delta_omega - self.omega1) / self.omega1

    @property
    def V1(self) -> float:
        return math.sqrt(self.gamma1 * self.v_g)

    @property
    def V2(self) -> float:
        return math.sqrt(self.gamma2 * self.v_g)


def make_params(
    omega1: float,
    alpha_r: float,
    gamma2: float,
    ratio_g2_g1: float,
    v_g: float = 1.0,
) -> SystemParams:
    """Build SystemParams from the experimentally natural knobs.

    alpha_r is the relative anharmonicity, ratio_g2_g1 = gamma2/gamma1 the
    decay-rate ratio (~1.5 for typical transmons). Warns (without failing)
    when gamma2/omega1 > 0.1 (rotating-wave validity) or alpha_r falls
    outside the transmon-like range [-0.10, 0].
    """
    if not (omega1 > 0):
        raise ValueError(f"omega1 must be positive, got {omega1}")
    if not (gamma2 > 0):
        raise ValueError(f"gamma2 must be positive, got {gamma2}")
    if not (ratio_g2_g1 > 0):
        raise ValueError(f"ratio_g2_g1 must be positive, got {ratio_g2_g1}")
    if not (1.0 + alpha_r > 0):
        raise ValueError(
            f"alpha_r must exceed -1 (alpha_r <= -1 inverts the ladder), got {alpha_r}"
        )
    if gamma2 / omega1 > 0.1:
        warnings.warn(
            f"gamma2/omega1 = {gamma2 / omega1:.3g} > 0.1: rotating-wave "
            "description becomes questionable",
            RegimeWarning,
            stacklevel=2,
        )
    if not (-0.10 <= alpha_r <= 0.0):
        warnings.warn(
            f"alpha_r = {alpha_r:.3g} outside the transmon-like range [-0.10, 0]",
            RegimeWarning,
            stacklevel=2,
        )
    return SystemParams(
        omega1=omega1,
        delta_omega=omega1 * (1.0 + alpha_r),
        gamma1=gamma2 / ratio_g2_g1,
        gamma2=gamma2,
        v_g=v_g,
    )


def alpha_r_from_circuit(ej_over_ec: float) -> float:
    """Relative anharmonicity of a transmon from its E_J/E_C ratio: -(8 E_J/E_C)^(-1/2)."""
    if not (ej_over_ec > 0):
        raise ValueError(f"ej_over_ec must be positive, got {ej_over_ec}")
    return -((8.0 * ej_over_ec) ** -0.5)
