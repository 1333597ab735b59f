"""Physical configuration of the four-level tripod system.

Basis order is |1>, |2>, |3>, |4>: three ground states coupled to one
excited state |4> by the coupling (Omega_c, on |1>-|4>), probe (Omega_p,
on |2>-|4>) and control (Omega_A, on |3>-|4>) fields.  All frequencies
and rates are angular-frequency quantities in kHz; times are in ms
(1/kHz).  No 2*pi conversions are applied anywhere.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

TRIPOD_BRANCHING = (1 / 3, 1 / 3, 1 / 3)
LAMBDA_BRANCHING = (0.5, 0.5, 0.0)

_BRANCHING_TOL = 1e-9


@dataclass(frozen=True)
class DecayModel:
    """Dissipation rates of the four-level system.

    gamma_pop is the total population decay rate of |4>, split among the
    ground states by the branching ratios.  gamma_opt is the total decay
    rate of each optical coherence rho_i4 (a scalar, or one rate per
    transition), so it already includes the gamma_pop/2 radiative part.
    gamma_ground damps the three ground coherences.  ground_mix is an
    optional slow population equalization among the ground states; it
    acts on populations only and leaves coherences untouched.
    """

    gamma_pop: float
    branching: tuple[float, float, float] = TRIPOD_BRANCHING
    gamma_opt: float | tuple[float, float, float] = 0.0
    gamma_ground: float = 0.0
    ground_mix: float = 0.0

    def __post_init__(self):
        if self.gamma_pop < 0:
            raise ValueError(f"gamma_pop must be >= 0, got {self.gamma_pop}")
        if self.gamma_ground < 0:
            raise ValueError(f"gamma_ground must be >= 0, got {self.gamma_ground}")
        if self.ground_mix < 0:
            raise ValueError(f"ground_mix must be >= 0, got {self.ground_mix}")
        if len(self.branching) != 3 or any(b < 0 for b in self.branching):
            raise ValueError(f"branching must be three ratios >= 0, got {self.branching}")
        if abs(sum(self.branching) - 1.0) > _BRANCHING_TOL:
            raise ValueError(f"branching ratios must sum to 1, got {self.branching}")
        rates = self.optical_rates
        if any(g < 0 for g in rates):
            raise ValueError(f"gamma_opt must be >= 0, got {self.gamma_opt}")
        # total optical dephasing cannot fall below the radiative floor
        if any(g < self.gamma_pop / 2 - 1e-12 for g in rates):
            raise ValueError(
                f"gamma_opt {self.gamma_opt} below gamma_pop/2 = {self.gamma_pop / 2}"
            )

    @property
    def optical_rates(self) -> tuple[float, float, float]:
        """Per-transition optical coherence decay (rho_14, rho_24, rho_34)."""
        if isinstance(self.gamma_opt, tuple):
            return self.gamma_opt
        return (self.gamma_opt,) * 3

    @property
    def max_rate(self) -> float:
        return max(self.gamma_pop, self.gamma_ground, self.ground_mix, *self.optical_rates)

    @classmethod
    def from_coherence_rates(cls, gamma_opt, gamma_ground, gamma_pop=None,
                             branching=TRIPOD_BRANCHING, ground_mix=0.0):
        """Build a model from coherence decay rates alone.

        When gamma_pop is not given it defaults to 2*(gamma_opt - gamma_ground),
        which makes the optical dephasing purely radiative on top of the
        ground dephasing floor.
        """
        if gamma_pop is None:
            gamma_pop = 2.0 * (gamma_opt - gamma_ground)
        return cls(gamma_pop=gamma_pop, branching=branching, gamma_opt=gamma_opt,
                   gamma_ground=gamma_ground, ground_mix=ground_mix)


@dataclass(frozen=True)
class SystemParams:
    """Complete physical configuration: three fields plus the decay model.

    Rabi frequencies are real and non-negative (field phases are fixed).
    Detunings follow delta_i = omega_transition - omega_laser.
    """

    omega_c: float
    omega_p: float
    omega_a: float
    decay: DecayModel
    delta_c: float = 0.0
    delta_p: float = 0.0
    delta_a: float = 0.0

    def __post_init__(self):
        for name in ("omega_c", "omega_p", "omega_a"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    @property
    def rabi(self) -> tuple[float, float, float]:
        return (self.omega_c, self.omega_p, self.omega_a)

    @property
    def max_scale(self) -> float:
        """Largest frequency scale; sets the integration step bound."""
        return max(self.omega_c, self.omega_p, self.omega_a,
                   abs(self.delta_c), abs(self.delta_p), abs(self.delta_a),
                   self.decay.max_rate)
