"""Exception types shared across the simulator."""


class TripodSimError(Exception):
    """Base class for all simulator errors."""


class SingularSystem(TripodSimError):
    """The steady state is not unique (generator null space has dimension > 1).

    Typical causes: a ground state with no field and no decay feeding it
    (set ``ground_mix > 0`` or drop the state), or an exactly dark ground
    superposition with ``gamma_ground == 0`` at degenerate two-photon
    resonance (set ``gamma_ground > 0``).
    """

    def __init__(self, message, null_dim=None, delta_p=None, delta=None):
        super().__init__(message)
        self.null_dim = null_dim
        self.delta_p = delta_p
        self.delta = delta


class StepTooLarge(TripodSimError):
    """Integration step exceeds the stability bound 0.1 / max(rates, Rabi, |detuning|)."""


class DegenerateFields(TripodSimError):
    """Dressed-state decomposition is undefined because the relevant fields vanish."""


class NoFeatures(TripodSimError):
    """A spectrum is monotone and carries no local extrema."""


class UnknownPreset(TripodSimError):
    """Requested preset name is not in the catalog."""


class ParseError(TripodSimError):
    """Config text could not be parsed."""

    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnknownKey(ParseError):
    """Config key is not in the schema."""


class DuplicateKey(ParseError):
    """Config key appears more than once."""
