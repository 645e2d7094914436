"""Exception types shared across the package."""


class ModAtomError(Exception):
    """Base class for all domain errors raised by this package."""


class ZeroDetuning(ModAtomError):
    """Operation requires a nonzero detuning (transition_freq != laser_freq)."""


class ZeroModulationFreq(ModAtomError):
    """Operation requires a nonzero modulation frequency."""


class VariantDomainError(ModAtomError):
    """A Hamiltonian variant was evaluated outside its sign/domain conditions."""


class UndefinedDressingAngle(ModAtomError):
    """Dressing angle is undefined: detuning and coupling both vanish."""


class RegimeViolation(ModAtomError):
    """Parameters violate the validity guard of an asymptotic regime."""


class SecantSingularity(ModAtomError):
    """Requested time lies too close to a secant divergence of the crossing formula."""


class NonFiniteState(ModAtomError):
    """Phase-space state overflowed to a non-finite value during integration."""


class AmbiguousWinding(ModAtomError):
    """Rotation number is ill-defined because the orbit radius collapses to zero."""


class RangeError(ModAtomError):
    """Argument outside the supported range of the special-function kernel."""


class SmallDenominator(ModAtomError):
    """A resonant denominator n*Omega - m fell below the guard threshold.

    Signals proximity to the (n, m) nonlinear resonance.
    """

    def __init__(self, n, m, denominator):
        self.n = n
        self.m = m
        self.denominator = denominator
        super().__init__(
            f"resonant denominator {n}*Omega-{m} = {denominator:.3e} below guard"
        )


class BadWeights(ModAtomError):
    """Spinor component weights are not normalized."""


class StabilityViolation(ModAtomError):
    """Quantum time step too large for the fastest phase scale.

    Remedy: increase steps_per_period (or reduce the potential amplitude).
    """


class ConfigError(ModAtomError):
    """Run configuration failed validation; message carries the field path."""
