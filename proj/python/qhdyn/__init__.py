"""Time-dependent quasi-Hermitian quantum evolution in finite dimensions."""

from ._core import (
    AmbiguousMatchingError,
    BiorthogonalFrame,
    ComplexSpectrumError,
    ConditioningError,
    ConfigError,
    Error,
    ExceptionalPointError,
    InconsistentModeError,
    IntegrationError,
    NumericalError,
    Schedule,
    SingularMapError,
    __version__,
    build_generator,
    build_hamiltonian,
    build_omega,
    build_theta,
    eig_biorthogonal,
    expectation,
    hermitize,
    quasi_hermiticity_residual,
    run_scenario,
    theta_inner,
    track_continuity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
