"""Quasi-exactly-solvable spectra of the quantum Rabi model and its
2-photon and two-mode generalizations, with a truncated-basis oracle."""

from .errors import (
    BadSector,
    CouplingOutOfRange,
    DegenerateAtomBranch,
    DegenerateAtomWarning,
    DegenerateRoots,
    IllConditioned,
    NoPhysicalSolution,
    QesError,
    ValidationError,
    WindowExceeded,
    WrongModel,
    ZeroCoupling,
)
from .models import (
    ModelKind,
    ModelSpec,
    SectorBasisDescriptor,
    SqueezeFactor,
    TWO_PHOTON_SECTORS,
    casimir_value,
    squeeze_factor,
    su11_elements,
    validate,
)
from .oracle import (
    MatchResult,
    TruncatedHamiltonian,
    build_hamiltonian,
    default_n_max,
    match_energy,
    parity_spectrum,
    spectrum,
)
from .solver import (
    BargmannWavefunction,
    Branch,
    DEGENERATE_DELTA_SQ,
    QesSolution,
    bae_residual,
    bae_scale,
    constraint_residual,
    coupled_residuals,
    delta_pencil,
    ode_residual,
    qes_energy,
    second_component,
    solve_qes,
    wavefunction_eval,
)
from .stencil import (
    OdeStencil,
    apply_first_factor,
    apply_ode,
    apply_second_factor,
    ode_stencil,
)

__version__ = "0.1.0"

__all__ = [
    "BadSector", "BargmannWavefunction", "Branch", "CouplingOutOfRange",
    "DEGENERATE_DELTA_SQ", "DegenerateAtomBranch", "DegenerateAtomWarning",
    "DegenerateRoots", "IllConditioned", "MatchResult", "ModelKind",
    "ModelSpec", "NoPhysicalSolution", "OdeStencil", "QesError",
    "QesSolution", "SectorBasisDescriptor", "SqueezeFactor",
    "TWO_PHOTON_SECTORS", "TruncatedHamiltonian", "ValidationError",
    "WindowExceeded", "WrongModel", "ZeroCoupling", "apply_first_factor",
    "apply_ode", "apply_second_factor", "bae_residual", "bae_scale",
    "build_hamiltonian", "casimir_value", "constraint_residual",
    "coupled_residuals", "default_n_max", "delta_pencil", "match_energy",
    "ode_residual", "ode_stencil", "parity_spectrum", "qes_energy",
    "second_component", "solve_qes", "spectrum", "squeeze_factor",
    "su11_elements", "validate", "wavefunction_eval",
]
