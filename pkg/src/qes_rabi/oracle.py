"""Brute-force verification by truncated-basis diagonalization.

The Hamiltonians are written in the basis |n> x {sigma_x = +1, -1} with
n <= n_max (|n> being the Fock level for the Rabi model, the su(1,1)
sector level otherwise). In this basis the coupling term is diagonal in
the spin and tridiagonal in n, while the level-splitting term couples the
two spin components at equal n with amplitude delta, so the matrix is
real symmetric and banded. A quasi-exact energy is accepted as verified
when its gap to the truncated spectrum is below tolerance and stays put
when the truncation is doubled.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ValidationError, WindowExceeded
from .models import (
    ModelKind,
    ModelSpec,
    SectorBasisDescriptor,
    squeeze_factor,
    su11_elements,
    validate,
)


# Truncation sizes that keep the doubling drift below 1e-9 across the
# validity domains (convergence slows approaching the collapse boundary).
DEFAULT_N_MAX = {
    ModelKind.RABI: 64,
    ModelKind.TWO_PHOTON: 256,
    ModelKind.TWO_MODE: 256,
}


def default_n_max(kind: ModelKind) -> int:
    return DEFAULT_N_MAX[ModelKind(kind)]


@dataclass(eq=False)
class TruncatedHamiltonian:
    """Dense symmetric matrix over |n> x {sigma_x = +/-1}, n <= n_max.

    Basis ordering: index = 2n + (0 for sigma_x = +1, 1 for sigma_x = -1).
    """

    spec: ModelSpec
    n_max: int
    matrix: np.ndarray
    basis: SectorBasisDescriptor

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching one energy against the truncated spectrum."""

    matched: bool
    gap: float
    truncation_drift: float
    degeneracy: int


def _diag_and_coupling(spec: ModelSpec, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal energies and n -> n+1 coupling amplitudes (spin s = +1)."""
    n = np.arange(n_max + 1)
    w, g = spec.omega, spec.g
    if spec.kind is ModelKind.RABI:
        return w * n, g * np.sqrt(n[:-1] + 1.0)
    x = float(spec.sector)
    kplus = np.array([su11_elements(spec, int(m))[1] for m in n[:-1]])
    if spec.kind is ModelKind.TWO_PHOTON:
        return 2.0 * w * (n + x - 0.25), 2.0 * g * kplus
    return 2.0 * w * (n + x - 0.5), g * kplus


def build_hamiltonian(spec: ModelSpec, n_max: int) -> TruncatedHamiltonian:
    """Assemble the truncated matrix; requires delta set, admits g = 0."""
    spec = validate(spec, require_coupling=False)
    if spec.delta is None:
        raise ValidationError("oracle needs delta set on the spec")
    if n_max < 4:
        raise ValueError(f"n_max must be >= 4, got {n_max}")

    diag, amp = _diag_and_coupling(spec, n_max)
    dim = 2 * (n_max + 1)
    h = np.zeros((dim, dim))
    for n in range(n_max + 1):
        for si, s in enumerate((1.0, -1.0)):
            i = 2 * n + si
            h[i, i] = diag[n]
            if n < n_max:
                j = i + 2
                h[i, j] = h[j, i] = s * amp[n]
        h[2 * n, 2 * n + 1] = h[2 * n + 1, 2 * n] = spec.delta
    return TruncatedHamiltonian(
        spec=spec, n_max=n_max, matrix=h,
        basis=SectorBasisDescriptor.for_spec(spec),
    )


def spectrum(h: TruncatedHamiltonian, k: int) -> np.ndarray:
    """k smallest eigenvalues of the dense symmetric matrix, ascending."""
    if not 1 <= k <= h.dim:
        raise ValueError(f"k must be in [1, {h.dim}], got {k}")
    return np.linalg.eigvalsh(h.matrix)[:k]


def parity_spectrum(spec: ModelSpec, n_max: int) -> np.ndarray:
    """Full truncated spectrum via the parity decomposition.

    The operator flipping sigma_x together with the phase (-1)^n commutes
    with all three Hamiltonians, splitting the matrix into two symmetric
    tridiagonal chains of length n_max + 1 whose eigenvalues union to the
    full spectrum. Agrees with the dense route to machine precision at a
    fraction of the cost; used for the truncation-doubling match test.
    """
    spec = validate(spec, require_coupling=False)
    if spec.delta is None:
        raise ValidationError("oracle needs delta set on the spec")
    diag, amp = _diag_and_coupling(spec, n_max)
    alt = spec.delta * (-1.0) ** np.arange(n_max + 1)
    if n_max == 0:
        chains = [np.array([diag[0] + p * alt[0]]) for p in (1.0, -1.0)]
    else:
        chains = [
            scipy.linalg.eigh_tridiagonal(diag + p * alt, amp, eigvals_only=True)
            for p in (1.0, -1.0)
        ]
    return np.sort(np.concatenate(chains))


def _reliable_window(spec: ModelSpec, n_max: int) -> float:
    spacing = spec.omega if spec.kind is ModelKind.RABI \
        else 2.0 * spec.omega * squeeze_factor(spec).value
    return spacing * n_max / 4.0


def match_energy(E: float, spec: ModelSpec, n_max: int, tol: float) -> MatchResult:
    """Match a candidate energy against the truncated spectrum.

    gap is the distance to the nearest eigenvalue at n_max;
    truncation_drift compares it with the gap recomputed at 2 * n_max.
    Matched means gap <= tol and drift <= tol/10. Raises WindowExceeded
    when E lies beyond spacing * n_max / 4, where truncation-corrupted
    high eigenvalues could fake a match.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    window = _reliable_window(spec, n_max)
    if E >= window:
        raise WindowExceeded(
            f"E = {E:g} outside reliable window {window:g}; raise n_max"
        )
    ev1 = parity_spectrum(spec, n_max)
    gap1 = float(np.min(np.abs(ev1 - E)))
    ev2 = parity_spectrum(spec, 2 * n_max)
    gap2 = float(np.min(np.abs(ev2 - E)))
    drift = abs(gap1 - gap2)
    return MatchResult(
        matched=(gap1 <= tol and drift <= tol / 10.0),
        gap=gap1,
        truncation_drift=drift,
        degeneracy=int(np.sum(np.abs(ev1 - E) <= tol)),
    )
