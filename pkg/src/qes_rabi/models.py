"""Model specifications, parameter domains and su(1,1) representation data.

Three models are supported, all describing a two-level atom (splitting
2*delta) coupled with strength g to bosonic modes of frequency omega:

* ``rabi``       -- linear coupling to one mode,
* ``two-photon`` -- coupling through the squared mode operators; the field
  splits into two su(1,1) sectors labelled q = 1/4 (even photon numbers)
  and q = 3/4 (odd photon numbers),
* ``two-mode``   -- coupling through a pair of degenerate modes; sectors are
  labelled by kappa = 1/2, 1, 3/2, ... (the conserved photon-number
  imbalance is 2*kappa - 1).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

from .errors import (
    BadSector,
    CouplingOutOfRange,
    DegenerateAtomWarning,
    ValidationError,
    WrongModel,
    ZeroCoupling,
)

TWO_PHOTON_SECTORS = (Fraction(1, 4), Fraction(3, 4))


class ModelKind(str, Enum):
    RABI = "rabi"
    TWO_PHOTON = "two-photon"
    TWO_MODE = "two-mode"


@dataclass(frozen=True)
class ModelSpec:
    """One model instance: kind, sector index and (omega, g, delta).

    ``delta`` may be None when it is an output of the solve rather than an
    input. ``sector`` must be None for the Rabi model, q in {1/4, 3/4} for
    the 2-photon model and a positive half-integer for the two-mode model.
    """

    kind: ModelKind
    omega: float
    g: float
    delta: float | None = None
    sector: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.sector is not None and not isinstance(self.sector, Fraction):
            object.__setattr__(self, "sector", Fraction(self.sector))

    def with_delta(self, delta: float) -> "ModelSpec":
        return replace(self, delta=delta)

    @property
    def degenerate_atom(self) -> bool:
        return self.delta == 0.0


def validate(spec: ModelSpec, require_coupling: bool = True,
             warn_degenerate: bool = True) -> ModelSpec:
    """Check a ModelSpec against its parameter domain and return it.

    ``require_coupling=False`` admits g = 0 (legal for plain spectrum
    computations; the quasi-exact machinery divides by g and needs g != 0).
    Emits DegenerateAtomWarning when delta == 0 unless silenced by internal
    callers that never read delta.
    """
    if not (math.isfinite(spec.omega) and spec.omega > 0):
        raise ValidationError(f"omega must be positive and finite, got {spec.omega}")
    if not math.isfinite(spec.g):
        raise ValidationError(f"g must be finite, got {spec.g}")
    if spec.delta is not None:
        if not math.isfinite(spec.delta) or spec.delta < 0:
            raise ValidationError(f"delta must be >= 0, got {spec.delta}")

    if spec.kind is ModelKind.RABI:
        if spec.sector is not None:
            raise BadSector("the Rabi model carries no sector index")
    elif spec.kind is ModelKind.TWO_PHOTON:
        if spec.sector not in TWO_PHOTON_SECTORS:
            raise BadSector(f"2-photon sector must be 1/4 or 3/4, got {spec.sector}")
        if abs(2 * spec.g / spec.omega) >= 1:
            raise CouplingOutOfRange(
                f"|2g/omega| = {abs(2 * spec.g / spec.omega):g} >= 1: "
                "spectral-collapse boundary crossed"
            )
    else:
        if spec.sector is None or spec.sector <= 0 or (2 * spec.sector).denominator != 1:
            raise BadSector(
                f"two-mode sector must be a positive half-integer, got {spec.sector}"
            )
        if abs(spec.g / spec.omega) >= 1:
            raise CouplingOutOfRange(
                f"|g/omega| = {abs(spec.g / spec.omega):g} >= 1: "
                "spectral-collapse boundary crossed"
            )

    if require_coupling and spec.g == 0:
        raise ZeroCoupling("g = 0: atom and field decouple")
    if warn_degenerate and spec.delta == 0.0:
        warnings.warn(
            "delta = 0: spin components decouple into exactly solvable "
            "oscillator branches",
            DegenerateAtomWarning,
            stacklevel=2,
        )
    return spec


@dataclass(frozen=True)
class SqueezeFactor:
    """Squeeze factor and the exponential rate of the Bargmann prefactor.

    Wavefunctions have the form exp(-prefactor_rate * z) * polynomial(z).
    ``value`` is 1 for the Rabi model, Omega = sqrt(1 - 4g^2/omega^2) for
    the 2-photon model and Lambda = sqrt(1 - g^2/omega^2) for the two-mode
    model; it rescales the oscillator spacing of the quasi-exact energies.
    """

    value: float
    prefactor_rate: float


def squeeze_factor(spec: ModelSpec) -> SqueezeFactor:
    """Squeeze factor and prefactor rate for a validated spec."""
    w, g = spec.omega, spec.g
    if spec.kind is ModelKind.RABI:
        return SqueezeFactor(value=1.0, prefactor_rate=g / w)
    if spec.kind is ModelKind.TWO_PHOTON:
        value = math.sqrt(1.0 - 4.0 * g * g / (w * w))
        return SqueezeFactor(value=value, prefactor_rate=w / (4.0 * g) * (1.0 - value))
    value = math.sqrt(1.0 - g * g / (w * w))
    return SqueezeFactor(value=value, prefactor_rate=w / g * (1.0 - value))


def su11_elements(spec: ModelSpec, n: int) -> tuple[float, float, float]:
    """Matrix elements of (K0, K+, K-) on the sector level |n>.

    Returns (k0, kplus_amp, kminus_amp) with k0 = n + sector,
    K+|n> = kplus_amp |n+1> and K-|n> = kminus_amp |n-1>; the lowering
    amplitude vanishes at n = 0.
    """
    if spec.kind is ModelKind.RABI:
        raise WrongModel("su(1,1) elements are defined for the sector models only")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    x = float(spec.sector)
    k0 = n + x
    kplus = math.sqrt((n + 1) * (n + 2 * x))
    kminus = math.sqrt(n * (n + 2 * x - 1)) if n > 0 else 0.0
    return k0, kplus, kminus


def casimir_value(sector) -> float:
    """Casimir eigenvalue K+K- - K0(K0-1) = sector*(1 - sector).

    Both 2-photon sectors give 3/16; the two-mode sector kappa gives
    kappa*(1-kappa).
    """
    x = float(sector)
    return x * (1.0 - x)


@dataclass(frozen=True)
class SectorBasisDescriptor:
    """Mapping from sector level n to Fock content and normalization.

    The Bargmann monomial z^n / sqrt(norm_factorial(n)) represents:
    the Fock state |n> (Rabi), the photon-number state |2(n + q - 1/4)>
    (2-photon), or the pair state |n + 2*kappa - 1, n> (two-mode).
    """

    kind: ModelKind
    sector: Fraction | None = None

    @classmethod
    def for_spec(cls, spec: ModelSpec) -> "SectorBasisDescriptor":
        return cls(kind=spec.kind, sector=spec.sector)

    def fock_content(self, n: int) -> int | tuple[int, int]:
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        if self.kind is ModelKind.RABI:
            return n
        if self.kind is ModelKind.TWO_PHOTON:
            return int(2 * (n + self.sector - Fraction(1, 4)))
        m = int(2 * self.sector - 1)
        return (n + m, n)

    def norm_factorial(self, n: int) -> int:
        """Exact factorial under the square root of the basis normalization."""
        if self.kind is ModelKind.RABI:
            return math.factorial(n)
        if self.kind is ModelKind.TWO_PHOTON:
            return math.factorial(self.fock_content(n))
        n1, n2 = self.fock_content(n)
        return math.factorial(n1) * math.factorial(n2)
