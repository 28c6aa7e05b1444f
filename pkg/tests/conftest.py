"""Shared fixtures and independent helpers for the test suite.

The helpers here deliberately avoid the package's own code paths where
they serve as oracles: the direct photon-basis Hamiltonian and the
log-space Fock expansion of the analytic wavefunctions are built from
scratch so they can cross-check the library.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from qes_rabi import ModelKind, ModelSpec


def rabi_spec(g=0.3, omega=1.0, delta=None):
    return ModelSpec(ModelKind.RABI, omega, g, delta)


def two_photon_spec(g=0.3, omega=1.0, delta=None, sector=Fraction(1, 4)):
    return ModelSpec(ModelKind.TWO_PHOTON, omega, g, delta, sector)


def two_mode_spec(g=0.6, omega=1.0, delta=None, sector=Fraction(1, 2)):
    return ModelSpec(ModelKind.TWO_MODE, omega, g, delta, sector)


# One representative safely-coupled spec per model; g ranges give the
# part of each validity domain used for randomized parameter draws.
MODEL_G_RANGES = {
    ModelKind.RABI: (0.05, 0.45),
    ModelKind.TWO_PHOTON: (0.05, 0.45),
    ModelKind.TWO_MODE: (0.05, 0.85),
}

ALL_SECTORS = {
    ModelKind.RABI: [None],
    ModelKind.TWO_PHOTON: [Fraction(1, 4), Fraction(3, 4)],
    ModelKind.TWO_MODE: [Fraction(1, 2), Fraction(1), Fraction(3, 2)],
}


def make_spec(kind: ModelKind, g: float, omega: float = 1.0, sector=None, delta=None):
    if sector is None and kind is not ModelKind.RABI:
        sector = ALL_SECTORS[kind][0]
    return ModelSpec(kind, omega, g, delta, sector)


def random_specs(kind: ModelKind, count: int, seed: int) -> list[ModelSpec]:
    """Seeded draws of (omega, g) inside the validity domain."""
    rng = np.random.default_rng(seed)
    lo, hi = MODEL_G_RANGES[kind]
    specs = []
    for _ in range(count):
        omega = rng.uniform(0.5, 2.0)
        g = rng.uniform(lo, hi) * omega
        specs.append(make_spec(kind, g, omega))
    return specs


def direct_two_photon_hamiltonian(omega: float, g: float, delta: float,
                                  photon_cutoff: int) -> np.ndarray:
    """2-photon Hamiltonian assembled in the raw photon basis.

    Basis |m> x {sigma_x = +1, -1}, m < photon_cutoff, index = 2m + si.
    Uses only <m+2|(a^dag)^2|m> = sqrt((m+1)(m+2)); independent of the
    package's su(1,1) sector machinery.
    """
    dim = 2 * photon_cutoff
    h = np.zeros((dim, dim))
    for m in range(photon_cutoff):
        for si, s in enumerate((1.0, -1.0)):
            i = 2 * m + si
            h[i, i] = omega * m
            if m + 2 < photon_cutoff:
                j = 2 * (m + 2) + si
                h[i, j] = h[j, i] = s * g * math.sqrt((m + 1) * (m + 2))
        h[2 * m, 2 * m + 1] = h[2 * m + 1, 2 * m] = delta
    return h


def _log_norm(spec: ModelSpec, n: int) -> float:
    """log of the basis normalization factorial (under the square root)."""
    if spec.kind is ModelKind.RABI:
        return math.lgamma(n + 1)
    x = float(spec.sector)
    if spec.kind is ModelKind.TWO_PHOTON:
        return math.lgamma(2 * (n + x - 0.25) + 1)
    return math.lgamma(n + 2 * x) + math.lgamma(n + 1)


def fock_coefficients(spec: ModelSpec, rate: float, poly: np.ndarray,
                      n_max: int) -> np.ndarray:
    """Basis coefficients of exp(-rate*z) * poly(z) in the sector basis.

    Each monomial contribution is accumulated in log space so the huge
    normalization factorials never overflow. Real polynomials only.
    """
    out = np.zeros(n_max + 1)
    loglam = math.log(abs(rate))
    sgnlam = -1.0 if rate > 0 else 1.0
    for n in range(n_max + 1):
        acc = 0.0
        for j, pj in enumerate(poly):
            m = n - j
            if m < 0 or pj == 0:
                continue
            logmag = (m * loglam - math.lgamma(m + 1)
                      + 0.5 * _log_norm(spec, n) + math.log(abs(pj)))
            acc += (sgnlam ** m) * math.copysign(1.0, pj) * math.exp(logmag)
        out[n] = acc
    return out
