"""Quasi-exact (Juddian) solutions: energies, delta^2 branches, roots,
wavefunctions, and the algebraic cross-checks on the roots.

The quasi-exact energy is fixed by termination of the +1 stencil band.
With the energy fixed, delta^2 enters the eliminated operator linearly, so
restricting to polynomials of degree M turns the solvability condition into
an (M+1)x(M+1) linear eigenproblem in delta^2 (the pencil). Every real,
non-negative eigenvalue is one admissible delta^2 branch; the eigenvector
holds the polynomial coefficients, and the roots are read off a companion
matrix. The root systems and parameter constraints provide independent
verification of each branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import permutations

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DegenerateAtomBranch,
    DegenerateRoots,
    IllConditioned,
    NoPhysicalSolution,
)
from .models import (
    ModelKind,
    ModelSpec,
    SectorBasisDescriptor,
    squeeze_factor,
    validate,
)
from .stencil import (
    OdeStencil,
    apply_first_factor,
    apply_ode,
    apply_second_factor,
    ode_stencil,
)

# A branch with delta^2 below this is the decoupled degenerate-atom case.
DEGENERATE_DELTA_SQ = 1e-9

# Residual gates used when records are emitted / solutions verified.
ODE_RESIDUAL_TOL = 1e-8
BAE_RESIDUAL_TOL = 1e-8
CONSTRAINT_RESIDUAL_TOL = 1e-8

_EIG_IMAG_TOL = 1e-9
_EIG_NEG_TOL = 1e-9


class Branch(str, Enum):
    NONTRIVIAL = "nontrivial"
    DEGENERATE_ATOM = "degenerate-atom"


@dataclass(eq=False)
class QesSolution:
    """One Juddian point: degree, energy, delta^2, monic polynomial, roots.

    ``spec`` carries delta = +sqrt(delta_squared); the spectrum is invariant
    under delta -> -delta (the lower component flips sign), so only the
    non-negative square root is reported.
    """

    spec: ModelSpec
    degree: int
    energy: float
    delta_squared: float
    roots: np.ndarray
    coeffs: np.ndarray
    branch: Branch

    @property
    def delta(self) -> float:
        return self.spec.delta


@dataclass(eq=False)
class BargmannWavefunction:
    """Two spinor components, each exp(-prefactor_rate*z) * polynomial(z)."""

    prefactor_rate: float
    plus_coeffs: np.ndarray
    minus_coeffs: np.ndarray
    basis: SectorBasisDescriptor


def qes_energy(spec: ModelSpec, degree: int) -> float:
    """Closed-form energy of the degree-M quasi-exact level."""
    spec = validate(spec)
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    w = spec.omega
    if spec.kind is ModelKind.RABI:
        return w * (degree - spec.g**2 / w**2)
    sq = squeeze_factor(spec).value
    if spec.kind is ModelKind.TWO_PHOTON:
        return -0.5 * w + (2 * degree + 2 * float(spec.sector)) * w * sq
    return -w + (2 * degree + 2 * float(spec.sector)) * w * sq


def delta_pencil(spec: ModelSpec, degree: int) -> np.ndarray:
    """Matrix A of the restriction of the eliminated operator to degree M.

    Acting on coefficient vectors (c_0..c_M), the polynomial solvability
    condition at the quasi-exact energy reads
    (A + delta_sq_sign * delta^2 * I) c = 0. A is banded with entries only
    at row - column offsets {+1, 0, -1, -2}; the would-be row M+1 vanishes
    identically by termination.
    """
    energy = qes_energy(spec, degree)
    st = ode_stencil(spec, degree, energy)
    n = degree + 1
    a = np.zeros((n, n))
    for k in range(n):
        for b in (+1, 0, -1, -2):
            r = k + b
            if 0 <= r < n:
                a[r, k] = st.band(b, k)
    return a


def _mirror_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """Monic coefficients of p(-z) up to sign, i.e. roots negated."""
    m = len(coeffs) - 1
    signs = np.array([(-1.0) ** (m - k) for k in range(m + 1)])
    return coeffs * signs


def solve_qes(spec: ModelSpec, degree: int) -> list[QesSolution]:
    """All admissible delta^2 branches at this (model, g, degree).

    Pencil eigenvalues mu give candidates delta^2 = -delta_sq_sign * mu;
    a candidate is retained when its imaginary part is below
    1e-9 * (1 + |mu|) and its real part is >= -1e-9. Branches with
    delta^2 < 1e-9 are tagged as the degenerate-atom case. Results are
    sorted by delta^2 ascending. Negative g is handled through the exact
    sign symmetry g -> -g, z -> -z.
    """
    spec = validate(spec)
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    mirrored = spec.g < 0
    work = spec if not mirrored else ModelSpec(
        spec.kind, spec.omega, -spec.g, spec.delta, spec.sector
    )

    a = delta_pencil(work, degree)
    energy = qes_energy(work, degree)
    sign = ode_stencil(work, degree, energy).delta_sq_sign
    mu, vecs = np.linalg.eig(a)
    scale = max(np.max(np.abs(a)), 1.0)

    solutions = []
    for i in range(len(mu)):
        m = mu[i]
        if abs(m.imag) > _EIG_IMAG_TOL * (1.0 + abs(m)):
            continue
        d2 = -sign * m.real
        if d2 < -_EIG_NEG_TOL:
            continue
        v = vecs[:, i]
        if v[-1] == 0:
            raise IllConditioned(
                "leading polynomial coefficient exactly zero", residual=0.0
            )
        # Coefficients may legitimately span many orders of magnitude
        # (large-delta branches have large roots); the eigenpair residual
        # below is normalization invariant and is the real quality gate.
        v = v / v[-1]
        if np.iscomplexobj(v):
            imag = float(np.max(np.abs(v.imag)))
            if imag > 1e-8 * np.max(np.abs(v.real)):
                raise IllConditioned("eigenvector not real after phase fix", residual=imag)
            v = v.real
        res = float(np.max(np.abs(a @ v - m.real * v)) / (scale * np.max(np.abs(v))))
        if res > 1e-8:
            raise IllConditioned("pencil eigenpair residual too large", residual=res)

        d2 = max(d2, 0.0)
        coeffs = v
        if mirrored:
            coeffs = _mirror_coeffs(coeffs)
        roots = npoly.polyroots(coeffs)
        roots = roots[np.lexsort((roots.imag, roots.real))]
        branch = Branch.DEGENERATE_ATOM if d2 < DEGENERATE_DELTA_SQ else Branch.NONTRIVIAL
        solutions.append(QesSolution(
            spec=spec.with_delta(math.sqrt(d2)),
            degree=degree,
            energy=energy,
            delta_squared=d2,
            roots=roots,
            coeffs=coeffs,
            branch=branch,
        ))

    if not solutions:
        raise NoPhysicalSolution(
            f"no real delta^2 >= 0 at g={spec.g:g}, degree={degree}"
        )
    solutions.sort(key=lambda s: s.delta_squared)
    return solutions


def solution_stencil(solution: QesSolution) -> OdeStencil:
    return ode_stencil(solution.spec, solution.degree, solution.energy)


def ode_residual(solution: QesSolution) -> float:
    """Max-norm of the operator image of the solution polynomial, relative
    to the largest coefficient."""
    st = solution_stencil(solution)
    img = apply_ode(st, solution.delta_squared, solution.coeffs)
    return float(np.max(np.abs(img)) / np.max(np.abs(solution.coeffs)))


def _root_prechecks(solution: QesSolution) -> np.ndarray:
    roots = solution.roots
    scale = max(float(np.max(np.abs(roots))), 1e-300)
    m = len(roots)
    for i in range(m):
        for j in range(i + 1, m):
            if abs(roots[i] - roots[j]) <= 1e-10 * scale:
                raise DegenerateRoots(
                    f"roots {i} and {j} coincide within 1e-10 relative"
                )
    if solution.spec.kind is ModelKind.RABI:
        w, g = solution.spec.omega, solution.spec.g
        for i in range(m):
            if min(abs(w * roots[i] - g), abs(w * roots[i] + g)) <= 1e-12:
                raise DegenerateRoots(
                    f"root {i} sits at a pole z = +/- g/omega of the root equations"
                )
    return roots


def bae_residual(solution: QesSolution) -> float:
    """Largest violation of the algebraic root-system equations.

    The Rabi equations are evaluated with denominators cleared through
    (omega z_i - g)(omega z_i + g); the fourth-order models use the full
    multi-index sums over ordered tuples of distinct roots. A correct
    solution stays below 1e-8 * max(1, max|z_i|)^3.
    """
    z = _root_prechecks(solution)
    w, g = solution.spec.omega, solution.spec.g
    m = solution.degree
    idx = range(m)

    def s2(i):
        return sum(2.0 / (z[i] - z[j]) for j in idx if j != i)

    def s3(i):
        return sum(3.0 / ((z[i] - z[l]) * (z[i] - z[j]))
                   for l, j in permutations([t for t in idx if t != i], 2))

    def s4(i):
        return sum(4.0 / ((z[i] - z[p]) * (z[i] - z[l]) * (z[i] - z[j]))
                   for p, l, j in permutations([t for t in idx if t != i], 3))

    worst = 0.0
    if solution.spec.kind is ModelKind.RABI:
        for i in idx:
            lhs = s2(i) * (w * z[i] - g) * (w * z[i] + g)
            rhs = (2.0 * w * g * z[i] ** 2 + (2 * m - 1) * w * w * z[i]
                   + g * (w * w - 2.0 * g * g) / w)
            worst = max(worst, abs(lhs - rhs))
        return worst

    sq = squeeze_factor(solution.spec).value
    x = float(solution.spec.sector)
    if solution.spec.kind is ModelKind.TWO_PHOTON:
        for i in idx:
            val = (g * g * z[i] ** 2 * s4(i)
                   + g * (w * (sq - 1.0) * z[i] ** 2 + 4.0 * g * (x + 0.5) * z[i]) * s3(i)
                   + (0.25 * w * w * (sq * sq - 3.0 * sq + 1.0) * z[i] ** 2
                      + w * g * (3.0 * (x + 0.5) * sq - 3.0 * x - 1.0) * z[i]
                      + 4.0 * g * g * x * (x + 0.5)) * s2(i)
                   + w**3 / (8.0 * g) * sq * (1.0 - sq) * z[i] ** 2
                   + 0.5 * w * w * (m * sq + (x + 0.5) * sq * (sq - 2.0) + x) * z[i]
                   + 2.0 * w * g * x * ((x + 0.5) * sq - x))
            worst = max(worst, abs(val))
        return worst

    for i in idx:
        val = (g * g * z[i] ** 2 * s4(i)
               + 4.0 * g * (w * (sq - 1.0) * z[i] ** 2 + g * (x + 0.5) * z[i]) * s3(i)
               + (4.0 * w * w * (sq * sq - 3.0 * sq + 1.0) * z[i] ** 2
                  + 4.0 * w * g * (3.0 * (x + 0.5) * sq - 3.0 * x - 1.0) * z[i]
                  + 4.0 * g * g * x * (x + 0.5)) * s2(i)
               + 8.0 * w**3 / g * sq * (1.0 - sq) * z[i] ** 2
               + 8.0 * w * w * (m * sq + (x + 0.5) * sq * (sq - 2.0) + x) * z[i]
               + 8.0 * w * g * x * ((x + 0.5) * sq - x))
        worst = max(worst, abs(val))
    return worst


def bae_scale(solution: QesSolution) -> float:
    """Tolerance scale for bae_residual: max(1, max|z_i|)^3."""
    return max(1.0, float(np.max(np.abs(solution.roots)))) ** 3


def constraint_residual(solution: QesSolution) -> float:
    """|LHS| of the parameter constraint tying delta^2 to the root sum.

    A consistent branch stays below 1e-8 * max(1, delta^2): the pencil
    eigenvalue must reproduce the closed-form constraint.
    """
    w, g = solution.spec.omega, solution.spec.g
    m = solution.degree
    d2 = solution.delta_squared
    zsum = complex(np.sum(solution.roots))
    if solution.spec.kind is ModelKind.RABI:
        return abs(d2 + 2.0 * m * g * g + 2.0 * w * g * zsum)
    sq = squeeze_factor(solution.spec).value
    x = float(solution.spec.sector)
    if solution.spec.kind is ModelKind.TWO_PHOTON:
        return abs(d2 + 4.0 * w * w * (1.0 - sq)
                   * (m * (m + 2.0 * x - 1.0) + w / (2.0 * g) * sq * zsum))
    return abs(d2 + 4.0 * w * w * (1.0 - sq)
               * (m * (m + 2.0 * x - 1.0) + 2.0 * w / g * sq * zsum))


def _trim(coeffs: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    cut = rel * max(1.0, float(np.max(np.abs(coeffs))))
    n = len(coeffs)
    while n > 1 and abs(coeffs[n - 1]) <= cut:
        n -= 1
    return coeffs[:n]


def second_component(solution: QesSolution, delta: float | None = None) -> BargmannWavefunction:
    """Lower spinor component via elimination: minus = -(1/delta) L1 plus.

    The exactly solvable factor never raises the degree, so the lower
    polynomial stays inside the invariant subspace (in fact its degree
    drops to at most degree - 1 at the quasi-exact energy). Passing
    ``delta=-solution.delta`` realizes the delta -> -delta sign flip.
    """
    if solution.branch is Branch.DEGENERATE_ATOM:
        raise DegenerateAtomBranch(
            "delta = 0: lower component not defined by the elimination formula"
        )
    if delta is None:
        delta = solution.delta
    plus = solution.coeffs
    minus = -apply_first_factor(solution.spec, solution.energy, plus) / delta
    return BargmannWavefunction(
        prefactor_rate=squeeze_factor(solution.spec).prefactor_rate,
        plus_coeffs=plus,
        minus_coeffs=_trim(minus),
        basis=SectorBasisDescriptor.for_spec(solution.spec),
    )


def coupled_residuals(solution: QesSolution, wf: BargmannWavefunction) -> tuple[float, float]:
    """Max-norm residuals of the two coupled spinor equations.

    Equation 1 defines the lower component (L1 plus = -delta minus);
    equation 2 closes the system (L2 minus = -delta plus for the Rabi
    model, +delta plus for the sector models).
    """
    d = solution.delta
    e = solution.energy
    r1 = apply_first_factor(solution.spec, e, wf.plus_coeffs)
    n1 = max(len(r1), len(wf.minus_coeffs))
    eq1 = np.zeros(n1)
    eq1[: len(r1)] += r1
    eq1[: len(wf.minus_coeffs)] += d * wf.minus_coeffs
    r2 = apply_second_factor(solution.spec, e, wf.minus_coeffs)
    sgn = 1.0 if solution.spec.kind is ModelKind.RABI else -1.0
    n2 = max(len(r2), len(wf.plus_coeffs))
    eq2 = np.zeros(n2)
    eq2[: len(r2)] += r2
    eq2[: len(wf.plus_coeffs)] += sgn * d * wf.plus_coeffs
    return float(np.max(np.abs(eq1))), float(np.max(np.abs(eq2)))


def wavefunction_eval(wf: BargmannWavefunction, points) -> np.ndarray:
    """Sample both components on a grid: rows are exp(-rate*z) * poly(z)."""
    z = np.asarray(points, dtype=complex)
    pre = np.exp(-wf.prefactor_rate * z)
    return np.vstack([
        pre * npoly.polyval(z, wf.plus_coeffs),
        pre * npoly.polyval(z, wf.minus_coeffs),
    ])
