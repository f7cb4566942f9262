"""The two-spin model: Hamiltonian, closed-form spectrum, equilibrium observables.

Spin 1 is the open system, spin 2 the (single-spin) environment.  The
Hamiltonian is

    H = -Fz sigma1_z + e sigma2_z + g sigma1_x sigma2_x,

with an external field Fz acting on the system spin only.  Because H commutes
with sigma1_z sigma2_z it diagonalizes in closed form, and the canonical state
exp(-beta H)/Z has Bloch and correlation components expressible through the
auxiliary functions F+/- below.  Only products beta*e, beta*g, beta*Fz matter
for the equilibrium observables, so sweeps are usually run at beta = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, DomainError
from .linalg import as_operator, dag, herm_eig, kron

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)

PAULIS = (SX, SY, SZ)
# Embeddings on the two-spin space, system factor first.
SIGMA1 = tuple(kron(s, ID2) for s in PAULIS)
SIGMA2 = tuple(kron(ID2, s) for s in PAULIS)

_DEGENERACY_ATOL = 1e-9
# Switch F+/- and cosh ratios to exponent-scaled evaluation above this argument.
_EXP_SCALED_CUTOFF = 350.0


@dataclass(frozen=True)
class ModelParams:
    """Inverse temperature and the two couplings of the Hamiltonian.

    e is the environment-spin splitting, g the x-x coupling constant.  The
    field Fz is not part of the model: it varies per preparation.
    """

    beta: float
    e: float
    g: float

    def __post_init__(self):
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        if not (math.isfinite(self.e) and math.isfinite(self.g)):
            raise DomainError(f"e and g must be finite, got e={self.e}, g={self.g}")


def hamiltonian(p: ModelParams, Fz: float) -> np.ndarray:
    """H = -Fz sigma1_z + e sigma2_z + g sigma1_x sigma2_x as a 4x4 matrix."""
    return -Fz * SIGMA1[2] + p.e * SIGMA2[2] + p.g * kron(SX, SX)


def energies(p: ModelParams, Fz: float) -> np.ndarray:
    """The four eigenvalues in fixed order:

    E1 = -sqrt((Fz-e)^2 + g^2),  E2 = +sqrt((Fz-e)^2 + g^2),
    E3 = -sqrt((Fz+e)^2 + g^2),  E4 = +sqrt((Fz+e)^2 + g^2).

    E1, E2 belong to the even sector of sigma1_z sigma2_z, E3, E4 to the odd.
    """
    r_minus = math.hypot(Fz - p.e, p.g)
    r_plus = math.hypot(Fz + p.e, p.g)
    return np.array([-r_minus, r_minus, -r_plus, r_plus])


def _s1z_expectation(vec: np.ndarray) -> float:
    return float(np.real(np.vdot(vec, SIGMA1[2] @ vec)))


def _numeric_projectors(p: ModelParams, Fz: float) -> list[np.ndarray]:
    """Projectors from the numeric eigensolver, matched to the fixed energy order.

    Used when some eigenvalue vanishes and the closed-form projector
    expressions divide by zero.  Within a degenerate cluster the eigenvectors
    are ordered by <sigma1_z> descending, which pins a deterministic basis.
    """
    ana = energies(p, Fz)
    scale = 1.0 + abs(Fz) + abs(p.e) + abs(p.g)
    w, v = herm_eig(hamiltonian(p, Fz))
    cols = list(range(4))
    # reorder inside degenerate clusters
    start = 0
    while start < 4:
        stop = start + 1
        while stop < 4 and w[stop] - w[start] <= _DEGENERACY_ATOL * scale:
            stop += 1
        if stop - start > 1:
            cols[start:stop] = sorted(
                cols[start:stop], key=lambda j: -_s1z_expectation(v[:, j])
            )
        start = stop
    used = [False] * 4
    projectors: list[np.ndarray] = []
    for target in ana:
        best = min(
            (j for j in range(4) if not used[j]), key=lambda j: abs(w[cols[j]] - target)
        )
        used[best] = True
        vec = v[:, cols[best]]
        projectors.append(np.outer(vec, vec.conj()))
    return projectors


def analytic_spectrum(p: ModelParams, Fz: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """Closed-form eigenvalues and rank-1 eigenprojectors of the Hamiltonian.

    In the even sector (i = 1, 2):

        P_i = 1/4 (1 + sz sz - (Fz-e)/E_i (sz1 + sz2) + g/E_i (sx sx - sy sy)),

    and in the odd sector (i = 3, 4):

        P_i = 1/4 (1 - sz sz - (Fz+e)/E_i (sz1 - sz2) + g/E_i (sx sx + sy sy)).

    The expressions divide by E_i; if any eigenvalue (nearly) vanishes, which
    happens only for g = 0 and Fz = +-e, the projectors fall back to the
    numeric eigendecomposition with a deterministic degenerate-basis choice.
    """
    vals = energies(p, Fz)
    scale = 1.0 + abs(Fz) + abs(p.e) + abs(p.g)
    if np.abs(vals).min() < _DEGENERACY_ATOL * scale:
        return vals, _numeric_projectors(p, Fz)

    szsz = kron(SZ, SZ)
    sxsx = kron(SX, SX)
    sysy = kron(SY, SY)
    sz_sum = SIGMA1[2] + SIGMA2[2]
    sz_dif = SIGMA1[2] - SIGMA2[2]
    projectors = []
    for i, energy in enumerate(vals):
        if i < 2:
            proj = 0.25 * (
                ID4 + szsz - ((Fz - p.e) / energy) * sz_sum + (p.g / energy) * (sxsx - sysy)
            )
        else:
            proj = 0.25 * (
                ID4 - szsz - ((Fz + p.e) / energy) * sz_dif + (p.g / energy) * (sxsx + sysy)
            )
        projectors.append(proj)
    return vals, projectors


def _sinhc(x: float) -> float:
    """sinh(x)/x, even in x; short Taylor series below 1e-4 to avoid cancellation."""
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0
    return math.sinh(x) / x


def aux_F(sign: int, x: float, y: float) -> float:
    """The auxiliary functions

        F+-(x, y) = (y sinh(x) +- x sinh(y)) / (x y (cosh(x) + cosh(y))),

    evaluated as (sinhc(x) +- sinhc(y)) / (cosh(x) + cosh(y)), which is finite
    and accurate also at zero arguments.  Satisfies F+-(x, y) = +-F+-(y, x)
    and is even in each argument separately.  Arguments beyond exp range are
    handled by factoring out the dominant exponential.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    ax, ay = abs(x), abs(y)
    m = max(ax, ay)
    if m <= _EXP_SCALED_CUTOFF:
        return (_sinhc(x) + sign * _sinhc(y)) / (math.cosh(x) + math.cosh(y))

    # (1 - exp(-2a))/a with its a -> 0 limit; paired with exp(a - m) below this
    # reproduces 2 sinh(a) / (a exp(m)).
    def decayed(a: float) -> float:
        if a == 0.0:
            return 2.0
        return -math.expm1(-2.0 * a) / a

    num = math.exp(ax - m) * decayed(ax) + sign * math.exp(ay - m) * decayed(ay)
    den = math.exp(ax - m) * (1.0 + math.exp(-2.0 * ax)) + math.exp(ay - m) * (
        1.0 + math.exp(-2.0 * ay)
    )
    return num / den


def _cosh_ratio(x: float, y: float) -> float:
    """(cosh(x) - cosh(y)) / (cosh(x) + cosh(y)), overflow-safe, even in x and y."""
    ax, ay = abs(x), abs(y)
    m = max(ax, ay)
    if m <= _EXP_SCALED_CUTOFF:
        return (math.cosh(x) - math.cosh(y)) / (math.cosh(x) + math.cosh(y))
    tx = math.exp(ax - m) * (1.0 + math.exp(-2.0 * ax))
    ty = math.exp(ay - m) * (1.0 + math.exp(-2.0 * ay))
    return (tx - ty) / (tx + ty)


class EquilibriumCurvePoint(NamedTuple):
    """Equilibrium observables at one field value (all dimensionless, in [-1, 1])."""

    beta_Fz: float
    S1z: float
    S2z: float
    Cxx: float
    Cyy: float
    Czz: float


def equilibrium_observables(p: ModelParams, Fz: float) -> EquilibriumCurvePoint:
    """Closed-form Bloch and correlation components of exp(-beta H)/Z.

    With x = beta E1 and y = beta E3:

        S1z = beta (Fz F+(x, y) - e F-(x, y))
        S2z = beta (Fz F-(x, y) - e F+(x, y))
        Cxx = -beta g F+(x, y)
        Cyy =  beta g F-(x, y)
        Czz = (cosh(x) - cosh(y)) / (cosh(x) + cosh(y))

    All other Bloch/correlation components of the equilibrium state vanish.
    """
    vals = energies(p, Fz)
    x = p.beta * vals[0]
    y = p.beta * vals[2]
    f_plus = aux_F(+1, x, y)
    f_minus = aux_F(-1, x, y)
    s1z = p.beta * (Fz * f_plus - p.e * f_minus)
    s2z = p.beta * (Fz * f_minus - p.e * f_plus)
    cxx = -p.beta * p.g * f_plus
    cyy = p.beta * p.g * f_minus
    czz = _cosh_ratio(x, y)
    return EquilibriumCurvePoint(p.beta * Fz, s1z, s2z, cxx, cyy, czz)


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    """Two Bloch vectors and the 3x3 correlation matrix of a two-spin state.

    Any 4x4 density matrix is rho = 1/4 (1 + s1.sigma1 + s2.sigma2
    + sigma1.c.sigma2); the decomposition below inverts that exactly.
    """

    s1: np.ndarray
    s2: np.ndarray
    c: np.ndarray


def bloch_decompose(rho) -> BlochDecomposition:
    """Extract (s1, s2, c) from a 4x4 Hermitian unit-trace operator.

    s1_i = Re tr(rho sigma1_i), s2_j = Re tr(rho sigma2_j),
    c_ij = Re tr(rho sigma1_i sigma2_j).
    """
    rho = as_operator(rho)
    if rho.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 operator, got {rho.shape}")
    s1 = np.array([np.trace(rho @ s).real for s in SIGMA1])
    s2 = np.array([np.trace(rho @ s).real for s in SIGMA2])
    c = np.array([[np.trace(rho @ kron(a, b)).real for b in PAULIS] for a in PAULIS])
    return BlochDecomposition(s1, s2, c)


def bloch_compose(b: BlochDecomposition) -> np.ndarray:
    """Rebuild the 4x4 operator from a Bloch decomposition (exact identity)."""
    rho = ID4.copy()
    for i in range(3):
        rho = rho + b.s1[i] * SIGMA1[i] + b.s2[i] * SIGMA2[i]
        for j in range(3):
            rho = rho + b.c[i, j] * kron(PAULIS[i], PAULIS[j])
    return 0.25 * rho


def qubit_bloch(rho) -> np.ndarray:
    """Bloch vector (Re tr(rho sigma_i)) of a 2x2 operator."""
    rho = as_operator(rho)
    if rho.shape != (2, 2):
        raise DimensionError(f"expected a 2x2 operator, got {rho.shape}")
    return np.array([np.trace(rho @ s).real for s in PAULIS])


def reduced_from_bloch(s1) -> np.ndarray:
    """(1 + s1.sigma)/2, the qubit state with Bloch vector s1; pure iff |s1| = 1."""
    s1 = np.asarray(s1, dtype=float)
    if s1.shape != (3,):
        raise DimensionError(f"expected a 3-vector, got shape {s1.shape}")
    norm = float(np.linalg.norm(s1))
    if norm > 1.0 + 1e-10:
        raise DomainError(f"|s1| = {norm} exceeds 1: not a state")
    return 0.5 * (ID2 + s1[0] * SX + s1[1] * SY + s1[2] * SZ)
