"""Diagnostics: convexity and linearity of the preparable family, affinity
defects of maps between state spaces, factorization residuals, and the
deterministic parameter sweeps behind the standard figures.

The central quantities are defect functionals that vanish exactly when a map
is affine (or a curve is a straight line) and are strictly positive
otherwise; all operator distances use the Frobenius norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PreparationDomainError
from .linalg import kron, partial_trace
from .model import ModelParams, equilibrium_observables
from .prepare import invert_field


@dataclass(frozen=True)
class ConvexityTestResult:
    """Defects of one convex-combination test of the equilibrium preparation.

    F3 solves S1z(F3) = weight*S1z(F1) + (1-weight)*S1z(F2) exactly (by field
    inversion); the defects measure how far S2z and the correlation matrix at
    F3 are from the same convex combination.  Both vanish for all inputs iff
    the preparable set of total states is convex.
    """

    weight: float
    F1: float
    F2: float
    F3: float
    S2_defect: float
    C_defect: float


def convexity_test(model: ModelParams, F1: float, F2: float, weight: float) -> ConvexityTestResult:
    """Check whether mixing two equilibrium preparations stays in the class."""
    if not 0.0 < weight < 1.0:
        raise ValueError(f"mixing weight must lie in (0, 1), got {weight}")
    obs1 = equilibrium_observables(model, F1)
    obs2 = equilibrium_observables(model, F2)
    target_s1z = weight * obs1.S1z + (1.0 - weight) * obs2.S1z
    F3 = invert_field(model, target_s1z)
    obs3 = equilibrium_observables(model, F3)

    s2_defect = abs(obs3.S2z - weight * obs1.S2z - (1.0 - weight) * obs2.S2z)
    c_defect = max(
        abs(getattr(obs3, name) - weight * getattr(obs1, name) - (1.0 - weight) * getattr(obs2, name))
        for name in ("Cxx", "Cyy", "Czz")
    )
    return ConvexityTestResult(weight, F1, F2, F3, float(s2_defect), float(c_defect))


@dataclass(frozen=True)
class LineFit:
    """Least-squares straight line y = slope*x + intercept and its worst residual."""

    slope: float
    intercept: float
    max_residual: float


@dataclass(frozen=True, eq=False)
class LinearityReport:
    """Equilibrium observables on an S1z grid and their straight-line fits.

    curves maps observable name -> sampled values; fits maps the same names
    to LineFit.  A residual significantly above roundoff witnesses that the
    observable is not an affine function of S1z.
    """

    s1z: np.ndarray
    curves: dict
    fits: dict


def _fit_line(x: np.ndarray, y: np.ndarray) -> LineFit:
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.abs(design @ coef - y).max())
    return LineFit(float(coef[0]), float(coef[1]), residual)


def linearity_scan(model: ModelParams, s1z_grid) -> LinearityReport:
    """Evaluate S2z, Cxx, Cyy, Czz against S1z and fit each as a straight line.

    The grid values are S1z targets strictly inside the preparable interval;
    each is realized by inverting the field.
    """
    s1z = np.asarray(s1z_grid, dtype=float)
    if s1z.size < 3:
        raise ValueError(f"linearity scan needs at least 3 grid points, got {s1z.size}")
    rows = [equilibrium_observables(model, invert_field(model, s)) for s in s1z]
    curves = {
        name: np.array([getattr(r, name) for r in rows])
        for name in ("S2z", "Cxx", "Cyy", "Czz")
    }
    fits = {name: _fit_line(s1z, values) for name, values in curves.items()}
    return LinearityReport(s1z, curves, fits)


@dataclass(frozen=True)
class EvennessReport:
    """Parity checks of the equilibrium curves over a symmetric field grid.

    S1z must be odd and Cxx even in the field.  If Cxx[S1z] were affine, the
    parities would force its slope to vanish and Cxx to be constant; the
    spread over the grid measures how far it is from constant, and it
    vanishes iff the two spins are uncoupled.
    """

    odd_defect_S1z: float
    even_defect_Cxx: float
    cxx_spread: float
    cxx_is_constant: bool


def evenness_witness(
    model: ModelParams, fz_max: float = 5.0, steps: int = 101, atol: float = 1e-10
) -> EvennessReport:
    fields = np.linspace(-fz_max, fz_max, steps)
    points = [equilibrium_observables(model, f) for f in fields]
    mirror = [equilibrium_observables(model, -f) for f in fields]
    odd = max(abs(a.S1z + b.S1z) for a, b in zip(points, mirror))
    even = max(abs(a.Cxx - b.Cxx) for a, b in zip(points, mirror))
    cxx = np.array([p.Cxx for p in points])
    spread = float(cxx.max() - cxx.min())
    return EvennessReport(float(odd), float(even), spread, spread <= atol)


def affinity_defect(map_fn, domain_samples, lambdas) -> float:
    """Worst violation of M(lx + (1-l)y) = l M(x) + (1-l) M(y) over the sample.

    map_fn takes and returns operators; domain_samples is a sequence of
    operators whose pairwise convex combinations must also lie in the map's
    domain.  Returns the maximum Frobenius-norm defect over all pairs and
    mixing weights; zero (to roundoff) iff the map is affine on the sample.
    """
    samples = list(domain_samples)
    lambdas = list(lambdas)
    for lam in lambdas:
        if not 0.0 < lam < 1.0:
            raise ValueError(f"mixing weights must lie in (0, 1), got {lam}")
    images = [map_fn(s) for s in samples]
    worst = 0.0
    for (i, x), (j, y) in combinations(enumerate(samples), 2):
        for lam in lambdas:
            mix = lam * x + (1.0 - lam) * y
            try:
                image = map_fn(mix)
            except (PreparationDomainError, DomainError) as err:
                raise PreparationDomainError(
                    f"map domain violated at the convex combination lambda={lam} "
                    f"of samples {i} and {j}: {err}"
                ) from err
            defect = np.linalg.norm(image - lam * images[i] - (1.0 - lam) * images[j])
            worst = max(worst, float(defect))
    return worst


def factorization_residual(rho, dims: tuple[int, int] | None = None) -> float:
    """Frobenius distance of a bipartite state from the product of its marginals.

    ||rho - Tr_env(rho) (x) Tr_sys(rho)||_F, zero iff rho factorizes.
    Invariant under local unitaries u (x) v.
    """
    rho_s = partial_trace(rho, keep=0, dims=dims)
    chi = partial_trace(rho, keep=1, dims=dims)
    return float(np.linalg.norm(np.asarray(rho, dtype=complex) - kron(rho_s, chi)))


class SweepRow(NamedTuple):
    """One line of a field sweep: coupling, field, and the five observables."""

    beta_g: float
    beta_Fz: float
    S1z: float
    S2z: float
    Cxx: float
    Cyy: float
    Czz: float


def figure_sweep(
    beta_e: float, beta_g_values, fz_min: float, fz_max: float, steps: int
) -> list[SweepRow]:
    """Equilibrium observables on a (beta_g, beta_Fz) grid, deterministically ordered.

    The sweep is parametrized by the dimensionless products beta*e, beta*g,
    beta*Fz (beta is set to 1 internally, which is fully general for these
    observables).  Rows are ordered by beta_g first, then beta_Fz.
    """
    beta_g_values = list(beta_g_values)
    if not beta_g_values:
        raise ValueError("need at least one beta_g value")
    if steps < 2:
        raise ValueError(f"need at least 2 field steps, got {steps}")
    if not (np.isfinite(fz_min) and np.isfinite(fz_max) and np.isfinite(beta_e)):
        raise ValueError("sweep bounds and beta_e must be finite")
    if not all(np.isfinite(g) for g in beta_g_values):
        raise ValueError("beta_g values must be finite")
    fields = np.linspace(fz_min, fz_max, steps)
    rows = []
    for beta_g in beta_g_values:
        model = ModelParams(beta=1.0, e=beta_e, g=beta_g)
        for fz in fields:
            p = equilibrium_observables(model, fz)
            rows.append(SweepRow(beta_g, p.beta_Fz, p.S1z, p.S2z, p.Cxx, p.Cyy, p.Czz))
    return rows
