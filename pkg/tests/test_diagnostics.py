import math

import numpy as np
import pytest

from spinprep import (
    Equilibrium,
    MoriLinearResponse,
    PreparationDomainError,
    affinity_defect,
    blow_up,
    chebyshev_targets,
    convexity_test,
    equilibrium_state,
    evenness_witness,
    factorization_residual,
    figure_sweep,
    kron,
    linearity_scan,
    reduced_from_bloch,
)
from spinprep.model import SZ, ModelParams

from conftest import assert_close, random_density

MODEL15 = ModelParams(1.0, 1.0, 1.5)
MODEL0 = ModelParams(1.0, 1.0, 0.0)


def z_state(s1z):
    return reduced_from_bloch(np.array([0.0, 0.0, s1z]))


class TestConvexityTest:
    def test_equal_fields_no_defect(self):
        r = convexity_test(MODEL15, 1.3, 1.3, 0.4)
        assert r.S2_defect < 1e-14
        assert r.C_defect < 1e-14
        assert abs(r.F3 - 1.3) < 1e-10

    def test_uncoupled_class_is_convex(self):
        for f1, f2, lam in [(-2.0, 2.0, 0.5), (-1.0, 0.5, 0.25), (0.3, 1.7, 0.75)]:
            r = convexity_test(MODEL0, f1, f2, lam)
            assert r.S2_defect < 1e-10
            assert r.C_defect < 1e-10

    def test_coupled_class_is_not_convex(self, baselines):
        # every tested coupling produces a defect well above threshold
        for beta_g in (0.5, 1.0, 1.5):
            r = convexity_test(ModelParams(1.0, 1.0, beta_g), -2.0, 2.0, 0.5)
            assert max(r.S2_defect, r.C_defect) > 1e-4
        r = convexity_test(MODEL15, -2.0, 2.0, 0.5)
        assert r.C_defect > 1e-4
        # canonical lattice maximum is pinned from the oracle run
        frozen = baselines["convexity_max_defect_bg_1.5"]
        fields = np.linspace(-2.0, 2.0, 5)
        worst = 0.0
        for f1 in fields:
            for f2 in fields:
                for lam in (0.25, 0.5, 0.75):
                    rr = convexity_test(MODEL15, float(f1), float(f2), lam)
                    worst = max(worst, rr.S2_defect, rr.C_defect)
        assert abs(worst - frozen) <= 0.01 * frozen

    def test_weight_validated(self):
        with pytest.raises(ValueError):
            convexity_test(MODEL15, -1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            convexity_test(MODEL15, -1.0, 1.0, 1.0)

    def test_s1z_component_exact_by_construction(self):
        from spinprep.model import equilibrium_observables

        r = convexity_test(MODEL15, -1.5, 0.8, 0.3)
        s3 = equilibrium_observables(MODEL15, r.F3).S1z
        s1 = equilibrium_observables(MODEL15, r.F1).S1z
        s2 = equilibrium_observables(MODEL15, r.F2).S1z
        assert abs(s3 - 0.3 * s1 - 0.7 * s2) < 1e-12


class TestLinearityScan:
    def test_uncoupled_curves_are_straight(self):
        report = linearity_scan(MODEL0, np.linspace(-0.9, 0.9, 21))
        for fit in report.fits.values():
            assert fit.max_residual < 1e-9
        # S2z is constant -tanh(beta e); Czz = S1z * S2z
        assert abs(report.fits["S2z"].slope) < 1e-12
        assert abs(report.fits["S2z"].intercept + math.tanh(1.0)) < 1e-12
        assert abs(report.fits["Czz"].slope + math.tanh(1.0)) < 1e-12
        assert abs(report.fits["Czz"].intercept) < 1e-12

    def test_coupled_curves_deviate(self, baselines):
        report = linearity_scan(MODEL15, np.linspace(-0.9, 0.9, 21))
        for name in ("Cxx", "Cyy"):
            frozen = baselines["correlation_wide_residual"][name]
            measured = report.fits[name].max_residual
            assert measured > 0.0
            assert abs(measured - frozen) <= 0.01 * frozen

    def test_narrow_window_is_much_more_linear(self):
        wide = linearity_scan(MODEL15, np.linspace(-0.9, 0.9, 21))
        narrow = linearity_scan(MODEL15, np.linspace(-0.05, 0.05, 21))
        for name in ("Cxx", "Cyy"):
            assert wide.fits[name].max_residual >= 10.0 * narrow.fits[name].max_residual

    def test_grid_too_small(self):
        with pytest.raises(ValueError):
            linearity_scan(MODEL15, [0.0, 0.1])


class TestEvennessWitness:
    def test_uncoupled_cxx_constant(self):
        report = evenness_witness(MODEL0)
        assert report.cxx_is_constant
        assert report.cxx_spread < 1e-14

    def test_coupled_cxx_varies(self):
        report = evenness_witness(MODEL15)
        assert not report.cxx_is_constant
        assert report.cxx_spread > 0.01

    def test_parity_defects_small_for_all_couplings(self):
        for beta_g in (0.0, 0.5, 1.0, 1.5):
            report = evenness_witness(ModelParams(1.0, 1.0, beta_g))
            assert report.odd_defect_S1z < 1e-12
            assert report.even_defect_Cxx < 1e-12


class TestAffinityDefect:
    def test_exact_affine_map(self, rng):
        lin = rng.standard_normal((4, 4)) * 0.2
        const = random_density(rng, 4)

        def amap(rho):
            coeffs = np.array([rho[0, 0].real, rho[0, 1].real, rho[1, 0].imag, rho[1, 1].real])
            return const + sum(c * m for c, m in zip(coeffs, [np.eye(4) * x for x in lin[0]]))

        samples = [random_density(rng, 2) for _ in range(4)]
        assert affinity_defect(amap, samples, [0.25, 0.5, 0.75]) < 1e-13

    def test_factorizing_blow_up_affine(self, rng):
        from spinprep import Factorizing

        prep = Factorizing(random_density(rng, 2))
        samples = [random_density(rng, 2) for _ in range(5)]
        assert affinity_defect(lambda r: blow_up(prep, r), samples, [0.25, 0.5, 0.75]) < 1e-13

    def test_equilibrium_blow_up_not_affine(self, baselines):
        prep = Equilibrium(MODEL15)
        targets = chebyshev_targets(5, -0.9, 0.9)
        samples = [z_state(float(s)) for s in targets]
        defect = affinity_defect(lambda r: blow_up(prep, r), samples, [0.25, 0.5, 0.75])
        frozen = baselines["equilibrium_affinity_defect_bg_1.5"]
        assert defect > 1e-3
        assert abs(defect - frozen) <= 0.01 * frozen

    def test_uncoupled_equilibrium_blow_up_affine(self):
        prep = Equilibrium(MODEL0)
        samples = [z_state(float(s)) for s in chebyshev_targets(5, -0.9, 0.9)]
        assert affinity_defect(lambda r: blow_up(prep, r), samples, [0.25, 0.5, 0.75]) < 1e-9

    def test_mori_blow_up_affine(self):
        model = ModelParams(1.0, 1.0, 1.0)
        prep = MoriLinearResponse(model, (SZ,))
        samples = [z_state(s) for s in np.linspace(-0.04, 0.04, 5)]
        assert affinity_defect(lambda r: blow_up(prep, r), samples, [0.25, 0.5, 0.75]) < 1e-12

    def test_domain_error_carries_combination(self):
        # non-convex toy domain: polarized states are fine, mixtures are not
        def partial_domain(rho):
            if abs(rho[0, 0].real - 0.5) < 0.2:
                raise PreparationDomainError("outside the toy domain")
            return kron(rho, np.eye(2) / 2)

        samples = [z_state(0.9), z_state(-0.9)]
        with pytest.raises(PreparationDomainError) as err:
            affinity_defect(partial_domain, samples, [0.5])
        assert "lambda=0.5" in str(err.value)
        assert "samples 0 and 1" in str(err.value)

    def test_weights_validated(self):
        with pytest.raises(ValueError):
            affinity_defect(lambda r: r, [z_state(0.1), z_state(-0.1)], [1.5])


class TestFactorizationResidual:
    def test_product_state(self, rng):
        rho = kron(random_density(rng, 2), random_density(rng, 2))
        assert factorization_residual(rho) < 1e-13

    def test_bell_state_value(self):
        # marginals of the Bell state are both 1/2, so the residual is
        # ||bell - 1/4||_F; the eigenvalues of the difference are
        # (3/4, -1/4, -1/4, -1/4), giving sqrt(3)/2
        v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
        bell = np.outer(v, v.conj())
        assert abs(factorization_residual(bell) - math.sqrt(3) / 2) < 1e-13

    def test_local_unitary_invariance(self, rng):
        from spinprep import matrix_function

        from conftest import random_hermitian

        rho = random_density(rng, 4)
        u = matrix_function(random_hermitian(rng, 2), lambda w: np.exp(1j * w))
        v = matrix_function(random_hermitian(rng, 2), lambda w: np.exp(1j * w))
        local = kron(u, v)
        rotated = local @ rho @ local.conj().T
        assert abs(factorization_residual(rotated) - factorization_residual(rho)) < 1e-12

    def test_decay_at_large_fields(self):
        model = ModelParams(1.0, 1.0, 1.0)
        values = [
            factorization_residual(equilibrium_state(model, fz)) for fz in (4.0, 6.0, 8.0)
        ]
        assert values[0] > values[1] > values[2]


class TestFigureSweep:
    def test_row_count_and_order(self):
        rows = figure_sweep(1.0, [0.5, 1.0, 1.5], -5.0, 5.0, 201)
        assert len(rows) == 603
        beta_gs = [r.beta_g for r in rows]
        assert beta_gs == sorted(beta_gs, key=lambda x: beta_gs.index(x))  # grouped
        assert [r.beta_g for r in rows[:201]] == [0.5] * 201
        fz = [r.beta_Fz for r in rows[:201]]
        assert fz == sorted(fz)

    def test_monotone_bloch_curves(self):
        rows = figure_sweep(1.0, [0.5, 1.0, 1.5], -5.0, 5.0, 201)
        for beta_g in (0.5, 1.0, 1.5):
            s1z = [r.S1z for r in rows if r.beta_g == beta_g]
            assert all(b > a for a, b in zip(s1z, s1z[1:]))

    def test_uncoupled_s2z_constant(self):
        rows = figure_sweep(1.0, [0.0], -5.0, 5.0, 51)
        s2z = np.array([r.S2z for r in rows])
        assert np.abs(s2z + math.tanh(1.0)).max() < 1e-12

    def test_malformed_grids(self):
        with pytest.raises(ValueError):
            figure_sweep(1.0, [], -5.0, 5.0, 10)
        with pytest.raises(ValueError):
            figure_sweep(1.0, [1.0], -5.0, 5.0, 1)
        with pytest.raises(ValueError):
            figure_sweep(1.0, [1.0], -np.inf, 5.0, 10)

    def test_deterministic(self):
        a = figure_sweep(1.0, [0.5, 1.5], -3.0, 3.0, 21)
        b = figure_sweep(1.0, [0.5, 1.5], -3.0, 3.0, 21)
        assert a == b
