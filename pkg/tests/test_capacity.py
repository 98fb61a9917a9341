"""Energy-constrained capacity: closed forms, optimizers, allocation, sweep."""

import math

import numpy as np
import pytest

from conftest import random_orthogonal
from qhomodyne import (
    CapacityResult,
    CovarianceMatrix,
    EnergyForm,
    NoiseMatrix,
    cea_exact,
    cea_multimode,
    cea_one_mode,
    entropy_reduction,
    er_one_mode,
    g,
    ground_energy,
    mean_energy,
    sweep,
    symplectic_eigenvalues,
)
from qhomodyne.errors import DimensionMismatch, DomainError, InfeasibleEnergy
from qhomodyne.mats import cholesky

G_HALF = 0.9547712524422192   # g(1/2)
G_3HALF = 1.6825291675231413  # g(3/2)


class TestEnergyForm:
    def test_oscillator(self):
        h = EnergyForm.oscillator(2.0, s=3)
        np.testing.assert_array_equal(h.eps_qq, 0.5 * np.eye(3))
        np.testing.assert_array_equal(h.eps_pp, 0.5 * np.eye(3))
        assert h.s == 3
        assert h.E == 2.0

    def test_rejects_bad_budget(self):
        with pytest.raises(DomainError):
            EnergyForm.oscillator(0.0)
        with pytest.raises(DomainError):
            EnergyForm.oscillator(-1.0)

    def test_rejects_non_spd(self):
        from qhomodyne.errors import NotPositiveDefinite

        with pytest.raises(NotPositiveDefinite):
            EnergyForm(np.array([[1.0, 2.0], [2.0, 1.0]]), np.eye(2), 1.0)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            EnergyForm(np.eye(2), np.eye(3), 1.0)


class TestMeanEnergy:
    def test_vacuum(self):
        h = EnergyForm.oscillator(1.0)
        assert mean_energy(CovarianceMatrix.vacuum(), h) == pytest.approx(0.5)

    def test_thermal(self):
        h = EnergyForm.oscillator(1.0)
        alpha = CovarianceMatrix.one_mode(3.0, 0.0, 3.0)
        assert mean_energy(alpha, h) == pytest.approx(3.0)

    def test_additive_over_modes(self):
        h = EnergyForm(np.diag([0.5, 1.0]), np.diag([0.5, 2.0]), 5.0)
        a1 = CovarianceMatrix.one_mode(1.0, 0.0, 1.0)
        a2 = CovarianceMatrix.one_mode(2.0, 0.0, 0.5)
        both = CovarianceMatrix.direct_sum([a1, a2])
        expected = (0.5 * 1.0 + 0.5 * 1.0) + (1.0 * 2.0 + 2.0 * 0.5)
        assert mean_energy(both, h) == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mean_energy(CovarianceMatrix.vacuum(2), EnergyForm.oscillator(1.0))


class TestGroundEnergy:
    def test_oscillator(self):
        assert ground_energy(EnergyForm.oscillator(1.0)) == pytest.approx(0.5, abs=1e-12)
        assert ground_energy(EnergyForm.oscillator(1.0, s=4)) == pytest.approx(2.0, abs=1e-12)

    def test_diagonal(self):
        h = EnergyForm(np.diag([1.0, 4.0]), np.diag([1.0, 1.0]), 10.0)
        # per-mode minimum sqrt(eps_q eps_p): 1 + 2
        assert ground_energy(h) == pytest.approx(3.0, abs=1e-10)

    def test_rotation_invariant(self):
        rng = np.random.default_rng(40)
        o = random_orthogonal(rng, 3)
        dq, dp = np.diag([0.5, 1.0, 2.0]), np.diag([0.3, 0.8, 1.1])
        plain = ground_energy(EnergyForm(dq, dp, 10.0))
        rotated = ground_energy(EnergyForm(o @ dq @ o.T, o @ dp @ o.T, 10.0))
        assert rotated == pytest.approx(plain, abs=1e-9)


class TestCeaExact:
    def test_anchors(self):
        assert cea_exact(0.5) == 0.0
        assert cea_exact(1.0) == pytest.approx(G_HALF, abs=1e-9)
        assert cea_exact(2.0) == pytest.approx(G_3HALF, abs=1e-12)
        assert cea_exact(2.0) == pytest.approx(g(1.5), abs=1e-15)

    def test_infeasible(self):
        with pytest.raises(InfeasibleEnergy):
            cea_exact(0.4)


class TestCeaOneMode:
    def test_vacuum_budget_zero(self):
        for beta in (0.1, 1.0, 10.0):
            res = cea_one_mode(beta, 0.5)
            assert res.value == pytest.approx(0.0, abs=1e-12)

    def test_small_noise_approaches_exact(self):
        for E in (0.5, 1.0, 2.0, 4.0):
            res = cea_one_mode(1e-6, E)
            assert g(E - 0.5) - 1e-3 <= res.value <= g(E - 0.5)

    def test_beta_zero_routes_to_exact(self):
        res = cea_one_mode(0.0, 2.0)
        assert res.value == pytest.approx(G_3HALF, abs=1e-14)
        np.testing.assert_allclose(res.optimizer_alpha.full(), np.diag([2.0, 2.0]))
        assert res.constraint_residual == 0.0

    def test_infeasible(self):
        with pytest.raises(InfeasibleEnergy):
            cea_one_mode(1.0, 0.3)

    def test_upper_bound(self):
        for beta in (0.1, 1.0, 5.0, 10.0):
            for E in (0.5, 0.7, 1.0, 2.0, 4.0, 6.0):
                assert cea_one_mode(beta, E).value <= g(E - 0.5) + 1e-9

    def test_monotone_in_energy(self):
        values = [cea_one_mode(1.0, E).value for E in np.linspace(0.5, 6.0, 23)]
        assert all(y >= x - 1e-6 for x, y in zip(values, values[1:]))

    def test_monotone_in_noise(self):
        values = [cea_one_mode(b, 2.0).value for b in (0.1, 0.5, 1.0, 5.0, 10.0)]
        assert all(x >= y - 1e-6 for x, y in zip(values, values[1:]))

    def test_constraint_active_and_window(self):
        for beta in (0.3, 1.0, 5.0):
            for E in (0.6, 1.0, 3.0):
                res = cea_one_mode(beta, E)
                assert abs(res.constraint_residual) <= 1e-8 * E
                a = res.optimizer_alpha.alpha_qq[0, 0]
                w = math.sqrt(E * E - 0.25)
                assert E - w - 1e-9 <= a <= E + w + 1e-9
                # optimizer is a valid state
                assert symplectic_eigenvalues(res.optimizer_alpha)[0] >= 0.5 - 1e-9

    def test_optimizer_attains_value(self):
        res = cea_one_mode(1.0, 2.0)
        a = res.optimizer_alpha
        attained = er_one_mode(a.alpha_qq[0, 0], 0.0, a.alpha_pp[0, 0], 1.0)
        assert attained == pytest.approx(res.value, abs=1e-12)

    def test_qp_perturbation_never_helps(self):
        # the zero-correlation restriction: moving alpha_qp off 0 at the
        # optimum (energy unchanged -- the oscillator form ignores alpha_qp)
        # must not increase ER
        res = cea_one_mode(1.0, 2.0)
        a_qq = res.optimizer_alpha.alpha_qq[0, 0]
        a_pp = res.optimizer_alpha.alpha_pp[0, 0]
        for c in (0.01, -0.01, 0.1, 0.3):
            perturbed = er_one_mode(a_qq, c, a_pp, 1.0)
            assert perturbed <= res.value + 1e-9


class TestCeaMultimode:
    def test_single_mode_consistency(self):
        for beta, E in [(0.5, 1.0), (1.0, 2.0), (5.0, 3.0)]:
            ref = cea_one_mode(beta, E)
            res = cea_multimode(beta, EnergyForm.oscillator(E))
            assert res.value == pytest.approx(ref.value, abs=1e-8)
            assert abs(res.constraint_residual) <= 1e-8 * E

    def test_two_identical_modes_split_evenly(self):
        beta, E = 1.0, 1.5
        res = cea_multimode(beta, EnergyForm.oscillator(2 * E, s=2))
        one = cea_one_mode(beta, E)
        assert res.value == pytest.approx(2 * one.value, abs=1e-8)
        # brute-force over asymmetric splits never beats the symmetric one
        splits = np.linspace(0.5, 2 * E - 0.5, 41)
        brute = max(
            cea_one_mode(beta, e1).value + cea_one_mode(beta, 2 * E - e1).value
            for e1 in splits
        )
        assert res.value >= brute - 1e-9

    def test_low_noise_mode_wins_allocation(self):
        h = EnergyForm.oscillator(1.4, s=2)
        noise = NoiseMatrix(np.diag([0.01, 10.0]))
        res = cea_multimode(noise, h)
        a = res.optimizer_alpha
        e1 = 0.5 * (a.alpha_qq[0, 0] + a.alpha_pp[0, 0])
        e2 = 0.5 * (a.alpha_qq[1, 1] + a.alpha_pp[1, 1])
        assert e1 > e2 + 0.2
        # starved mode parks at the vacuum
        assert e2 == pytest.approx(0.5, abs=1e-6)
        assert res.value == pytest.approx(cea_one_mode(0.01, e1).value, abs=1e-7)

    def test_rotated_problem_matches_diagonal(self):
        rng = np.random.default_rng(41)
        o = random_orthogonal(rng, 2)
        dq = np.diag([0.5, 0.8])
        dp = np.diag([0.5, 0.6])
        db = np.diag([0.7, 2.0])
        E = 3.0
        plain = cea_multimode(NoiseMatrix(db), EnergyForm(dq, dp, E))
        rotated = cea_multimode(
            NoiseMatrix(o @ db @ o.T),
            EnergyForm(o @ dq @ o.T, o @ dp @ o.T, E),
        )
        assert rotated.value == pytest.approx(plain.value, abs=1e-8)

    @pytest.mark.slow
    def test_non_commuting_ascent(self):
        eps_qq = np.array([[1.0, 0.3], [0.3, 2.0]])
        eps_pp = np.eye(2)
        noise = NoiseMatrix(np.diag([0.2, 3.0]))
        h = EnergyForm(eps_qq, eps_pp, 4.0)
        res = cea_multimode(noise, h, restarts=2)
        assert isinstance(res, CapacityResult)
        assert res.converged
        assert abs(res.constraint_residual) <= 1e-8 * h.E
        # the reported value is attained by the reported optimizer
        recheck = entropy_reduction(res.optimizer_alpha, noise).value
        assert recheck == pytest.approx(res.value, abs=1e-9)
        # and beats a naive feasible thermal candidate
        denom = np.trace(eps_qq) + np.trace(eps_pp)
        u = h.E / denom
        assert u > 0.5
        candidate = CovarianceMatrix(u * np.eye(2), np.zeros((2, 2)), u * np.eye(2))
        assert mean_energy(candidate, h) == pytest.approx(h.E, abs=1e-10)
        assert res.value >= entropy_reduction(candidate, noise).value - 1e-6

    def test_infeasible_below_ground(self):
        with pytest.raises(InfeasibleEnergy):
            cea_multimode(1.0, EnergyForm.oscillator(0.8, s=2))

    def test_energy_override(self):
        h = EnergyForm.oscillator(1.0)
        res = cea_multimode(1.0, h, E=2.0)
        assert res.value == pytest.approx(cea_one_mode(1.0, 2.0).value, abs=1e-8)


class TestSweep:
    def test_row_schema(self):
        rows = sweep([1.0], [0.0, 1.0])
        assert len(rows) == 2
        assert list(rows[0]) == [
            "beta",
            "E",
            "C_ea_nats",
            "alpha_qq_opt",
            "alpha_pp_opt",
            "converged",
        ]

    def test_vacuum_budget_all_zero(self):
        rows = sweep([0.5], [0.0, 1.0, 5.0, 10.0])
        assert all(abs(r["C_ea_nats"]) <= 1e-12 for r in rows)

    def test_exact_column(self):
        e_values = [0.5, 1.0, 2.0, 4.0]
        rows = sweep(e_values, [0.0])
        for row, e in zip(rows, e_values):
            assert row["C_ea_nats"] == pytest.approx(g(e - 0.5), abs=1e-14)
            assert row["alpha_qq_opt"] == pytest.approx(e)
            assert row["converged"] is True

    def test_beta_ordering_and_bound(self):
        e_values = list(np.linspace(0.5, 6.0, 12))
        betas = [0.0, 1.0, 5.0, 10.0]
        rows = sweep(e_values, betas)
        by_beta = {b: [r for r in rows if r["beta"] == b] for b in betas}
        for b1, b2 in zip(betas, betas[1:]):
            for r1, r2 in zip(by_beta[b1], by_beta[b2]):
                assert r1["C_ea_nats"] >= r2["C_ea_nats"] - 1e-6
        for r in rows:
            assert -1e-12 <= r["C_ea_nats"] <= g(r["E"] - 0.5) + 1e-9
