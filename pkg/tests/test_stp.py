import numpy as np
import pytest

from qpdsim import (
    BRANCHES,
    CATALOG_LABELS,
    DELTA_EPS,
    EmptyInputError,
    GridMismatchError,
    StpRecord,
    build_hamiltonian,
    catalog_case,
    chi_at,
    chi_initial,
    chi_series,
    choice_probability,
    evolve,
    initial_mental_state,
    stp_delta,
    stp_delta_bound,
    stp_records,
    stp_verdict,
    time_grid,
    unitary_from_hamiltonian,
)
from support import random_hamiltonian_params, random_scenario

SATISFYING = ("1", "1*", "2")
VIOLATING = ("3", "3*", "4", "4*")


def branch_trajectories(spec, params=None, times=None):
    h = build_hamiltonian(params) if params is not None else build_hamiltonian()
    if times is None:
        times = time_grid()
    return {alpha: evolve(initial_mental_state(spec, alpha), h, times) for alpha in BRANCHES}


class TestChoiceProbability:
    def test_pure_defect_prediction_and_action(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1.0
        assert choice_probability(rho) == 1.0

    def test_maximally_mixed(self):
        assert choice_probability(np.eye(4) / 4) == pytest.approx(0.5)

    def test_mixture_law_exact_at_t0(self):
        # the correction matrix has an identically zero diagonal initially,
        # so the uncertain branch obeys the classical mixture at t = 0
        for label in CATALOG_LABELS:
            spec = catalog_case(label)
            p_u = choice_probability(initial_mental_state(spec, "u"))
            p_d = choice_probability(initial_mental_state(spec, "d"))
            p_c = choice_probability(initial_mental_state(spec, "c"))
            assert p_u == pytest.approx(spec.p_b * p_d + (1 - spec.p_b) * p_c, abs=1e-14)


class TestChiSeries:
    def test_t0_matches_initial_construction(self):
        spec = catalog_case("3*")
        trajs = branch_trajectories(spec, times=time_grid(samples=8))
        chi0 = chi_at(trajs["u"], trajs["d"], trajs["c"], spec.p_b, 0)
        np.testing.assert_allclose(chi0, chi_initial(spec), atol=1e-13)

    def test_grid_mismatch_rejected(self):
        spec = catalog_case("3")
        h = build_hamiltonian()
        traj_a = evolve(initial_mental_state(spec, "u"), h, time_grid(samples=8))
        traj_b = evolve(initial_mental_state(spec, "d"), h, time_grid(samples=16))
        with pytest.raises(GridMismatchError):
            chi_series(traj_a, traj_b, traj_b, spec.p_b)

    def test_two_computation_paths_agree(self):
        # subtraction of evolved branches versus direct conjugation of chi(0)
        spec = catalog_case("3*")
        times = time_grid(samples=257)
        trajs = branch_trajectories(spec, times=times)
        chi = chi_series(trajs["u"], trajs["d"], trajs["c"], spec.p_b)
        h = build_hamiltonian()
        chi0 = chi_initial(spec)
        for k in (1, 64, 200, 256):
            u = unitary_from_hamiltonian(h, times[k])
            np.testing.assert_allclose(chi[k], u @ chi0 @ u.conj().T, atol=1e-10)

    def test_traceless_along_evolution(self):
        spec = catalog_case("4*")
        trajs = branch_trajectories(spec, times=time_grid(samples=65))
        chi = chi_series(trajs["u"], trajs["d"], trajs["c"], spec.p_b)
        assert np.max(np.abs(np.trace(chi, axis1=-2, axis2=-1))) <= 1e-10


class TestDelta:
    def test_zero_matrix(self):
        assert stp_delta(np.zeros((4, 4), dtype=complex)) == 0.0

    def test_case2_never_deviates(self):
        spec = catalog_case("2")
        trajs = branch_trajectories(spec)
        chi = chi_series(trajs["u"], trajs["d"], trajs["c"], spec.p_b)
        assert np.max(np.abs(stp_delta(chi))) < 1e-10

    def test_matches_probability_difference_oracle(self):
        # independent path: delta from the three choice probabilities
        spec = catalog_case("3*")
        times = np.array([0.0, 1.0])
        trajs = branch_trajectories(spec, times=times)
        chi1 = chi_at(trajs["u"], trajs["d"], trajs["c"], spec.p_b, 1)
        p_u = choice_probability(trajs["u"].states[1])
        p_d = choice_probability(trajs["d"].states[1])
        p_c = choice_probability(trajs["c"].states[1])
        want = p_u - (spec.p_b * p_d + (1 - spec.p_b) * p_c)
        assert stp_delta(chi1) == pytest.approx(want, abs=1e-12)
        assert abs(want) > 1e-3  # the case genuinely deviates at t = 1

    def test_decomposition_identity_every_sample(self):
        rng = np.random.default_rng(51)
        specs = [catalog_case(label) for label in CATALOG_LABELS]
        specs += [random_scenario(rng) for _ in range(5)]
        for spec in specs:
            trajs = branch_trajectories(spec, times=time_grid(samples=513))
            for record in stp_records(trajs["u"], trajs["d"], trajs["c"], spec.p_b):
                mixture = spec.p_b * record.p_d + (1 - spec.p_b) * record.p_c
                assert record.p_u == pytest.approx(mixture + record.delta, abs=1e-10)

    def test_bound_dominates_delta(self):
        spec = catalog_case("4*")
        trajs = branch_trajectories(spec)
        for record in stp_records(trajs["u"], trajs["d"], trajs["c"], spec.p_b):
            assert record.delta_bound >= abs(record.delta) - 1e-12

    def test_coherence_free_prediction_never_deviates(self):
        # necessity: without prediction coherence the deviation vanishes for
        # arbitrary subsystem parameters and Hamiltonians
        rng = np.random.default_rng(52)
        for _ in range(100):
            spec = random_scenario(rng, coherent_prediction=False)
            trajs = branch_trajectories(spec, params=random_hamiltonian_params(rng))
            chi = chi_series(trajs["u"], trajs["d"], trajs["c"], spec.p_b)
            assert np.max(np.abs(stp_delta(chi))) < 1e-10

    @pytest.mark.parametrize("label", VIOLATING)
    def test_catalog_violations_are_visible(self, label):
        spec = catalog_case(label)
        trajs = branch_trajectories(spec)
        chi = chi_series(trajs["u"], trajs["d"], trajs["c"], spec.p_b)
        assert np.max(np.abs(stp_delta(chi))) > 1e-3


class TestVerdict:
    @pytest.mark.parametrize("label", SATISFYING)
    def test_satisfying_cases(self, label):
        spec = catalog_case(label)
        trajs = branch_trajectories(spec)
        verdict = stp_verdict(stp_records(trajs["u"], trajs["d"], trajs["c"], spec.p_b))
        assert not verdict.violated
        assert verdict.onset_time is None

    @pytest.mark.parametrize("label", VIOLATING)
    def test_violating_cases(self, label):
        spec = catalog_case(label)
        trajs = branch_trajectories(spec)
        verdict = stp_verdict(stp_records(trajs["u"], trajs["d"], trajs["c"], spec.p_b))
        assert verdict.violated
        assert verdict.max_abs_delta > 1e-3
        assert verdict.onset_time is not None and verdict.onset_time > 0.0

    def test_all_zero_sequence(self):
        records = [StpRecord(t, 0.5, 0.5, 0.5, 0.0, 0.0) for t in (0.0, 1.0, 2.0)]
        verdict = stp_verdict(records)
        assert not verdict.violated
        assert verdict.max_abs_delta == 0.0
        assert verdict.onset_time is None

    def test_onset_is_first_crossing(self):
        records = [
            StpRecord(0.0, 0.5, 0.5, 0.5, 0.0, 0.0),
            StpRecord(1.0, 0.5, 0.5, 0.5, DELTA_EPS / 2, DELTA_EPS),
            StpRecord(2.0, 0.5, 0.5, 0.5, 5e-3, 6e-3),
            StpRecord(3.0, 0.5, 0.5, 0.5, 8e-3, 9e-3),
        ]
        verdict = stp_verdict(records)
        assert verdict.violated and verdict.onset_time == 2.0

    def test_empty_rejected(self):
        with pytest.raises(EmptyInputError):
            stp_verdict([])


def test_delta_bound_nonnegative_series():
    spec = catalog_case("3")
    trajs = branch_trajectories(spec, times=time_grid(samples=129))
    chi = chi_series(trajs["u"], trajs["d"], trajs["c"], spec.p_b)
    assert np.min(stp_delta_bound(chi)) >= 0.0
