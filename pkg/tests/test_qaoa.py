import numpy as np
import pytest

from daqc.core import QuantumState, fidelity
from daqc.errors import ParamError
from daqc.noise import NoiseModel, run_trajectories
from daqc.qaoa import (
    QAOAProblem,
    _AnsatzEngine,
    build_qaoa_schedule,
    cut_values,
    maxcut_value,
    qaoa_run,
)

EDGE = [(0, 1)]
TRIANGLE = [(0, 1), (1, 2), (0, 2)]
RING5 = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]


class TestCutValues:
    def test_single_edge(self):
        vals = cut_values(EDGE, 2)
        assert np.array_equal(vals, [0, 1, 1, 0])
        assert maxcut_value(EDGE, 2) == 1.0

    def test_triangle(self):
        assert maxcut_value(TRIANGLE, 3) == 2.0

    def test_ring5(self):
        assert maxcut_value(RING5, 5) == 4.0


class TestIdealAnsatz:
    def test_zero_angles_give_uniform_ratio(self):
        for edges, n in [(EDGE, 2), (TRIANGLE, 3), (RING5, 5)]:
            prob = QAOAProblem(edges, n, p=1)
            eng = _AnsatzEngine(prob)
            ratio = eng.ratio([0.0], [0.0])
            assert ratio == pytest.approx(len(edges) / 2 / maxcut_value(edges, n), abs=1e-12)

    def test_grid_search_oracle_single_edge(self):
        # the optimizer must reach the best grid value on (gamma, beta)
        prob = QAOAProblem(EDGE, 2, p=1)
        eng = _AnsatzEngine(prob)
        grid = max(
            eng.ratio([g], [b])
            for g in np.linspace(0, np.pi, 41)
            for b in np.linspace(0, 2 * np.pi, 81)
        )
        res = qaoa_run(prob, starts=8, maxfev=400, seed=1)
        assert grid == pytest.approx(1.0, abs=1e-3)
        assert res.best_ratio >= grid - 1e-3

    def test_monotone_in_p_with_warm_starts(self):
        prob1 = QAOAProblem(RING5, 5, p=1)
        r1 = qaoa_run(prob1, starts=10, maxfev=400, seed=3)
        prev = np.concatenate([r1.best_gammas, [0.0], r1.best_betas, [0.0]])
        ratios = [r1.best_ratio]
        for p in (2, 3):
            prob = QAOAProblem(RING5, 5, p=p)
            res = qaoa_run(prob, starts=10, maxfev=600, seed=3, warm_starts=[prev])
            ratios.append(res.best_ratio)
            prev = np.concatenate(
                [res.best_gammas, [0.0], res.best_betas, [0.0]]
            )
        assert ratios[0] <= ratios[1] + 1e-9
        assert ratios[1] <= ratios[2] + 1e-9

    def test_disconnected_graph_warns(self):
        with pytest.warns(UserWarning):
            QAOAProblem([(0, 1)], 4)

    def test_bda_needs_alpha(self):
        with pytest.raises(ParamError):
            QAOAProblem(EDGE, 2, mode="bda")


class TestBdaAnsatz:
    def test_high_alpha_matches_ideal_state(self):
        prob_b = QAOAProblem(TRIANGLE, 3, p=1, mode="bda", alpha=1e6)
        prob_i = QAOAProblem(TRIANGLE, 3, p=1)
        eb, ei = _AnsatzEngine(prob_b), _AnsatzEngine(prob_i)
        g, b = 0.7, 0.4
        assert abs(eb.ratio([g], [b]) - ei.ratio([g], [b])) < 1e-4

    def test_low_alpha_deviates(self):
        prob_b = QAOAProblem(TRIANGLE, 3, p=1, mode="bda", alpha=1.0)
        prob_i = QAOAProblem(TRIANGLE, 3, p=1)
        eb, ei = _AnsatzEngine(prob_b), _AnsatzEngine(prob_i)
        diffs = [
            abs(eb.ratio([g], [b]) - ei.ratio([g], [b]))
            for g, b in [(0.7, 0.4), (1.1, 0.9), (0.3, 1.7)]
        ]
        assert max(diffs) > 1e-2

    def test_engine_matches_schedule_simulation(self):
        # the fast statevector path and the generic schedule machinery agree
        prob = QAOAProblem(TRIANGLE, 3, p=1, mode="bda", alpha=25.0)
        eng = _AnsatzEngine(prob)
        g, b = 0.8, 0.5
        psi_fast = eng.state([g], [b])
        sched = build_qaoa_schedule(prob, [g], [b])
        from daqc.schedule import simulate_schedule

        plus = QuantumState.statevector(np.full(8, 2 ** (-1.5), dtype=complex))
        psi_generic = simulate_schedule(sched, plus).data
        f = abs(np.vdot(psi_fast, psi_generic)) ** 2
        assert f > 1 - 1e-9

    def test_sda_schedule_matches_ideal(self):
        prob = QAOAProblem(TRIANGLE, 3, p=1, mode="sda")
        sched = build_qaoa_schedule(prob, [0.8], [0.5], dt=1e-3)
        from daqc.schedule import simulate_schedule

        plus = QuantumState.statevector(np.full(8, 2 ** (-1.5), dtype=complex))
        psi = simulate_schedule(sched, plus).data
        ideal = _AnsatzEngine(QAOAProblem(TRIANGLE, 3, p=1)).state([0.8], [0.5])
        assert abs(np.vdot(psi, ideal)) ** 2 > 1 - 1e-9

    def test_noisy_objective_runs(self):
        prob = QAOAProblem(TRIANGLE, 3, p=1, mode="bda", alpha=50.0)
        noise = NoiseModel(p_bitflip=0.001, g0=1.0, dt_sqg=1e-3)
        res = qaoa_run(prob, noise=noise, starts=1, maxfev=30, seed=2, shots=5)
        assert 0 < res.best_ratio <= 1.0


class TestResilience:
    def test_reoptimization_never_hurts(self):
        prob_i = QAOAProblem(RING5, 5, p=1)
        ideal = qaoa_run(prob_i, starts=8, maxfev=400, seed=5)
        ideal_params = np.concatenate([ideal.best_gammas, ideal.best_betas])
        prob_b = QAOAProblem(RING5, 5, p=1, mode="bda", alpha=3.0)
        eng = _AnsatzEngine(prob_b)
        at_ideal = eng.ratio(ideal.best_gammas, ideal.best_betas)
        res = qaoa_run(prob_b, starts=6, maxfev=400, seed=5, warm_starts=[ideal_params])
        assert res.best_ratio >= at_ideal - 1e-9
