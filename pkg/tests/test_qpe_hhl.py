import numpy as np
import pytest

from daqc.circuits import GateCircuit
from daqc.core import QuantumState, fidelity, propagator, unitary_distance
from daqc.errors import InvalidProblem, ParamError, SpectrumError
from daqc.hhl import (
    HHLProblem,
    V_GATE,
    aqe_angles,
    aqe_ladder,
    aqe_phases,
    aqe_sign_matrix,
    compile_cz_daqc,
    gray_code,
    run_hhl,
    suggest_register_size,
)
from daqc.noise import NoiseModel, run_trajectories
from daqc.qpe import build_qpe_circuit, run_qpe
from daqc.schedule import schedule_unitary


class TestQPE:
    def test_phi_zero_deterministic(self):
        res = run_qpe(0.0, 3)
        assert res.probabilities[0] == pytest.approx(1.0, abs=1e-9)
        assert res.majority_vote == 0.0

    def test_exact_quarter(self):
        res = run_qpe(0.25, 4)
        assert res.top_outcomes(1)[0][0] == "0100"
        assert res.probabilities[4] == pytest.approx(1.0, abs=1e-9)
        assert res.majority_vote == pytest.approx(0.25)

    def test_one_third_peaks(self):
        res = run_qpe(1.0 / 3.0, 4)
        (s1, p1), (s2, p2) = res.top_outcomes(2)
        assert s1 == "0101" and s2 == "0110"
        # the two candidate estimates and their stated relative errors
        assert int(s1, 2) / 16 == pytest.approx(0.3125)
        assert int(s2, 2) / 16 == pytest.approx(0.3750)
        rel1 = abs(0.3125 - 1 / 3) / (1 / 3)
        rel2 = abs(0.3750 - 1 / 3) / (1 / 3)
        assert rel1 == pytest.approx(0.0625, abs=1e-12)
        assert rel2 == pytest.approx(0.1250, abs=1e-12)

    def test_native_circuit_matches_plain(self):
        phi = 0.3
        u_plain = build_qpe_circuit(phi, 3, native=False).unitary()
        u_native = build_qpe_circuit(phi, 3, native=True).unitary()
        assert unitary_distance(u_plain, u_native, up_to_phase=True) < 1e-8

    @pytest.mark.parametrize("mode", ["sdaqc", "bdaqc"])
    def test_daqc_modes_noiseless(self, mode):
        res = run_qpe(0.25, 3, mode=mode, dt=1e-10)
        assert res.majority_vote == pytest.approx(0.25)
        assert res.probabilities[2] > 0.98  # 010 = 2 over 3 bits

    def test_noisy_run_keeps_peaks(self):
        res = run_qpe(1.0 / 3.0, 4, mode="digital",
                      noise=NoiseModel.preset("qpe-ibm"), shots=60, seed=3)
        tops = {s for s, _ in res.top_outcomes(2)}
        assert tops == {"0101", "0110"}

    def test_invalid_phi(self):
        with pytest.raises(ParamError):
            run_qpe(1.5, 3)


class TestGrayCode:
    def test_one_bit(self):
        assert gray_code(1) == ["0", "1"]

    def test_two_bits(self):
        assert gray_code(2) == ["00", "01", "11", "10"]

    def test_four_bits_adjacency(self):
        codes = gray_code(4)
        assert len(codes) == 16
        assert len(set(codes)) == 16
        for a, b in zip(codes, codes[1:] + codes[:1]):
            assert sum(x != y for x, y in zip(a, b)) == 1


class TestAQE:
    @pytest.mark.parametrize("n_r", range(1, 6))
    def test_sign_matrix_orthogonality(self, n_r):
        m = aqe_sign_matrix(n_r)
        assert np.array_equal(m @ m.T, 2**n_r * np.eye(2**n_r))

    @pytest.mark.parametrize("n_r", range(1, 7))
    def test_angle_residual(self, n_r):
        m = aqe_sign_matrix(n_r)
        theta = aqe_angles(n_r)
        phi = aqe_phases(n_r)
        assert np.max(np.abs(m @ theta - phi)) < 1e-10

    def test_reconstructed_phi_two(self):
        # forward substitution oracle at n_r = 2
        m = aqe_sign_matrix(2)
        theta = aqe_angles(2)
        phi = m @ theta
        assert phi[2] == pytest.approx(2 * np.arcsin(0.5), abs=1e-12)
        assert phi[2] == pytest.approx(np.pi / 3, abs=1e-12)

    def test_v_gate_unitary(self):
        assert np.allclose(V_GATE @ V_GATE.conj().T, np.eye(2))

    @pytest.mark.parametrize("n_r", [1, 2, 3])
    def test_ladder_amplitudes(self, n_r):
        # the encoding stage must put amplitude sin(phi(p)/2) = 1/p on |1>_A
        n = 1 + n_r
        c = GateCircuit(n)
        aqe_ladder(c, 0, list(range(1, n)))
        u = c.unitary()
        dim = 2**n_r
        for p in range(1, dim):
            col = np.zeros(2**n, dtype=complex)
            col[p] = 1.0  # ancilla |0>, register |p>
            out = u @ col
            amp1 = out.reshape(2, dim)[1, p]
            assert abs(amp1) == pytest.approx(1.0 / p, abs=1e-10)

    def test_custom_profile_hook(self):
        f = lambda lam: min(1.0, 0.5 / lam / 4)
        phis = aqe_phases(2, f=f)
        assert phis[0] == 0.0
        assert phis[1] == pytest.approx(2 * np.arcsin(min(1.0, 0.5 / (1 / 4) / 4)))


class TestSuggestRegisterSize:
    def test_clamped_minimum(self):
        assert suggest_register_size(1, 1) == 1

    def test_formula_cases(self):
        assert suggest_register_size(4, 256) == 6
        assert suggest_register_size(10, 100) == 7


class TestHHL:
    def test_problem_validation(self):
        with pytest.raises(InvalidProblem):
            HHLProblem(np.array([[0, 1], [0, 0]]), [1, 0], 2)
        with pytest.raises(SpectrumError):
            HHLProblem(np.diag([0.5, 1.5]), [1, 0], 2)

    def test_eigenvector_input_passthrough(self):
        # b an eigenvector with exactly representable eigenvalue: output = b
        prob = HHLProblem(np.diag([0.25, 0.5]), [1.0, 0.0], 2)
        res = run_hhl(prob)
        assert res.fidelity_to_classical >= 1 - 1e-6
        b_state = QuantumState.statevector([1.0, 0.0])
        assert fidelity(res.memory_state, b_state) >= 1 - 1e-6

    def test_diagonal_quarter_half(self):
        prob = HHLProblem(np.diag([0.25, 0.5]), np.array([1.0, 1.0]) / np.sqrt(2), 2)
        res = run_hhl(prob)
        assert res.fidelity_to_classical >= 1 - 1e-6
        assert 0 < res.success_probability <= 1

    def test_success_probability_value(self):
        # exact-representable case: success = C^2 sum |beta_j / lam_j|^2
        prob = HHLProblem(np.diag([0.25, 0.5]), np.array([1.0, 1.0]) / np.sqrt(2), 2)
        res = run_hhl(prob)
        c = 2.0**-2
        expected = 0.5 * (c / 0.25) ** 2 + 0.5 * (c / 0.5) ** 2
        assert res.success_probability == pytest.approx(expected, abs=1e-9)

    def test_error_decreases_with_register_size(self):
        # eigenvalues 1/3, 2/3 sit off the register grid at every size, with
        # the truncation distance halving per added bit
        theta = 0.4
        v = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        a = v @ np.diag([1 / 3, 2 / 3]) @ v.T
        b = np.array([0.8, 0.6 * 1j])
        errs = []
        for n_r in (3, 4, 5):
            prob = HHLProblem(a, b, n_r)
            # inversion restricted to the well-conditioned band, the regime
            # of the O(kappa / 2^n_r) accuracy claim
            res = run_hhl(prob, lambda_floor=0.25)
            errs.append(1 - res.fidelity_to_classical)
        assert errs[0] > errs[1] > errs[2]

    def test_plain_profile_has_small_p_floor(self):
        # without the band restriction the stray tails at small p do not
        # shrink with the register, so convergence stalls
        theta = 0.4
        v = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        a = v @ np.diag([1 / 3, 2 / 3]) @ v.T
        b = np.array([0.8, 0.6 * 1j])
        errs = [1 - run_hhl(HHLProblem(a, b, n_r)).fidelity_to_classical
                for n_r in (4, 6)]
        assert all(e > 0.01 for e in errs)

    @pytest.mark.parametrize("mode", ["sdaqc", "bdaqc"])
    def test_daqc_modes_noiseless(self, mode):
        # total of 4 qubits exercises the echo-based pair synthesis
        prob = HHLProblem(np.diag([0.25, 0.5]), np.array([1.0, 1.0]) / np.sqrt(2), 2)
        noise = NoiseModel(g0=1e6, dt_sqg=1e-11)
        res = run_hhl(prob, mode=mode, noise=noise)
        assert res.fidelity_to_classical >= 1 - 1e-4


def fit_diag_local_z(u_actual: np.ndarray, u_target: np.ndarray, n: int) -> float:
    """Residual of modelling u_actual = e^{i gamma} (prod_q e^{i a_q Z_q}) u_target.

    The ratio of two diagonals has that form iff, along every qubit axis, the
    elementwise quotient between the bit-0 and bit-1 slices is constant.
    """
    da = np.diag(u_actual)
    dt = np.diag(u_target)
    assert np.allclose(u_actual, np.diag(da), atol=1e-9)
    r = (da / dt).reshape([2] * n)
    worst = 0.0
    for q in range(n):
        s = np.moveaxis(r, q, 0)
        quot = (s[0] / s[1]).ravel()
        worst = max(worst, float(np.max(np.abs(quot - quot[0]))))
    return worst


class TestCompiledCZ:
    def test_two_qubits(self):
        sched = compile_cz_daqc(2, 0, 1)
        u = schedule_unitary(sched)
        cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
        assert fit_diag_local_z(u, cz, 2) < 1e-8

    def test_three_qubits_spectator_pulses(self):
        sched = compile_cz_daqc(3, 0, 1)
        kinds = [type(it).__name__ for it in sched.items]
        assert kinds == ["DigitalLayer", "AnalogBlock", "DigitalLayer", "AnalogBlock"]
        assert sched.items[0].qubits() == [2]
        u = schedule_unitary(sched)
        cz = np.diag([1, 1, 1, -1]).astype(complex)
        czi = np.kron(cz, np.eye(2))
        assert fit_diag_local_z(u, czi, 3) < 1e-8

    def test_double_cz_is_identity_up_to_z(self):
        sched = compile_cz_daqc(2, 0, 1)
        u = schedule_unitary(sched)
        assert fit_diag_local_z(u @ u, np.eye(4, dtype=complex), 2) < 1e-8
