import numpy as np
import pytest

from daqc.circuits import GateCircuit
from daqc.core import PauliHamiltonian, QuantumState, fidelity
from daqc.errors import ParamError, RequiresDensityMatrix, ConfigError
from daqc.noise import (
    NoiseModel,
    amplitude_damping_channel,
    apply_channel,
    bit_flip_channel,
    perturb_gate,
    run_trajectories,
)
from daqc.schedule import AnalogBlock, Schedule, x_layer

ZZ = PauliHamiltonian(2, [(1.0, "ZZ")])


class TestChannels:
    def test_bitflip_zero_is_identity(self):
        ch = bit_flip_channel(0.0)
        rho = QuantumState.zero(1).to_density()
        out = apply_channel(ch, rho, 0)
        assert np.allclose(out.data, rho.data)

    def test_bitflip_one_flips(self):
        ch = bit_flip_channel(1.0)
        out = apply_channel(ch, QuantumState.zero(1).to_density(), 0)
        assert np.allclose(out.data, np.diag([0.0, 1.0]))

    def test_bitflip_half_mixes(self):
        # hand oracle: sum E_k rho E_k^dag = (|0><0| + |1><1|)/2
        ch = bit_flip_channel(0.5)
        out = apply_channel(ch, QuantumState.zero(1).to_density(), 0)
        assert np.allclose(out.data, np.eye(2) / 2)

    def test_bitflip_param_range(self):
        with pytest.raises(ParamError):
            bit_flip_channel(1.2)

    def test_damping_zero_time_identity(self):
        ch = amplitude_damping_channel(0.0, 50e-6, 0.35)
        assert ch.completeness_defect() < 1e-12
        rho = QuantumState.statevector([0, 1]).to_density()
        assert np.allclose(apply_channel(ch, rho, 0).data, rho.data)

    def test_damping_gamma_at_t1(self):
        ch = amplitude_damping_channel(50e-6, 50e-6, 1.0)
        # gamma = 1 - 1/e shows up as the |1> population decay
        rho = QuantumState.statevector([0, 1]).to_density()
        out = apply_channel(ch, rho, 0)
        assert out.data[1, 1].real == pytest.approx(np.exp(-1.0), abs=1e-12)

    def test_damping_fixed_point(self):
        p = 0.35
        ch = amplitude_damping_channel(100 * 50e-6, 50e-6, p)
        rho = QuantumState.statevector([0, 1]).to_density()
        out = apply_channel(ch, rho, 0)
        assert np.allclose(out.data, np.diag([p, 1 - p]), atol=1e-6)

    def test_apply_channel_on_second_qubit(self):
        p = 0.3
        ch = bit_flip_channel(p)
        rho = QuantumState.zero(2).to_density()
        out = apply_channel(ch, rho, 1)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = 1 - p  # |00>
        expected[1, 1] = p      # |01>
        assert np.allclose(out.data, expected)

    def test_statevector_rejected(self):
        with pytest.raises(RequiresDensityMatrix):
            apply_channel(bit_flip_channel(0.1), QuantumState.zero(1), 0)

    @pytest.mark.parametrize("seed", range(20))
    def test_cptp_random_params(self, seed):
        rng = np.random.default_rng(seed)
        channels = [
            bit_flip_channel(rng.uniform(0, 1)),
            amplitude_damping_channel(rng.uniform(0, 1e-4), rng.uniform(1e-6, 1e-3),
                                      rng.uniform(0, 1)),
        ]
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        state = QuantumState.density(rho)
        for ch in channels:
            assert ch.completeness_defect() < 1e-10
            out = apply_channel(ch, state, rng.integers(0, 2))
            assert np.trace(out.data).real == pytest.approx(1.0, abs=1e-10)
            assert np.min(np.linalg.eigvalsh(out.data)) > -1e-9


class TestNoiseModel:
    def test_qft_preset_values(self):
        m = NoiseModel.preset("qft-2020")
        assert m.sqgn == 0.0005
        assert m.tqgn == 0.2
        assert m.abn_s == 0.02 and m.abn_b == 0.01
        assert m.p_bitflip == 0.005 and m.p_meas == 0.01
        assert m.t1 == 50e-6 and m.p_thermal == 0.35
        assert m.dt_sqg == pytest.approx(1 / (100 * m.g0))

    def test_qpe_preset_values(self):
        m = NoiseModel.preset("qpe-ibm")
        assert m.tqgn == 0.08
        assert m.p_bitflip == 1e-4
        assert m.gate_times["rx"] == 10e-9
        assert m.gate_times["rz"] == 1e-9
        assert m.gate_times["cnot"] == 300e-9
        assert m.abn_s == 0.002 and m.abn_b == 0.001

    def test_none_preset_trivial(self):
        assert NoiseModel.preset("none").is_trivial()

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            NoiseModel.preset("bogus")

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ConfigError):
            NoiseModel.from_dict({"sqgnn": 0.1})

    def test_sdaqc_jitter_doubles_bdaqc(self):
        m = NoiseModel.preset("qft-2020")
        assert m.analog_jitter("sdaqc") == pytest.approx(2 * m.analog_jitter("bdaqc"))


class TestPerturbGate:
    def test_zero_widths_exact(self):
        m = NoiseModel()
        rng = np.random.default_rng(0)
        assert perturb_gate("SQG", 0.7, m, rng) == 0.7
        assert perturb_gate("TQG", np.pi / 4, m, rng) == np.pi / 4
        assert perturb_gate("analog", 0.3, m, rng) == 0.3

    def test_reproducible_with_same_stream(self):
        m = NoiseModel(tqgn=0.2)
        a = perturb_gate("TQG", np.pi / 4, m, np.random.default_rng(42))
        b = perturb_gate("TQG", np.pi / 4, m, np.random.default_rng(42))
        assert a == b and a != np.pi / 4

    def test_analog_widths_by_mode(self):
        m = NoiseModel(abn_s=0.02, abn_b=0.01, g0=1.0)
        draws_s = [perturb_gate("analog", 0.0, m, np.random.default_rng(i), mode="sdaqc")
                   for i in range(400)]
        draws_b = [perturb_gate("analog", 0.0, m, np.random.default_rng(i), mode="bdaqc")
                   for i in range(400)]
        assert np.std(draws_s) == pytest.approx(2 * np.std(draws_b), rel=0.05)


G0 = 1e6  # rad/s resource coupling; durations below are in seconds


def small_schedule(mode="sdaqc"):
    res = PauliHamiltonian(2, [(G0, "ZZ")])
    return Schedule(
        res, [AnalogBlock(0.2 / G0), x_layer([0]), AnalogBlock(0.1 / G0)], mode=mode, dt=1e-8
    )


class TestTrajectories:
    def test_noiseless_matches_exact(self):
        from daqc.schedule import simulate_schedule

        s = small_schedule()
        run = run_trajectories(s, NoiseModel.preset("none"), shots=3, seed=1)
        exact = simulate_schedule(s, QuantumState.zero(2)).to_density()
        assert np.allclose(run.result.data, exact.data, atol=1e-12)

    def test_seed_determinism(self):
        s = small_schedule()
        m = NoiseModel.preset("qft-2020")
        r1 = run_trajectories(s, m, shots=4, seed=99)
        r2 = run_trajectories(s, m, shots=4, seed=99)
        assert np.array_equal(r1.result.data, r2.result.data)

    def test_different_seeds_differ(self):
        s = small_schedule()
        m = NoiseModel.preset("qft-2020")
        r1 = run_trajectories(s, m, shots=4, seed=1)
        r2 = run_trajectories(s, m, shots=4, seed=2)
        assert not np.allclose(r1.result.data, r2.result.data)

    def test_circuit_program(self):
        c = GateCircuit(2)
        c.h(0).cnot(0, 1)
        run = run_trajectories(c, NoiseModel.preset("none"), shots=1, seed=0)
        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1 / np.sqrt(2)
        assert fidelity(run.result, QuantumState.statevector(bell)) == pytest.approx(1.0, abs=1e-9)

    def test_trace_preserved_under_noise(self):
        m = NoiseModel.preset("qft-2020")
        run = run_trajectories(small_schedule(), m, shots=10, seed=5)
        assert np.trace(run.result.data).real == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize(
        "param,levels",
        [
            ("p_bitflip", [0.0, 0.02, 0.1]),
            ("p_meas", [0.0, 0.05, 0.2]),
            ("sqgn", [0.0, 0.05, 0.2]),
            ("abn_b", [0.0, 0.05, 0.2]),
        ],
    )
    def test_monotone_fidelity_decay(self, param, levels):
        from daqc.schedule import simulate_schedule

        s = small_schedule("bdaqc")
        plus = QuantumState.statevector(np.full(4, 0.5))
        ideal = simulate_schedule(s, plus)
        fids = []
        for level in levels:
            m = NoiseModel(**{param: level}, g0=G0)
            run = run_trajectories(s, m, shots=500, seed=7, initial=plus)
            fids.append(fidelity(ideal, run.result))
        assert fids[0] >= fids[1] >= fids[2]

    def test_tqgn_monotone_on_circuit(self):
        c = GateCircuit(2)
        c.h(0).czz(0, 1, np.pi / 4).h(1)
        ideal = QuantumState.statevector(c.unitary()[:, 0])
        fids = []
        for level in (0.0, 0.1, 0.3):
            run = run_trajectories(c, NoiseModel(tqgn=level), shots=500, seed=3)
            fids.append(fidelity(ideal, run.result))
        assert fids[0] >= fids[1] >= fids[2]
