"""Kraus channels, coherent trajectory noise, and seeded Monte-Carlo runs.

Incoherent noise (bit flips, generalized amplitude damping, measurement
error) is applied through operator-sum channels; control noise (single-qubit
phase scaling, two-qubit phase jitter, analog-duration jitter) is baked into
each trajectory's unitaries.  Channel insertion: after every digital layer a
bit-flip on all qubits plus amplitude damping over the layer's wall time;
after every analog block amplitude damping over the block duration;
measurement error as a bit flip on every qubit just before readout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .circuits import GateCircuit, SQG_KINDS, embed_gate, embed_1q_op, embed_2q_op, noisy_gate_matrix
from .core import QuantumState
from .errors import ConfigError, ParamError, RequiresDensityMatrix
from .schedule import AnalogBlock, Schedule, effective_analog_durations

_ID2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass
class KrausChannel:
    """Operation elements of a CPTP map: ``rho -> sum_k E_k rho E_k^dag``."""

    operators: list
    label: str = ""

    def completeness_defect(self) -> float:
        dim = self.operators[0].shape[0]
        acc = np.zeros((dim, dim), dtype=complex)
        for e in self.operators:
            acc += e.conj().T @ e
        return float(np.max(np.abs(acc - np.eye(dim))))

    def is_complete(self, atol: float = 1e-10) -> bool:
        return self.completeness_defect() <= atol


def bit_flip_channel(p: float) -> KrausChannel:
    """E0 = sqrt(1-p) I, E1 = sqrt(p) X."""
    if not 0.0 <= p <= 1.0:
        raise ParamError(f"bit-flip probability {p} outside [0, 1]")
    return KrausChannel([np.sqrt(1 - p) * _ID2, np.sqrt(p) * _X2], "bit_flip")


def amplitude_damping_channel(t: float, t1: float, p: float) -> KrausChannel:
    """Generalized amplitude damping over time ``t``.

    ``gamma = 1 - exp(-t/T1)``; ``p`` is the thermal ground-state population,
    and ``diag(p, 1-p)`` is the channel's fixed point as ``t -> inf``.
    """
    if t < 0:
        raise ParamError("time must be nonnegative")
    if t1 <= 0:
        raise ParamError("T1 must be positive")
    if not 0.0 <= p <= 1.0:
        raise ParamError(f"thermal population {p} outside [0, 1]")
    gamma = 1.0 - math.exp(-t / t1)
    sg, s1g = np.sqrt(gamma), np.sqrt(1.0 - gamma)
    e0 = np.sqrt(p) * np.array([[1, 0], [0, s1g]], dtype=complex)
    e1 = np.sqrt(p) * np.array([[0, sg], [0, 0]], dtype=complex)
    e2 = np.sqrt(1 - p) * np.array([[s1g, 0], [0, 1]], dtype=complex)
    e3 = np.sqrt(1 - p) * np.array([[0, 0], [sg, 0]], dtype=complex)
    return KrausChannel([e0, e1, e2, e3], "amplitude_damping")


def measurement_channel(p: float) -> KrausChannel:
    ch = bit_flip_channel(p)
    ch.label = "measurement"
    return ch


def _apply_kraus_1q(ops, rho: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """rho -> sum E rho E^dag with 2x2 Kraus operators on one qubit."""
    r = rho.reshape([2] * (2 * n))
    out = np.zeros_like(r)
    for e in ops:
        t = np.tensordot(e, r, axes=([1], [qubit]))
        t = np.moveaxis(t, 0, qubit)
        t = np.tensordot(t, e.conj(), axes=([n + qubit], [1]))
        t = np.moveaxis(t, -1, n + qubit)
        out += t
    return out.reshape(rho.shape)


def apply_channel(channel: KrausChannel, state: QuantumState, qubit) -> QuantumState:
    """Apply a channel to one qubit (or a qubit pair for 4x4 operators).

    Requires a density-matrix state; trace and positivity are preserved by
    construction.
    """
    rho = state.require_density()
    n = state.qubit_count
    dim_op = channel.operators[0].shape[0]
    if dim_op == 2:
        q = int(qubit)
        if not 0 <= q < n:
            raise ParamError(f"qubit {qubit} out of range")
        out = _apply_kraus_1q(channel.operators, rho, q, n)
    elif dim_op == 4:
        q1, q2 = qubit
        out = np.zeros_like(rho)
        for e in channel.operators:
            m = embed_2q_op(e, q1, q2, n)
            out += m @ rho @ m.conj().T
    else:
        raise ParamError("channel operators must be 2x2 or 4x4")
    return QuantumState("density_matrix", out, check=False)


# ---------------------------------------------------------------------------
# noise model


_PRESETS = {
    # superconducting-style parameters used for the QFT paradigm comparison
    "qft-2020": dict(
        sqgn=0.0005,
        tqgn=0.2,
        abn_s=0.02,
        abn_b=0.01,
        p_bitflip=0.005,
        p_meas=0.01,
        t1=50e-6,
        p_thermal=0.35,
        g0=1e6,
        dt_sqg=1e-8,  # 1 / (100 g0)
        gate_times={"sqg": 1e-8, "tqg": 100 * 1e-8 * np.pi / 4},
    ),
    # IBM-like basis-gate timings used for the QPE comparison
    "qpe-ibm": dict(
        sqgn=0.0005,
        tqgn=0.08,
        abn_s=0.002,
        abn_b=0.001,
        p_bitflip=0.0001,
        p_meas=0.01,
        t1=50e-6,
        p_thermal=0.35,
        g0=1e6,
        dt_sqg=1e-8,
        gate_times={"rx": 10e-9, "ry": 10e-9, "h": 10e-9, "x": 10e-9, "rz": 1e-9,
                    "phase": 1e-9, "cnot": 300e-9, "cp": 300e-9, "czz": 300e-9,
                    "swap": 300e-9},
    ),
    "none": dict(),
}


@dataclass
class NoiseModel:
    """Channel probabilities, coherent-error widths, and timing constants.

    ``abn_s`` and ``abn_b`` are analog-duration jitters in units of ``1/g0``;
    ``sqgn`` is the half-width of the uniform phase-scaling draw; ``tqgn``
    acts relatively on fixed two-qubit phases and absolutely on the CNOT
    generator angle.
    """

    sqgn: float = 0.0
    tqgn: float = 0.0
    abn_s: float = 0.0
    abn_b: float = 0.0
    p_bitflip: float = 0.0
    p_meas: float = 0.0
    t1: float = math.inf
    p_thermal: float = 1.0
    dt_sqg: float = 1e-8
    g0: float = 1e6
    gate_times: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("p_bitflip", "p_meas", "p_thermal"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParamError(f"{name}={v} outside [0, 1]")
        if self.t1 <= 0:
            raise ParamError("T1 must be positive")

    @classmethod
    def preset(cls, name: str) -> "NoiseModel":
        try:
            return cls(**_PRESETS[name])
        except KeyError:
            raise ConfigError(f"unknown noise preset {name!r}") from None

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        base = dict(_PRESETS.get(data.get("preset", ""), {}))
        base.update({k: v for k, v in data.items() if k != "preset"})
        known = set(cls.__dataclass_fields__)
        unknown = set(base) - known
        if unknown:
            raise ConfigError(f"unknown noise keys: {sorted(unknown)}")
        return cls(**base)

    @classmethod
    def from_json(cls, path) -> "NoiseModel":
        with open(path) as f:
            return cls.from_dict(json.load(f))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["t1"] = None if math.isinf(self.t1) else self.t1
        return d

    def analog_jitter(self, mode: str) -> float:
        """Std of the analog-duration jitter, in seconds, for the given mode."""
        abn = self.abn_s if mode == "sdaqc" else self.abn_b
        return abn / self.g0

    def gate_time(self, kind: str) -> float:
        if kind in self.gate_times:
            return self.gate_times[kind]
        if kind in SQG_KINDS:
            return self.gate_times.get("sqg", self.dt_sqg)
        return self.gate_times.get("tqg", 0.0)

    def is_trivial(self) -> bool:
        return (
            self.sqgn == 0 and self.tqgn == 0 and self.abn_s == 0 and self.abn_b == 0
            and self.p_bitflip == 0 and self.p_meas == 0 and math.isinf(self.t1)
        )


def perturb_gate(kind: str, nominal: float, model: NoiseModel, rng,
                 mode: str = "bdaqc") -> float:
    """One fresh coherent draw for a gate parameter.

    ``SQG``: multiply by a uniform draw in ``[1 - sqgn, 1 + sqgn]``;
    ``TQG``: multiply by ``1 + eps`` with Gaussian ``eps``;
    ``analog``: add a Gaussian duration jitter whose width depends on the
    schedule mode (the stepwise width is the doubled one).
    """
    k = kind.lower()
    if k == "sqg":
        return nominal * (rng.uniform(1 - model.sqgn, 1 + model.sqgn) if model.sqgn else 1.0)
    if k == "tqg":
        return nominal * (1 + rng.normal(0.0, model.tqgn)) if model.tqgn else nominal
    if k == "analog":
        jitter = model.analog_jitter(mode)
        return nominal + (rng.normal(0.0, jitter) if jitter else 0.0)
    raise ParamError(f"unknown gate kind {kind!r}")


# ---------------------------------------------------------------------------
# trajectory runs


@dataclass
class TrajectoryRun:
    seed: int
    shots: int
    result: QuantumState


# fast in-place single-qubit maps on a 2^n x 2^n density matrix, via the
# (A, 2, B) block factorisation of the qubit's row and column indices


def _bitflip_qubit(rho: np.ndarray, n: int, q: int, p: float) -> np.ndarray:
    a, b = 2**q, 2 ** (n - q - 1)
    rv = rho.reshape(a, 2, b, a, 2, b)
    return ((1 - p) * rv + p * rv[:, ::-1, :, :, ::-1, :]).reshape(rho.shape)


def _bitflip_all(rho: np.ndarray, n: int, p: float) -> np.ndarray:
    if p <= 0:
        return rho
    for q in range(n):
        rho = _bitflip_qubit(rho, n, q, p)
    return rho


def _gad_coeffs(t: float, t1: float, p: float):
    gamma = 1.0 - math.exp(-t / t1)
    return (
        math.sqrt(1.0 - gamma),      # coherence scaling
        1.0 - gamma * (1.0 - p),     # |0> population keep
        p * gamma,                   # |1> -> |0> feed
        1.0 - gamma * p,             # |1> population keep
        (1.0 - p) * gamma,           # |0> -> |1> feed
    )


def _gad_qubit(rho: np.ndarray, n: int, q: int, coeffs) -> np.ndarray:
    s, a00, b00, a11, b11 = coeffs
    a, b = 2**q, 2 ** (n - q - 1)
    rv = rho.reshape(a, 2, b, a, 2, b)
    r00 = rv[:, 0, :, :, 0, :].copy()
    r11 = rv[:, 1, :, :, 1, :].copy()
    rv[:, 0, :, :, 0, :] = a00 * r00 + b00 * r11
    rv[:, 1, :, :, 1, :] = a11 * r11 + b11 * r00
    rv[:, 0, :, :, 1, :] *= s
    rv[:, 1, :, :, 0, :] *= s
    return rho


def _damp_all(rho: np.ndarray, n: int, model: NoiseModel, t: float) -> np.ndarray:
    if t <= 0 or math.isinf(model.t1):
        return rho
    coeffs = _gad_coeffs(t, model.t1, model.p_thermal)
    for q in range(n):
        rho = _gad_qubit(np.ascontiguousarray(rho), n, q, coeffs)
    return rho


def _apply_1q_unitary(rho: np.ndarray, n: int, q: int, u: np.ndarray) -> np.ndarray:
    a, b = 2**q, 2 ** (n - q - 1)
    dim = rho.shape[0]
    rv = rho.reshape(a, 2, b * dim)
    r0, r1 = rv[:, 0, :], rv[:, 1, :]
    rows = np.empty_like(rv)
    rows[:, 0, :] = u[0, 0] * r0 + u[0, 1] * r1
    rows[:, 1, :] = u[1, 0] * r0 + u[1, 1] * r1
    rv = rows.reshape(dim, a, 2, b)
    c0, c1 = rv[:, :, 0, :], rv[:, :, 1, :]
    uc = u.conj()
    out = np.empty_like(rv)
    out[:, :, 0, :] = uc[0, 0] * c0 + uc[0, 1] * c1
    out[:, :, 1, :] = uc[1, 0] * c0 + uc[1, 1] * c1
    return out.reshape(dim, dim)


def _apply_diag_unitary(rho: np.ndarray, phases: np.ndarray) -> np.ndarray:
    e = np.exp(1j * phases)
    return (e[:, None] * rho) * e.conj()[None, :]


def _unitary_2x2_from_gen(h: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w)) @ v.conj().T


class _PreparedSchedule:
    def __init__(self, s: Schedule, model: NoiseModel):
        self.n = s.qubit_count
        self.mode = s.mode
        self.dt = s.dt
        self.switched_analog = s.mode == "sdaqc"
        self.jitter = model.analog_jitter(s.mode)
        res = s.resource
        if res.is_diagonal():
            self.res_diag = res.diagonal()
            self.res_dense = np.diag(self.res_diag)
            self.res_eig = None
        else:
            self.res_diag = None
            self.res_dense = res.matrix()
            self.res_eig = np.linalg.eigh(self.res_dense)
        durations = effective_analog_durations(s)
        self.items = []
        k = 0
        for it in s.items:
            if isinstance(it, AnalogBlock):
                self.items.append(("analog", durations[k]))
                k += 1
                continue
            gens = sorted(it.generators.items())
            dt_layer = s.layer_duration(it)
            if s.mode == "bdaqc":
                embs = [(q, embed_1q_op(h, q, self.n)) for q, h in gens]
                base = (dt_layer * self.res_dense - it.phase * np.eye(2**self.n)).astype(complex)
                self.items.append(("banged_layer", embs, base, dt_layer))
            else:
                self.items.append(("layer", gens, it.phase, dt_layer))

    def run_shot(self, rho: np.ndarray, model: NoiseModel, rng) -> np.ndarray:
        n = self.n
        for item in self.items:
            kind = item[0]
            if kind == "analog":
                t = item[1]
                if self.jitter > 0:
                    t = t + rng.normal(0.0, self.jitter)
                if self.res_diag is not None:
                    rho = _apply_diag_unitary(rho, -t * self.res_diag)
                else:
                    w, v = self.res_eig
                    u = (v * np.exp(-1j * w * t)) @ v.conj().T
                    rho = u @ rho @ u.conj().T
                if self.switched_analog:
                    rho = _bitflip_all(rho, n, model.p_bitflip)
                rho = _damp_all(rho, n, model, item[1])
            elif kind == "layer":
                _, gens, phase, dt_layer = item
                for q, h in gens:
                    scale = rng.uniform(1 - model.sqgn, 1 + model.sqgn) if model.sqgn else 1.0
                    rho = _apply_1q_unitary(rho, n, q, _unitary_2x2_from_gen(scale * h))
                rho = _bitflip_all(rho, n, model.p_bitflip)
                rho = _damp_all(rho, n, model, dt_layer)
            else:  # banged layer
                _, embs, base, dt_layer = item
                h = base.copy()
                for q, emb in embs:
                    scale = rng.uniform(1 - model.sqgn, 1 + model.sqgn) if model.sqgn else 1.0
                    h += scale * emb
                w, v = np.linalg.eigh(h)
                u = (v * np.exp(-1j * w)) @ v.conj().T
                rho = u @ rho @ u.conj().T
                rho = _bitflip_all(rho, n, model.p_bitflip)
                rho = _damp_all(rho, n, model, dt_layer)
        return rho


class _PreparedCircuit:
    def __init__(self, c: GateCircuit, model: NoiseModel):
        self.n = c.n
        n = c.n
        self.items = []
        for g in c.gates:
            wall = model.gate_time(g.kind)
            if g.kind in SQG_KINDS:
                from .circuits import sqg_generator

                self.items.append(("sqg", g.qubits[0], sqg_generator(g), wall))
            elif g.kind in ("czz", "cp"):
                par = _pair_phase_vector(g, n)
                self.items.append(("diag", par, g.param, wall))
            elif g.kind == "cnot":
                gen4 = np.kron(np.diag([0.0, 1.0]), np.eye(2) - np.array([[0, 1], [1, 0]]))
                self.items.append(("cnot", g.qubits, np.linalg.eigh(gen4), wall))
            else:
                self.items.append(("dense", embed_gate(g, n), wall))

    def run_shot(self, rho: np.ndarray, model: NoiseModel, rng) -> np.ndarray:
        n = self.n
        for item in self.items:
            kind = item[0]
            if kind == "sqg":
                _, q, h, wall = item
                scale = rng.uniform(1 - model.sqgn, 1 + model.sqgn) if model.sqgn else 1.0
                rho = _apply_1q_unitary(rho, n, q, _unitary_2x2_from_gen(scale * h))
            elif kind == "diag":
                _, par, phi, wall = item
                eps = rng.normal(0.0, model.tqgn) if model.tqgn else 0.0
                rho = _apply_diag_unitary(rho, phi * (1 + eps) * par)
            elif kind == "cnot":
                _, (qc, qt), (w, v), wall = item
                s = rng.normal(np.pi / 2, model.tqgn) if model.tqgn else np.pi / 2
                u4 = (v * np.exp(-1j * s * w)) @ v.conj().T
                rho = _apply_2q_unitary(rho, n, qc, qt, u4)
            else:
                _, u, wall = item
                rho = u @ rho @ u.conj().T
            rho = _bitflip_all(rho, n, model.p_bitflip)
            rho = _damp_all(rho, n, model, item[-1])
        return rho


def _pair_phase_vector(g, n: int) -> np.ndarray:
    """Diagonal phase pattern (+-1 or indicator) of a diagonal two-qubit gate."""
    q1, q2 = g.qubits
    bits = np.arange(2**n)
    b1 = (bits >> (n - q1 - 1)) & 1
    b2 = (bits >> (n - q2 - 1)) & 1
    if g.kind == "czz":
        return (1.0 - 2.0 * b1) * (1.0 - 2.0 * b2)  # exp(+i phi ZZ)
    return (b1 & b2).astype(float)  # cp: phase on |11> only


def _apply_2q_unitary(rho: np.ndarray, n: int, q1: int, q2: int, u4: np.ndarray) -> np.ndarray:
    u = embed_2q_op(u4, q1, q2, n)
    return u @ rho @ u.conj().T


def _prepare(segment, model: NoiseModel):
    if isinstance(segment, Schedule):
        return _PreparedSchedule(segment, model)
    return _PreparedCircuit(segment, model)


def run_trajectories(
    program,
    model: NoiseModel,
    shots: int,
    seed: int,
    initial: QuantumState | None = None,
    measure: bool = True,
) -> TrajectoryRun:
    """Average the noisy program over ``shots`` independent trajectories.

    ``program`` is a :class:`GateCircuit`, a :class:`Schedule`, or a list of
    them executed in order (hybrid programs).  Every shot draws fresh
    coherent noise for each gate and block from its own seeded stream, and
    the accumulation order is fixed by shot index, so the averaged density
    matrix is bit-identical for identical inputs.
    """
    if shots < 1:
        raise ParamError("shots must be >= 1")
    segments = program if isinstance(program, (list, tuple)) else [program]
    prepared = [_prepare(seg, model) for seg in segments]
    widths = {p.n for p in prepared}
    if len(widths) != 1:
        raise ParamError("all program segments must share the qubit count")
    n = widths.pop()
    rho0 = (initial or QuantumState.zero(n)).to_density().data
    streams = np.random.SeedSequence(seed).spawn(shots)

    acc = np.zeros_like(rho0)
    for i in range(shots):
        rng = np.random.default_rng(streams[i])
        rho = rho0.copy()
        for p in prepared:
            rho = p.run_shot(rho, model, rng)
        if measure:
            rho = _bitflip_all(rho, n, model.p_meas)
        acc += rho
    mean = acc / shots
    return TrajectoryRun(seed, shots, QuantumState("density_matrix", mean, check=False))
