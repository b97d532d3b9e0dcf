"""Quantum phase estimation with digital and digital-analog execution.

Estimates the phase of a single-qubit diagonal unitary ``diag(1, e^{2 pi i
phi})`` applied to the eigenstate ``|1>``.  The register occupies qubits
``0..n_r-1`` (most significant bit first) and the eigenstate qubit sits last.
The digital arm decomposes every controlled phase over Rz rotations and
CNOTs; the digital-analog arms translate that circuit into a schedule over
the all-to-all Ising resource.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import GateCircuit
from .compiler import circuit_to_schedule
from .core import QuantumState
from .errors import ParamError
from .noise import NoiseModel, run_trajectories
from .qft import inverse_qft_gates


@dataclass
class QPEResult:
    probabilities: np.ndarray     # over register bitstrings, MSB first
    weighted_mean: float
    weighted_std: float
    majority_vote: float
    state: QuantumState
    mode: str

    def top_outcomes(self, k: int = 2) -> list[tuple[str, float]]:
        n_r = int(round(np.log2(self.probabilities.size)))
        order = np.argsort(self.probabilities)[::-1][:k]
        return [(format(i, f"0{n_r}b"), float(self.probabilities[i])) for i in order]


def build_qpe_circuit(phi: float, n_r: int, native: bool = False) -> GateCircuit:
    """QPE circuit for ``P(phi) = diag(1, e^{2 pi i phi})`` on eigenstate |1>.

    With ``native`` every controlled phase is expanded over {Rz, CNOT}, the
    gate set the noisy digital arm runs on.
    """
    if not 0 <= phi < 1:
        raise ParamError("phi must lie in [0, 1)")
    if n_r < 1:
        raise ParamError("need at least one register qubit")
    n = n_r + 1
    eig = n_r
    c = GateCircuit(n)
    c.x(eig)  # eigenstate |1>
    for q in range(n_r):
        c.h(q)
    for q in range(n_r):
        power = 2 ** (n_r - 1 - q)
        angle = 2 * np.pi * phi * power
        if native:
            _native_cp(c, q, eig, angle)
        else:
            c.cp(q, eig, angle)
    if native:
        _native_inverse_qft(c, n_r)
    else:
        inverse_qft_gates(c, n, qubits=range(n_r))
    return c


def _native_cp(c: GateCircuit, ctrl: int, tgt: int, phi: float):
    # cp(phi) = Rz(phi/2) x Rz(phi/2) . CNOT . Rz(-phi/2) . CNOT, up to phase
    c.rz(ctrl, phi / 2)
    c.rz(tgt, phi / 2)
    c.cnot(ctrl, tgt)
    c.rz(tgt, -phi / 2)
    c.cnot(ctrl, tgt)


def _native_swap(c: GateCircuit, a: int, b: int):
    c.cnot(a, b)
    c.cnot(b, a)
    c.cnot(a, b)


def _native_inverse_qft(c: GateCircuit, n_r: int):
    from .qft import build_qft

    ref = build_qft(n_r, bit_reversal=True)
    for g in reversed(ref.gates):
        if g.kind == "h":
            c.h(g.qubits[0])
        elif g.kind == "cp":
            _native_cp(c, g.qubits[0], g.qubits[1], -g.param)
        elif g.kind == "swap":
            _native_swap(c, g.qubits[0], g.qubits[1])


def run_qpe(
    phi: float,
    n_r: int,
    mode: str = "digital",
    noise: NoiseModel | None = None,
    shots: int = 1000,
    seed: int = 7,
    dt: float | None = None,
) -> QPEResult:
    """Run QPE and report the outcome distribution and both phase estimates.

    Returns the register-string probabilities, the probability-weighted mean
    estimate with its spread, and the majority-vote (most likely string)
    estimate.
    """
    if mode not in ("digital", "sdaqc", "bdaqc"):
        raise ParamError(f"unknown mode {mode!r}")
    noise = noise or NoiseModel.preset("none")
    dt = noise.dt_sqg if dt is None else dt

    native = not noise.is_trivial() or mode != "digital"
    circ = build_qpe_circuit(phi, n_r, native=native)
    if mode == "digital":
        program = circ
    else:
        program = circuit_to_schedule(circ, g=noise.g0, dt=dt, mode=mode)

    if noise.is_trivial():
        run = run_trajectories(program, noise, shots=1, seed=seed, measure=False)
    else:
        run = run_trajectories(program, noise, shots=shots, seed=seed)
    state = run.result

    probs_full = state.probabilities()
    # marginalize the eigenstate qubit (last tensor factor)
    probs = probs_full.reshape(2**n_r, 2).sum(axis=1)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()

    ks = np.arange(2**n_r)
    estimates = ks / 2**n_r
    mean = float(np.sum(probs * estimates))
    std = float(np.sqrt(max(np.sum(probs * estimates**2) - mean**2, 0.0)))
    majority = float(estimates[int(np.argmax(probs))])
    return QPEResult(probs, mean, std, majority, state, mode)
