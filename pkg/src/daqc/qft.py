"""Quantum Fourier transform: gate circuit, digital protocol, and schedules.

Three execution routes for the same transform:

* :func:`build_qft` - the textbook controlled-phase circuit (exact gates),
* :func:`build_qft_digital` - the purely digital protocol with every
  controlled phase expanded over fixed ``exp(i pi/4 ZZ)`` primitives, which
  is the form the two-qubit noise model acts on,
* :func:`compile_qft_daqc` - one Ising synthesis per controlled-rotation
  block, giving a stepwise or banged schedule over the all-to-all resource.
"""

from __future__ import annotations

import numpy as np

from .circuits import GateCircuit
from .compiler import CouplingMatrix, compile_ising, resource_hamiltonian
from .core import QuantumState, fidelity
from .errors import ParamError, SingularSignMatrix
from .noise import NoiseModel, run_trajectories
from .schedule import AnalogBlock, Schedule, hadamard_layer, phase_layer, schedule_unitary


def build_qft(n: int, bit_reversal: bool = True) -> GateCircuit:
    """Controlled-phase QFT circuit; with ``bit_reversal`` the unitary equals
    the DFT matrix ``exp(2 pi i j k / 2^n) / 2^(n/2)`` exactly."""
    if n < 1:
        raise ParamError("need n >= 1")
    c = GateCircuit(n)
    for m in range(n):
        c.h(m)
        for q in range(m + 1, n):
            c.cp(q, m, 2 * np.pi / 2 ** (q - m + 1))
    if bit_reversal:
        for i in range(n // 2):
            c.swap(i, n - 1 - i)
    return c


def build_qft_digital(n: int, bit_reversal: bool = False) -> GateCircuit:
    """QFT over the native digital gate set.

    Each controlled phase splits into single-qubit Z phases plus a ZZ phase,
    and the ZZ phase runs through the fixed-pi/4 interaction sandwich, so two
    noisy ``exp(i pi/4 ZZ)`` primitives per controlled rotation.
    """
    if n < 1:
        raise ParamError("need n >= 1")
    c = GateCircuit(n)
    for m in range(n):
        c.h(m)
        for q in range(m + 1, n):
            phi = 2 * np.pi / 2 ** (q - m + 1)
            # cp(q, m, phi) = e^{i phi/4} rz-phases * e^{i phi/4 ZZ}
            c.rz(q, phi / 2)
            c.rz(m, phi / 2)
            _fixed_phase_zz(c, q, m, phi / 4)
    if bit_reversal:
        for i in range(n // 2):
            c.swap(i, n - 1 - i)
    return c


def _fixed_phase_zz(c: GateCircuit, a: int, b: int, alpha: float):
    """``exp(i alpha Z_a Z_b)`` from two fixed ``exp(i pi/4 ZZ)`` interactions.

    The variable phase moves onto a single-qubit y rotation conjugated by the
    fixed interactions; the second fixed block is reversed by a pair of X
    pulses.  Equality holds up to a global phase.
    """
    c.ry(a, np.pi / 2)          # exp(-i pi/4 Y_a)
    c.x(b)
    c.czz(a, b, np.pi / 4)
    c.x(b)
    c.ry(a, -2 * alpha)         # exp(+i alpha Y_a)
    c.czz(a, b, np.pi / 4)
    c.ry(a, -np.pi / 2)         # exp(+i pi/4 Y_a)


def compile_qft_daqc(
    n: int,
    mode: str = "sdaqc",
    dt: float = 1e-8,
    g0: float = 1e6,
) -> Schedule:
    """Schedule for the QFT over the homogeneous all-to-all Ising resource.

    Per controlled-rotation block: a Hadamard layer, one layer of single-qubit
    Z phases, and the Ising synthesis of the block's ZZ phases (couplings
    ``pi / 2^(k - m + 2)`` toward the block qubit).  Output is in reversed bit
    order, like the plain circuit without its final swaps.
    """
    if n < 2:
        raise ParamError("need n >= 2")
    if n == 4:
        raise SingularSignMatrix(
            "the all-to-all resource cannot synthesise 4-qubit blocks; "
            "the sign matrix is singular at N = 4"
        )
    items = []
    for m in range(n - 1):
        items.append(hadamard_layer([m]))
        angles = {}
        total = 0.0
        for q in range(m + 1, n):
            theta = np.pi / 2 ** (q - m + 2)
            angles[q] = theta
            total += theta
        angles[m] = total
        items.append(phase_layer(angles, phase=total, label=f"cphase-block m={m}"))

        target = CouplingMatrix(n)
        for q in range(m + 1, n):
            target.set(m, q, np.pi / 2 ** (q - m + 2))
        if n == 2:
            alpha = target.get(0, 1)
            period = 2 * np.pi / g0
            items.append(AnalogBlock((period - alpha / g0) % period, label="pair(0,1)"))
        else:
            res = compile_ising(target, 1.0, g0, sign=+1, dt=dt, mode=mode)
            items.extend(res.schedule.items)
    items.append(hadamard_layer([n - 1]))
    return Schedule(resource_hamiltonian(n, g0), items, mode=mode, dt=dt)


def inverse_qft_gates(target: GateCircuit, n: int, qubits=None, bit_reversal: bool = True):
    """Append the inverse QFT on ``qubits`` (default all) to ``target``."""
    qubits = list(range(n)) if qubits is None else list(qubits)
    m = len(qubits)
    ref = build_qft(m, bit_reversal=bit_reversal)
    for g in reversed(ref.gates):
        mapped = tuple(qubits[q] for q in g.qubits)
        if g.kind == "h":
            target.h(mapped[0])
        elif g.kind == "cp":
            target.cp(mapped[0], mapped[1], -g.param)
        elif g.kind == "swap":
            target.swap(mapped[0], mapped[1])
        else:  # pragma: no cover
            raise ValueError(f"unexpected QFT gate {g.kind}")
    return target


# ---------------------------------------------------------------------------
# reference states and the paradigm comparison


def w_state(n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    for q in range(n):
        v[1 << (n - 1 - q)] = 1.0
    return v / np.sqrt(n)


def ghz_state(n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def w_ghz_superposition(n: int, beta: float) -> QuantumState:
    """``sin(beta) |W> + cos(beta) |GHZ>`` (the two are orthogonal)."""
    v = np.sin(beta) * w_state(n) + np.cos(beta) * ghz_state(n)
    return QuantumState.statevector(v / np.linalg.norm(v))


def qft_paradigm_fidelities(
    n: int,
    noise: NoiseModel,
    shots: int,
    seed: int,
    beta: float = np.pi / 4,
    dt: float | None = None,
) -> dict:
    """Mean fidelity to the ideal QFT output for digital, sdaqc, and bdaqc.

    All three arms share the input state ``sin(beta)|W> + cos(beta)|GHZ>``
    and are compared against the exact circuit output (no final swaps, so all
    arms emit in the same reversed bit order).
    """
    dt = noise.dt_sqg if dt is None else dt
    psi0 = w_ghz_superposition(n, beta)
    ideal_u = build_qft(n, bit_reversal=False).unitary()
    ideal = QuantumState.statevector(ideal_u @ psi0.data)

    out = {}
    digital = build_qft_digital(n)
    run = run_trajectories(digital, noise, shots, seed, initial=psi0)
    out["digital"] = fidelity(ideal, run.result)
    for mode in ("sdaqc", "bdaqc"):
        sched = compile_qft_daqc(n, mode=mode, dt=dt, g0=noise.g0)
        run = run_trajectories(sched, noise, shots, seed, initial=psi0)
        out[mode] = fidelity(ideal, run.result)
    return out
