"""Linear-system solver: phase estimation, ancilla encoding, uncomputation.

Solves ``A x = b`` for Hermitian ``A`` with spectrum in (0, 1).  Qubit
layout: ancilla first, then ``n_r`` register qubits (most significant bit
first), then the memory register holding ``|b>``.  The eigenvalue-inversion
stage (ancilla encoding) uses a fixed basis change on the ancilla followed by
a Gray-code ladder of Z rotations and CNOTs whose angles solve an orthogonal
sign-matrix system; no spectral knowledge of ``A`` enters the circuit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import GateCircuit
from .compiler import circuit_to_schedule, resource_hamiltonian
from .core import QuantumState, fidelity, propagator
from .errors import InvalidProblem, ParamError, SpectrumError
from .noise import NoiseModel, run_trajectories
from .qft import build_qft, inverse_qft_gates
from .schedule import AnalogBlock, Schedule, x_layer


# ---------------------------------------------------------------------------
# Gray code and encoding angles


def gray_code(n: int) -> list[str]:
    """Binary-reflected Gray code as n-bit strings; neighbours (cyclically)
    differ in exactly one bit."""
    if n < 1:
        raise ParamError("need n >= 1")
    return [format(i ^ (i >> 1), f"0{n}b") for i in range(2**n)]


def _dot_parity(a: int, b: int) -> int:
    return bin(a & b).count("1") & 1


def aqe_sign_matrix(n_r: int) -> np.ndarray:
    """Sign matrix ``M_ij = (-1)^{bin(i-1) . g(j-1)}`` with ``M M^T = 2^n I``."""
    dim = 2**n_r
    gray = [i ^ (i >> 1) for i in range(dim)]
    m = np.empty((dim, dim))
    for i in range(dim):
        for j in range(dim):
            m[i, j] = -1.0 if _dot_parity(i, gray[j]) else 1.0
    return m


def aqe_phases(n_r: int, f=None) -> np.ndarray:
    """Target rotation angles ``phi(p) = 2 arcsin(f(p / 2^n_r))``, ``phi(0) = 0``.

    The default amplitude profile is the eigenvalue inverse ``C / lambda``
    with ``C = 2^-n_r``, i.e. ``f`` maps ``p/2^n_r`` to ``1/p``.  A custom
    ``f`` turns this into the generalized encoding hook; its admissibility
    (bounded derivative) is not checked here.
    """
    dim = 2**n_r
    phis = np.zeros(dim)
    for p in range(1, dim):
        amp = f(p / dim) if f is not None else 1.0 / p
        if not -1.0 <= amp <= 1.0:
            raise ParamError(f"amplitude f({p}/{dim}) = {amp} outside [-1, 1]")
        phis[p] = 2.0 * np.arcsin(amp)
    return phis


def aqe_angles(n_r: int, f=None) -> np.ndarray:
    """Ladder angles solving ``M theta = phi`` via ``M^-1 = M^T / 2^n_r``."""
    m = aqe_sign_matrix(n_r)
    return m.T @ aqe_phases(n_r, f) / 2**n_r


V_GATE = np.array([[-1j, 1j], [1, 1]], dtype=complex) / np.sqrt(2)


def aqe_ladder(c: GateCircuit, ancilla: int, register: list[int], f=None) -> GateCircuit:
    """Append the encoding stage: V, the Gray-code Rz/CNOT ladder, V-dagger.

    After the ladder the ancilla amplitude on register branch ``p`` is
    ``sin(phi(p)/2)`` (times a branch-independent phase), which is the
    inverse-eigenvalue weight for the default profile.
    """
    n_r = len(register)
    dim = 2**n_r
    thetas = aqe_angles(n_r, f)
    gray = [i ^ (i >> 1) for i in range(dim)]
    c.u1(ancilla, V_GATE, label="V")
    for i in range(dim):
        c.rz(ancilla, -thetas[i])
        diff = gray[i] ^ gray[(i + 1) % dim]
        bit = diff.bit_length() - 1          # position from the LSB
        ctrl = register[n_r - 1 - bit]       # register is MSB first
        c.cnot(ctrl, ancilla)
    c.u1(ancilla, V_GATE.conj().T, label="Vdg")
    return c


# ---------------------------------------------------------------------------
# problem container


@dataclass
class HHLProblem:
    a: np.ndarray
    b: np.ndarray
    n_r: int

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex).reshape(-1)
        if self.a.ndim != 2 or self.a.shape[0] != self.a.shape[1]:
            raise InvalidProblem("matrix must be square")
        if self.a.shape[0] != self.b.size:
            raise InvalidProblem("matrix and vector sizes differ")
        if np.max(np.abs(self.a - self.a.conj().T)) > 1e-9:
            raise InvalidProblem("matrix must be Hermitian")
        dim = self.a.shape[0]
        if dim & (dim - 1):
            raise InvalidProblem("dimension must be a power of two")
        if self.n_r < 1:
            raise ParamError("need at least one register qubit")
        w = np.linalg.eigvalsh(self.a)
        if w.min() <= 0 or w.max() >= 1:
            raise SpectrumError(
                f"eigenvalues must lie in (0, 1); got [{w.min():.4g}, {w.max():.4g}] - "
                "rescale A (and undo the scale on the solution) first"
            )
        nb = np.linalg.norm(self.b)
        if nb == 0:
            raise InvalidProblem("b must be nonzero")
        self.b = self.b / nb

    @property
    def n_m(self) -> int:
        return int(round(np.log2(self.a.shape[0])))

    @property
    def qubit_count(self) -> int:
        return 1 + self.n_r + self.n_m

    def classical_solution(self) -> np.ndarray:
        x = np.linalg.solve(self.a, self.b)
        return x / np.linalg.norm(x)


@dataclass
class HHLResult:
    memory_state: QuantumState
    success_probability: float
    fidelity_to_classical: float
    mode: str


def suggest_register_size(kappa: float, n_s: int) -> int:
    """Register size ``ceil(log2(kappa sqrt(N_s)))`` balancing the sampling
    and eigenvalue-truncation error terms; clamped to at least 1."""
    if kappa < 1 or n_s < 1:
        raise ParamError("need kappa >= 1 and N_s >= 1")
    return max(1, int(np.ceil(np.log2(kappa * np.sqrt(n_s)))))


# ---------------------------------------------------------------------------
# circuit assembly


def _controlled_powers(c: GateCircuit, prob: HHLProblem, inverse: bool = False):
    u1 = propagator(prob.a, -2 * np.pi)  # exp(+2 pi i A)
    t0 = 1 + prob.n_r
    qubits = list(range(1, 1 + prob.n_r))
    order = reversed(qubits) if inverse else qubits
    for q in order:
        power = 2 ** (prob.n_r - q)  # q is 1-based within [1..n_r]
        u = np.linalg.matrix_power(u1, power)
        if inverse:
            u = u.conj().T
        c.cu(q, t0, u, label=f"cU^{power}{'-dag' if inverse else ''}")


def build_hhl_segments(prob: HHLProblem, mode: str = "digital",
                       g0: float = 1e6, dt: float = 1e-8, f=None,
                       lambda_floor: float | None = None):
    """The three program segments: phase estimation, encoding, uncomputation.

    In the digital-analog modes the encoding segment (the Rz/CNOT ladder) is
    translated into a schedule over the all-to-all resource and executed
    stepwise or banged; the controlled evolutions stay exact.

    ``lambda_floor`` restricts the inversion to the well-conditioned band
    ``lambda >= lambda_floor`` (no rotation below it).  The plain profile
    amplifies small estimated eigenvalues by the full ``2^n_r``, so stray
    phase-estimation tails at small ``p`` leave a size-independent error
    floor; the banded profile is the regime where the accuracy improves as
    ``O(kappa / 2^n_r)``.
    """
    if f is None and lambda_floor is not None:
        dim_r = 2**prob.n_r

        def f(lam, _floor=lambda_floor, _dim=dim_r):
            return 1.0 / (lam * _dim) if lam >= _floor else 0.0

    n = prob.qubit_count
    register = list(range(1, 1 + prob.n_r))

    qpe = GateCircuit(n)
    for q in register:
        qpe.h(q)
    _controlled_powers(qpe, prob)
    inverse_qft_gates(qpe, n, qubits=register)

    aqe = GateCircuit(n)
    aqe_ladder(aqe, 0, register, f=f)

    iqpe = GateCircuit(n)
    fwd = build_qft(prob.n_r, bit_reversal=True)
    for g in fwd.gates:
        mapped = tuple(register[q] for q in g.qubits)
        if g.kind == "h":
            iqpe.h(mapped[0])
        elif g.kind == "cp":
            iqpe.cp(mapped[0], mapped[1], g.param)
        else:
            iqpe.swap(mapped[0], mapped[1])
    _controlled_powers(iqpe, prob, inverse=True)
    for q in register:
        iqpe.h(q)

    if mode in ("sdaqc", "bdaqc"):
        aqe = circuit_to_schedule(aqe, g=g0, dt=dt, mode=mode)
    elif mode != "digital":
        raise ParamError(f"unknown mode {mode!r}")
    return [qpe, aqe, iqpe]


def run_hhl(
    prob: HHLProblem,
    mode: str = "digital",
    noise: NoiseModel | None = None,
    shots: int = 500,
    seed: int = 7,
    lambda_floor: float | None = None,
) -> HHLResult:
    """Execute the solver and post-select the ancilla on ``|1>``.

    Returns the (generally mixed) memory state conditioned on success, the
    success probability, and its fidelity against the normalized classical
    solution ``A^-1 b``.  See :func:`build_hhl_segments` for ``lambda_floor``.
    """
    noise = noise or NoiseModel.preset("none")
    segments = build_hhl_segments(prob, mode=mode, g0=noise.g0, dt=noise.dt_sqg,
                                  lambda_floor=lambda_floor)
    n = prob.qubit_count

    # |0>_A |0..0>_R |b>_M: b loads into the lowest-order tensor factor
    init = np.zeros(2**n, dtype=complex)
    init.reshape(2, 2**prob.n_r, 2**prob.n_m)[0, 0, :] = prob.b
    psi0 = QuantumState.statevector(init)

    if noise.is_trivial():
        run = run_trajectories(segments, noise, shots=1, seed=seed,
                               initial=psi0, measure=False)
    else:
        run = run_trajectories(segments, noise, shots=shots, seed=seed, initial=psi0)
    rho = run.result.data

    # project the ancilla onto |1| and trace out the register
    dim_r, dim_m = 2**prob.n_r, 2**prob.n_m
    rt = rho.reshape(2, dim_r, dim_m, 2, dim_r, dim_m)
    block = rt[1, :, :, 1, :, :]
    success = float(np.real(np.einsum("rmrm->", block)))
    if success <= 0:
        raise ParamError("post-selection never succeeds")
    mem = np.einsum("rmrk->mk", block) / success
    mem_state = QuantumState("density_matrix", mem, check=False)

    x = prob.classical_solution()
    fid = fidelity(mem_state, QuantumState.statevector(x))
    return HHLResult(mem_state, success, fid, mode)


# ---------------------------------------------------------------------------
# published controlled-Z decomposition over the resource


def compile_cz_daqc(n: int, control: int, target: int, g: float = 1.0,
                    dt: float = 1e-8, mode: str = "sdaqc") -> Schedule:
    """Two resource blocks of duration ``pi/(8 g)`` realising a controlled-Z.

    All qubits outside the gate pair take an X pulse before and after the
    first block.  The result equals the controlled-Z up to single-qubit Z
    phases and a global phase.  With four or more qubits the construction
    additionally leaves pairwise couplings among the spectators, so its
    contract holds for n <= 3; larger systems use the pair synthesis in
    :func:`daqc.compiler.compile_zz_pair` instead.
    """
    if control == target or not (0 <= control < n and 0 <= target < n):
        raise ParamError(f"invalid pair ({control}, {target}) for n={n}")
    spectators = [q for q in range(n) if q not in (control, target)]
    items = []
    if spectators:
        items.append(x_layer(spectators))
    items.append(AnalogBlock(np.pi / (8 * g), label="cz block 1"))
    if spectators:
        items.append(x_layer(spectators))
    items.append(AnalogBlock(np.pi / (8 * g), label="cz block 2"))
    return Schedule(resource_hamiltonian(n, g), items, mode=mode, dt=dt)
