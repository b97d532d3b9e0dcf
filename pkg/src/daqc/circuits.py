"""Gate-level circuit IR with exact dense simulation.

Used for the purely digital execution path and as the common program format
the trajectory engine consumes.  Gate kinds carry their own noise semantics:
single-qubit rotations pick up a uniform phase-scaling draw, fixed-phase ZZ
interactions a relative Gaussian phase error, and CNOTs an absolute Gaussian
jitter of the generator angle around pi/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PAULI_1Q
from .errors import DimensionError, ParamError

_SQRT2 = np.sqrt(2.0)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2
_X = PAULI_1Q["X"]
_Y = PAULI_1Q["Y"]
_Z = PAULI_1Q["Z"]

SQG_KINDS = {"h", "x", "rx", "ry", "rz", "phase", "u1"}
TQG_KINDS = {"cnot", "cp", "czz", "swap", "cu"}


@dataclass
class Gate:
    kind: str
    qubits: tuple
    param: float | None = None
    matrix: np.ndarray | None = None  # payload for controlled-unitary gates
    label: str = ""


class GateCircuit:
    """Ordered list of gates over ``n`` qubits (qubit 0 = leftmost factor)."""

    def __init__(self, n: int):
        if n < 1:
            raise ParamError("need at least one qubit")
        self.n = n
        self.gates: list[Gate] = []

    def _check(self, *qubits):
        for q in qubits:
            if not 0 <= q < self.n:
                raise DimensionError(f"qubit {q} out of range for n={self.n}")
        if len(set(qubits)) != len(qubits):
            raise DimensionError("gate qubits must be distinct")

    def add(self, gate: Gate) -> "GateCircuit":
        self._check(*gate.qubits)
        if gate.param is not None and not np.isfinite(gate.param):
            raise ParamError("gate parameter must be finite")
        self.gates.append(gate)
        return self

    def h(self, q):
        return self.add(Gate("h", (q,)))

    def x(self, q):
        return self.add(Gate("x", (q,)))

    def rx(self, q, theta):
        return self.add(Gate("rx", (q,), theta))

    def ry(self, q, theta):
        return self.add(Gate("ry", (q,), theta))

    def rz(self, q, theta):
        return self.add(Gate("rz", (q,), theta))

    def phase(self, q, phi):
        return self.add(Gate("phase", (q,), phi))

    def u1(self, q, matrix, label=""):
        """Arbitrary single-qubit unitary with a dense payload."""
        return self.add(Gate("u1", (q,), matrix=np.asarray(matrix, dtype=complex), label=label))

    def cnot(self, c, t):
        return self.add(Gate("cnot", (c, t)))

    def cp(self, c, t, phi):
        return self.add(Gate("cp", (c, t), phi))

    def czz(self, a, b, phi):
        """Fixed two-qubit interaction ``exp(+i phi Z Z)``."""
        return self.add(Gate("czz", (a, b), phi))

    def swap(self, a, b):
        return self.add(Gate("swap", (a, b)))

    def cu(self, c, t_first, u, label=""):
        """Controlled unitary; ``u`` acts on qubits ``t_first..`` contiguous."""
        g = Gate("cu", (c, t_first), matrix=np.asarray(u, dtype=complex), label=label)
        self._check(c)
        self.gates.append(g)
        return self

    def extend(self, other: "GateCircuit") -> "GateCircuit":
        if other.n != self.n:
            raise DimensionError("circuit widths differ")
        self.gates.extend(other.gates)
        return self

    def unitary(self) -> np.ndarray:
        u = np.eye(2**self.n, dtype=complex)
        for g in self.gates:
            u = embed_gate(g, self.n) @ u
        return u

    def __len__(self):
        return len(self.gates)


# ---------------------------------------------------------------------------
# dense gate matrices


def rotation_matrix(axis: str, theta: float) -> np.ndarray:
    s = {"x": _X, "y": _Y, "z": _Z}[axis]
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * s


def gate_matrix(g: Gate) -> np.ndarray:
    """Local matrix of the gate (2x2, 4x4, or the controlled payload)."""
    k = g.kind
    if k == "h":
        return _H.copy()
    if k == "x":
        return _X.copy().astype(complex)
    if k in ("rx", "ry", "rz"):
        return rotation_matrix(k[1], g.param)
    if k == "phase":
        return np.diag([1.0, np.exp(1j * g.param)]).astype(complex)
    if k == "u1":
        return g.matrix.copy()
    if k == "cnot":
        return np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
        )
    if k == "cp":
        return np.diag([1, 1, 1, np.exp(1j * g.param)]).astype(complex)
    if k == "czz":
        p = np.exp(1j * g.param)
        return np.diag([p, 1 / p, 1 / p, p]).astype(complex)
    if k == "swap":
        return np.array(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
        )
    if k == "cu":
        d = g.matrix.shape[0]
        out = np.eye(2 * d, dtype=complex)
        out[d:, d:] = g.matrix
        return out
    raise ParamError(f"unknown gate kind {g.kind!r}")


def embed_1q_op(op: np.ndarray, q: int, n: int) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for i in range(n):
        m = np.kron(m, op if i == q else np.eye(2, dtype=complex))
    return m


def embed_2q_op(op4: np.ndarray, q1: int, q2: int, n: int) -> np.ndarray:
    u = op4.reshape(2, 2, 2, 2)
    eye = np.eye(2**n, dtype=complex).reshape([2] * (2 * n))
    t = np.tensordot(u, eye, axes=([2, 3], [q1, q2]))
    t = np.moveaxis(t, [0, 1], [q1, q2])
    return t.reshape(2**n, 2**n)


def embed_gate(g: Gate, n: int) -> np.ndarray:
    m = gate_matrix(g)
    if m.shape == (2, 2):
        return embed_1q_op(m, g.qubits[0], n)
    if g.kind == "cu":
        # control qubit, then a contiguous target register starting at qubits[1]
        c, t0 = g.qubits
        d = g.matrix.shape[0]
        nt = int(round(np.log2(d)))
        if t0 != c + 1 or t0 + nt > n:
            # general placement: permute via explicit basis loop
            return _embed_cu_general(g, n)
        full = np.eye(2 ** (nt + 1), dtype=complex)
        full[d:, d:] = g.matrix
        eye_before = np.eye(2**c, dtype=complex)
        eye_after = np.eye(2 ** (n - c - 1 - nt), dtype=complex)
        return np.kron(np.kron(eye_before, full), eye_after)
    return embed_2q_op(m, g.qubits[0], g.qubits[1], n)


def _embed_cu_general(g: Gate, n: int) -> np.ndarray:
    c, t0 = g.qubits
    d = g.matrix.shape[0]
    nt = int(round(np.log2(d)))
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    tmask_shift = n - t0 - nt  # target register occupies bits t0..t0+nt-1 (MSB first)
    cbit = n - c - 1
    for col in range(dim):
        if (col >> cbit) & 1 == 0:
            out[col, col] = 1.0
            continue
        tin = (col >> tmask_shift) & (d - 1)
        base = col & ~((d - 1) << tmask_shift)
        for tout in range(d):
            amp = g.matrix[tout, tin]
            if amp != 0:
                out[base | (tout << tmask_shift), col] = amp
    return out


# ---------------------------------------------------------------------------
# generators used by the coherent-noise path

_CNOT_GEN = np.kron(np.diag([0.0, 1.0]), np.eye(2) - _X)  # exp(-i pi/2 gen) = CNOT


def sqg_generator(g: Gate) -> np.ndarray:
    """Hermitian h with ``expm(-i h)`` equal to the gate (2x2)."""
    k = g.kind
    if k == "h":
        return 0.5 * np.pi * (np.eye(2) - (_X + _Z) / _SQRT2)
    if k == "x":
        return 0.5 * np.pi * _X
    if k in ("rx", "ry", "rz"):
        return 0.5 * g.param * {"x": _X, "y": _Y, "z": _Z}[k[1]]
    if k == "phase":
        return 0.5 * g.param * (_Z - np.eye(2))
    if k == "u1":
        from .core import hermitian_log

        return hermitian_log(g.matrix)
    raise ParamError(f"{k!r} is not a single-qubit rotation")


def noisy_gate_matrix(g: Gate, model, rng) -> np.ndarray:
    """Local gate matrix with one fresh coherent draw baked in."""
    if g.kind in SQG_KINDS:
        scale = rng.uniform(1 - model.sqgn, 1 + model.sqgn) if model.sqgn > 0 else 1.0
        h = scale * sqg_generator(g)
        w, v = np.linalg.eigh(h)
        return (v * np.exp(-1j * w)) @ v.conj().T
    if g.kind == "czz":
        eps = rng.normal(0.0, model.tqgn) if model.tqgn > 0 else 0.0
        p = np.exp(1j * g.param * (1 + eps))
        return np.diag([p, 1 / p, 1 / p, p]).astype(complex)
    if g.kind == "cp":
        eps = rng.normal(0.0, model.tqgn) if model.tqgn > 0 else 0.0
        return np.diag([1, 1, 1, np.exp(1j * g.param * (1 + eps))]).astype(complex)
    if g.kind == "cnot":
        s = rng.normal(np.pi / 2, model.tqgn) if model.tqgn > 0 else np.pi / 2
        w, v = np.linalg.eigh(_CNOT_GEN)
        return (v * np.exp(-1j * s * w)) @ v.conj().T
    if g.kind == "swap":
        return gate_matrix(g)
    if g.kind == "cu":
        return None  # treated as exact (used only on noiseless paths)
    raise ParamError(f"unknown gate kind {g.kind!r}")
