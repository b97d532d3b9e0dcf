"""Schedule IR and execution for stepwise and banged digital-analog runs.

A :class:`Schedule` is an ordered list of digital layers (single-qubit
rotations of duration ``dt``) and analog blocks (evolution under the fixed
resource Hamiltonian).  Two execution semantics are supported:

* ``sdaqc``: the resource interaction is switched off during digital layers,
  which therefore apply exactly their intended gates (sudden approximation).
* ``bdaqc``: the resource stays on.  Each pulse plays on top of the analog
  evolution and absorbs the matching amount of analog time from its
  neighbouring blocks (symmetrically for interior pulses, from the single
  neighbour at the boundaries), so the total analog interaction time equals
  the stepwise sum.  Interior pulses then carry a third-order error in the
  pulse duration and the boundary pulses a second-order one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    PAULI_1Q,
    PauliHamiltonian,
    QuantumState,
    commutator_i,
    frobenius_norm,
    propagator,
    spectral_norm,
)
from .errors import DimensionError, WrongMode

SDAQC = "sdaqc"
BDAQC = "bdaqc"


@dataclass
class DigitalLayer:
    """Simultaneous single-qubit rotations.

    ``gates[q]`` is the intended 2x2 unitary on qubit ``q`` and
    ``generators[q]`` a Hermitian ``h`` with ``expm(-i h) = gates[q]``; the
    physical layer Hamiltonian is ``sum_q h_q / dt``, so faster pulses are
    stronger.  ``phase`` is a layer-wide global phase factor ``e^{i phase}``.
    """

    gates: dict[int, np.ndarray]
    generators: dict[int, np.ndarray]
    phase: float = 0.0
    label: str = ""
    duration: float | None = None  # overrides the schedule-wide dt
    absorbs: bool = True  # False for intentional banged segments (e.g. a
    # driver): they neither trim neighbouring blocks nor pass adjacency

    def qubits(self):
        return sorted(self.gates)


@dataclass
class AnalogBlock:
    duration: float
    label: str = ""


@dataclass
class Schedule:
    resource: PauliHamiltonian
    items: list
    mode: str = SDAQC
    dt: float = 1e-2

    @property
    def qubit_count(self) -> int:
        return self.resource.qubit_count

    @property
    def analog_blocks(self):
        return [it for it in self.items if isinstance(it, AnalogBlock)]

    @property
    def digital_layers(self):
        return [it for it in self.items if isinstance(it, DigitalLayer)]

    def layer_duration(self, layer: DigitalLayer) -> float:
        return self.dt if layer.duration is None else layer.duration

    def wall_time(self) -> float:
        """Sum of item durations: analog times plus one pulse duration per layer."""
        return sum(b.duration for b in self.analog_blocks) + sum(
            self.layer_duration(l) for l in self.digital_layers
        )

    def with_mode(self, mode: str, dt: float | None = None) -> "Schedule":
        return Schedule(self.resource, list(self.items), mode, self.dt if dt is None else dt)

    def to_text(self) -> str:
        lines = [
            f"# schedule mode={self.mode} qubits={self.qubit_count} dt={self.dt:.12g}"
        ]
        for it in self.items:
            if isinstance(it, AnalogBlock):
                lines.append(f"analog {it.duration:.12g}")
            else:
                desc = it.label or " ".join(f"u(q{q})" for q in it.qubits())
                lines.append(f"digital dt={self.dt:.12g} {desc}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# layer constructors

_GEN_1Q = {"X": PAULI_1Q["X"], "Y": PAULI_1Q["Y"], "Z": PAULI_1Q["Z"]}


def rotation_layer(rotations: dict[int, tuple[str, float]], phase: float = 0.0,
                   label: str = "") -> DigitalLayer:
    """Layer of axis rotations ``exp(-i angle/2 sigma_axis)`` per qubit."""
    gates, gens = {}, {}
    for q, (axis, angle) in rotations.items():
        h = 0.5 * angle * _GEN_1Q[axis.upper()]
        gens[q] = h
        w, v = np.linalg.eigh(h)
        gates[q] = (v * np.exp(-1j * w)) @ v.conj().T
    if not label:
        label = " ".join(
            f"R{axis.lower()}({angle:.6g})@q{q}" for q, (axis, angle) in sorted(rotations.items())
        )
    return DigitalLayer(gates, gens, phase, label)


def x_layer(qubits, label: str = "") -> DigitalLayer:
    """Pi rotation about x on the given qubits (the conjugation pulse)."""
    return rotation_layer({q: ("X", np.pi) for q in qubits},
                          label=label or "X@" + ",".join(f"q{q}" for q in sorted(qubits)))


_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_HAD_GEN = 0.5 * np.pi * (np.eye(2) - (PAULI_1Q["X"] + PAULI_1Q["Z"]) / np.sqrt(2))


def hadamard_layer(qubits, label: str = "") -> DigitalLayer:
    return DigitalLayer(
        {q: _HAD.copy() for q in qubits},
        {q: _HAD_GEN.copy() for q in qubits},
        0.0,
        label or "H@" + ",".join(f"q{q}" for q in sorted(qubits)),
    )


def layer_from_involutions(gates: dict[int, np.ndarray], phase: float = 0.0,
                           label: str = "") -> DigitalLayer:
    """Layer of Hermitian unitary gates; generator ``pi/2 (I - gate)`` is exact."""
    gens = {q: 0.5 * np.pi * (np.eye(2) - g) for q, g in gates.items()}
    return DigitalLayer(dict(gates), gens, phase, label)


def phase_layer(angles: dict[int, float], phase: float = 0.0, label: str = "") -> DigitalLayer:
    """Z-phase layer: ``exp(-i angle Z)`` per qubit (full angle on Z)."""
    return rotation_layer({q: ("Z", 2.0 * a) for q, a in angles.items()},
                          phase=phase, label=label)


# ---------------------------------------------------------------------------
# execution


def _layer_unitary(layer: DigitalLayer, n: int) -> np.ndarray:
    u = np.eye(1, dtype=complex)
    for q in range(n):
        u = np.kron(u, layer.gates.get(q, np.eye(2, dtype=complex)))
    return np.exp(1j * layer.phase) * u


def _layer_generator(layer: DigitalLayer, n: int, scales=None) -> np.ndarray:
    """Dense Hermitian g with expm(-i g) = layer unitary (up to noise scaling)."""
    dim = 2**n
    g = np.zeros((dim, dim), dtype=complex)
    for q, h in layer.generators.items():
        s = 1.0 if scales is None else scales.get(q, 1.0)
        m = np.eye(1, dtype=complex)
        for qq in range(n):
            m = np.kron(m, s * h if qq == q else np.eye(2, dtype=complex))
        g += m
    g -= layer.phase * np.eye(dim)
    return g


def effective_analog_durations(s: Schedule) -> list[float]:
    """Per-analog-block durations as executed.

    In sdaqc mode these are the stored durations.  In bdaqc mode each run of
    consecutive digital layers absorbs its own duration out of the adjacent
    blocks: half from each side for interior runs, all of it from the single
    neighbour for boundary runs.
    """
    durations = [b.duration for b in s.analog_blocks]
    if s.mode != BDAQC:
        return durations

    # map item index -> analog slot
    slot = {}
    k = 0
    for idx, it in enumerate(s.items):
        if isinstance(it, AnalogBlock):
            slot[idx] = k
            k += 1

    def _absorbing(it):
        return isinstance(it, DigitalLayer) and it.absorbs

    def _scan(start, step):
        # nearest analog slot in the given direction; walls stop the scan
        x = start
        while 0 <= x < len(s.items):
            if x in slot:
                return slot[x]
            if isinstance(s.items[x], DigitalLayer) and not s.items[x].absorbs:
                return None
            x += step
        return None

    i = 0
    n_items = len(s.items)
    while i < n_items:
        if _absorbing(s.items[i]):
            j = i
            while j < n_items and _absorbing(s.items[j]):
                j += 1
            run_time = sum(s.layer_duration(s.items[x]) for x in range(i, j))
            before = _scan(i - 1, -1)
            after = _scan(j, +1)
            if before is not None and after is not None:
                claims = [(before, run_time / 2), (after, run_time / 2)]
            elif before is not None:
                claims = [(before, run_time)]
            elif after is not None:
                claims = [(after, run_time)]
            else:
                claims = []
            for b, amount in claims:
                take = min(durations[b], amount)
                durations[b] = durations[b] - take
            i = j
        else:
            i += 1
    return durations


def schedule_operations(s: Schedule, noise=None, rng=None):
    """Dense unitaries for the schedule, in order.

    Yields ``(unitary, wall_time, kind)`` with kind ``"analog"`` or
    ``"digital"``.  When a noise model is given, coherent trajectory noise is
    baked into each unitary: analog durations jitter by ``N(0, abn/g0)`` and
    single-qubit generators scale by ``U(1-sqgn, 1+sqgn)``.
    """
    n = s.qubit_count
    h_res = s.resource
    durations = effective_analog_durations(s)
    banged = s.mode == BDAQC
    h_res_dense = h_res.matrix() if banged else None

    k = 0
    for it in s.items:
        if isinstance(it, AnalogBlock):
            t = durations[k]
            k += 1
            if noise is not None and noise.analog_jitter(s.mode) > 0:
                t = t + rng.normal(0.0, noise.analog_jitter(s.mode))
            yield propagator(h_res, t), durations[k - 1], "analog"
        else:
            dt_layer = s.layer_duration(it)
            scales = None
            if noise is not None and noise.sqgn > 0:
                scales = {q: rng.uniform(1 - noise.sqgn, 1 + noise.sqgn) for q in it.gates}
            if banged:
                g = _layer_generator(it, n, scales) + dt_layer * h_res_dense
                yield propagator(g, 1.0), dt_layer, "digital"
            else:
                if scales is None:
                    yield _layer_unitary(it, n), dt_layer, "digital"
                else:
                    yield propagator(_layer_generator(it, n, scales), 1.0), dt_layer, "digital"


def schedule_unitary(s: Schedule) -> np.ndarray:
    """Noiseless total unitary of the schedule under its mode semantics."""
    u = np.eye(2**s.qubit_count, dtype=complex)
    for op, _, _ in schedule_operations(s):
        u = op @ u
    return u


def simulate_schedule(s: Schedule, psi0: QuantumState) -> QuantumState:
    """Evolve a state through the schedule without noise."""
    if psi0.dim != 2**s.qubit_count:
        raise DimensionError(
            f"state dimension {psi0.dim} does not match {s.qubit_count} qubits"
        )
    if psi0.kind == "statevector":
        v = psi0.data.copy()
        for op, _, _ in schedule_operations(s):
            v = op @ v
        return QuantumState("statevector", v, check=False)
    rho = psi0.data.copy()
    for op, _, _ in schedule_operations(s):
        rho = op @ rho @ op.conj().T
    return QuantumState("density_matrix", rho, check=False)


# ---------------------------------------------------------------------------
# banged-protocol error estimates


@dataclass
class BangErrorReport:
    interior_errors: list[float]
    e_start: float
    e_end: float
    total: float
    interior_count: int


def bang_error_estimate(h_i, h_r, dt: float, norm: str = "spectral") -> float:
    """Closed-form interior-pulse error ``dt^3/4 ||[[H_I,H_R], H_I+2H_R]||``.

    Vanishes when the two generators commute; cubic in the pulse duration at
    fixed rotation-generator amplitude.
    """
    if isinstance(h_i, PauliHamiltonian) and isinstance(h_r, PauliHamiltonian):
        inner = commutator_i(h_i, h_r)
        outer = commutator_i(inner, h_i + h_r.scaled(2.0))
        if len(outer) == 0:
            return 0.0
        value = spectral_norm(outer) if norm == "spectral" else frobenius_norm(outer)
    else:
        mi = h_i.matrix() if isinstance(h_i, PauliHamiltonian) else np.asarray(h_i)
        mr = h_r.matrix() if isinstance(h_r, PauliHamiltonian) else np.asarray(h_r)
        c = mi @ mr - mr @ mi
        outer = c @ (mi + 2 * mr) - (mi + 2 * mr) @ c
        value = spectral_norm(outer) if norm == "spectral" else frobenius_norm(outer)
    return dt**3 / 4.0 * value


def total_bang_error(s: Schedule, norm: str = "spectral") -> BangErrorReport:
    """Sum the per-pulse error estimates of a banged schedule.

    Interior pulses use the cubic closed form; the first and last pulses of
    the schedule lack a symmetric analog neighbourhood and use the
    second-order estimate ``dt^2/2 ||[H_I, H_R]||``.
    """
    if s.mode != BDAQC:
        raise WrongMode("total_bang_error requires a bdaqc schedule")
    n = s.qubit_count
    h_i = s.resource.matrix()

    layer_positions = [i for i, it in enumerate(s.items) if isinstance(it, DigitalLayer)]
    analog_positions = {i for i, it in enumerate(s.items) if isinstance(it, AnalogBlock)}

    def norm_of(m):
        return spectral_norm(m) if norm == "spectral" else frobenius_norm(m)

    interior, e_start, e_end = [], 0.0, 0.0
    for idx in layer_positions:
        dt_layer = s.layer_duration(s.items[idx])
        h_r = _layer_generator(s.items[idx], n) / dt_layer
        has_before = any(p < idx for p in analog_positions)
        has_after = any(p > idx for p in analog_positions)
        if has_before and has_after:
            c = h_i @ h_r - h_r @ h_i
            outer = c @ (h_i + 2 * h_r) - (h_i + 2 * h_r) @ c
            interior.append(dt_layer**3 / 4.0 * norm_of(outer))
        else:
            c = h_i @ h_r - h_r @ h_i
            e = dt_layer**2 / 2.0 * norm_of(c)
            if not has_before:
                e_start += e
            else:
                e_end += e
    total = sum(interior) + e_start + e_end
    return BangErrorReport(interior, e_start, e_end, total, len(interior))
