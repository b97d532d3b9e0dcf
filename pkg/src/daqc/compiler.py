"""Synthesis of target spin-Hamiltonian evolutions from a fixed resource.

The resource is a homogeneous all-to-all two-body Ising interaction with
coupling ``g``; digital resources are single-qubit rotations.  Provided here:

* pair-index vectorization and the coupling sign matrix,
* arbitrary inhomogeneous Ising synthesis (one linear solve, exact since all
  terms commute), with negative-time repair,
* the Trotterized XZ-model protocol built from four rotated Ising rounds,
* four-body nearest-neighbour Hamiltonian building blocks and the block-count
  bookkeeping for general M-body targets,
* decomposition of the complete coupling graph into nearest-neighbour chains.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import PauliHamiltonian
from .errors import (
    IndexRangeError,
    ParamError,
    SingularPhaseSystem,
    SingularSignMatrix,
    TooFewQubits,
    UnsupportedSize,
)
from .schedule import AnalogBlock, Schedule, x_layer, layer_from_involutions

LINSOLVE_RTOL = 1e-10


# ---------------------------------------------------------------------------
# pair vectorization (1-based, matching the analytic index formulas)


def vectorize_pair(n: int, m: int, N: int) -> int:
    """Map an ordered qubit pair ``1 <= n < m <= N`` to ``alpha`` in 1..N(N-1)/2."""
    if not (1 <= n < m <= N):
        raise IndexRangeError(f"need 1 <= n < m <= N, got ({n}, {m}) with N={N}")
    return N * (n - 1) - n * (n + 1) // 2 + m


def unvectorize_pair(alpha: int, N: int) -> tuple[int, int]:
    """Inverse of :func:`vectorize_pair`.

    Solves the triangular row boundaries exactly; the closed-form floor
    expression breaks down for alpha in the later rows once N > 4.
    """
    K = N * (N - 1) // 2
    if not (1 <= alpha <= K):
        raise IndexRangeError(f"alpha={alpha} outside 1..{K} for N={N}")
    n = 1
    while vectorize_pair(n, N, N) < alpha:
        n += 1
    m = alpha - (N * (n - 1) - n * (n + 1) // 2)
    return n, m


def pair_count(N: int) -> int:
    return N * (N - 1) // 2


# ---------------------------------------------------------------------------
# coupling containers


@dataclass
class CouplingMatrix:
    """Symmetric two-body couplings ``g_jk`` over ``n`` qubits (0-based pairs)."""

    n: int
    couplings: dict = field(default_factory=dict)  # (j, k) with j < k -> float

    def __post_init__(self):
        clean = {}
        for (j, k), v in self.couplings.items():
            if not (0 <= j < k < self.n):
                raise IndexRangeError(f"pair ({j}, {k}) out of range for n={self.n}")
            clean[(j, k)] = float(v)
        self.couplings = clean

    def get(self, j: int, k: int) -> float:
        if j > k:
            j, k = k, j
        return self.couplings.get((j, k), 0.0)

    def set(self, j: int, k: int, value: float):
        if j > k:
            j, k = k, j
        if not (0 <= j < k < self.n):
            raise IndexRangeError(f"pair ({j}, {k}) out of range for n={self.n}")
        self.couplings[(j, k)] = float(value)

    @classmethod
    def homogeneous(cls, n: int, g: float) -> "CouplingMatrix":
        return cls(n, {(j, k): g for j in range(n) for k in range(j + 1, n)})

    @classmethod
    def random(cls, n: int, rng, scale: float = 1.0) -> "CouplingMatrix":
        return cls(
            n,
            {(j, k): scale * rng.uniform(-1, 1) for j in range(n) for k in range(j + 1, n)},
        )

    def vector(self) -> np.ndarray:
        """Couplings in alpha order (1-based alpha at index alpha-1)."""
        v = np.zeros(pair_count(self.n))
        for (j, k), g in self.couplings.items():
            v[vectorize_pair(j + 1, k + 1, self.n) - 1] = g
        return v

    def hamiltonian(self) -> PauliHamiltonian:
        return PauliHamiltonian.from_sites(
            self.n, [(g, {j: "Z", k: "Z"}) for (j, k), g in self.couplings.items()]
        )


def resource_hamiltonian(n: int, g: float) -> PauliHamiltonian:
    """Homogeneous all-to-all Ising interaction ``g * sum_{j<k} Z_j Z_k``."""
    return CouplingMatrix.homogeneous(n, g).hamiltonian()


# ---------------------------------------------------------------------------
# sign matrix


def sign_matrix(N: int) -> np.ndarray:
    """K x K matrix of conjugation signs, K = N(N-1)/2.

    Entry (alpha, beta) is the sign picked up by the ZZ term on pair beta
    when the analog block is conjugated by X rotations on pair alpha:
    ``(-1)**(overlap count of the two pairs)``.
    """
    if N < 3:
        raise UnsupportedSize("sign matrix needs N >= 3")
    K = pair_count(N)
    pairs = [unvectorize_pair(a, N) for a in range(1, K + 1)]
    m = np.empty((K, K))
    for a, (n1, m1) in enumerate(pairs):
        for b, (j, k) in enumerate(pairs):
            overlap = (n1 == j) + (n1 == k) + (m1 == j) + (m1 == k)
            m[a, b] = (-1.0) ** overlap
    return m


def sign_matrix_spectrum(N: int) -> dict:
    """Closed-form eigenvalues and multiplicities of the sign matrix."""
    K = pair_count(N)
    return {
        "lambda1": (N * (N - 9) / 2 + 8, 1),
        "lambda2": (2.0 * (4 - N), N - 1),
        "lambda3": (4.0, K - N),
    }


# ---------------------------------------------------------------------------
# negative-time repair


@dataclass
class NegativeTimeRepair:
    shift: float          # |t_min| added to every block
    extra_block: float    # signed duration of the bare analog block
    wrapped_periods: int = 0  # full resource periods added to realise it forward


def fix_negative_times(times, lam1: float) -> tuple[np.ndarray, float]:
    """Shift all block durations by ``|t_min|`` and compensate with one bare block.

    The all-ones vector is an eigenvector of the sign matrix with eigenvalue
    ``lam1``, so a uniform shift changes every synthesised coupling by the
    same amount; a single unconjugated analog block of signed duration
    ``-lam1 * |t_min|`` undoes it.  Returns the shifted times (minimum
    exactly 0) and that signed extra duration; 0 when nothing is negative.
    """
    if lam1 == 0:
        raise ParamError("lam1 must be nonzero")
    t = np.asarray(times, dtype=float)
    tmin = t.min() if t.size else 0.0
    if tmin >= 0:
        return t.copy(), 0.0
    shifted = t - tmin
    shifted[np.argmin(t)] = 0.0  # exact zero at the minimum
    return shifted, float(-lam1 * abs(tmin))


# ---------------------------------------------------------------------------
# Ising synthesis


@dataclass
class CompilationResult:
    schedule: Schedule
    analog_times: np.ndarray
    negative_time_repair: NegativeTimeRepair | None
    synthesis_residual: float
    diagnostics: dict = field(default_factory=dict)


def _resource_period(g: float) -> float:
    # the homogeneous ATA Ising spectrum is an integer multiple of g
    return 2.0 * np.pi / g


def compile_ising(
    target: CouplingMatrix,
    t_f: float,
    g: float,
    sign: int = -1,
    dt: float = 1e-2,
    mode: str = "sdaqc",
) -> CompilationResult:
    """Synthesise ``exp(sign * i * t_f * H_target)`` from the homogeneous resource.

    ``H_target`` is the inhomogeneous Ising sum of the target couplings.  The
    analog-block durations solve the sign-matrix linear system; negative
    solutions are repaired with a uniform shift plus one bare block, and a
    bare block that would run backwards is wrapped by full resource periods
    (the homogeneous spectrum is commensurate).  All terms commute, so the
    synthesis is exact rather than Trotter-limited.
    """
    N = target.n
    if N < 3:
        raise UnsupportedSize("Ising synthesis needs N >= 3")
    if N == 4:
        raise SingularSignMatrix(
            "the sign matrix is singular for N = 4; all-to-all targets need a "
            "modified single-qubit rotation set at this size"
        )
    if g <= 0 or t_f <= 0:
        raise ParamError("t_f and g must be positive")
    if sign not in (-1, 1):
        raise ParamError("sign must be +1 or -1")

    m = sign_matrix(N)
    lam1 = N * (N - 9) / 2 + 8
    c = (-sign) * (t_f / g) * target.vector()
    times = np.linalg.solve(m, c)
    residual = np.linalg.norm(m @ times - c)
    if residual > LINSOLVE_RTOL * max(1.0, np.linalg.norm(c)):
        raise SingularSignMatrix(f"sign-matrix solve residual {residual:.2e} too large")

    repair = None
    shifted, extra = fix_negative_times(times, lam1)
    if extra != 0.0:
        wrapped = 0
        extra_exec = extra
        if extra < 0:
            period = _resource_period(g)
            wrapped = int(np.ceil(-extra / period))
            extra_exec = extra + wrapped * period
        repair = NegativeTimeRepair(float(-times.min()), extra, wrapped)
    else:
        shifted = times
        extra_exec = 0.0

    items = []
    for alpha0, t_a in enumerate(shifted):
        if t_a <= 1e-15:
            continue
        n1, m1 = unvectorize_pair(alpha0 + 1, N)
        pair = (n1 - 1, m1 - 1)
        items.append(x_layer(pair))
        items.append(AnalogBlock(float(t_a), label=f"pair({pair[0]},{pair[1]})"))
        items.append(x_layer(pair))
    if repair is not None and extra_exec > 1e-15:
        items.append(AnalogBlock(float(extra_exec), label="bare"))

    sched = Schedule(resource_hamiltonian(N, g), items, mode=mode, dt=dt)

    # residual restated as the normalized Frobenius distance between the
    # synthesised and target Hamiltonians (orthonormal Pauli basis)
    synth_residual = float(residual * g / t_f)

    return CompilationResult(
        schedule=sched,
        analog_times=shifted,
        negative_time_repair=repair,
        synthesis_residual=synth_residual,
        diagnostics={
            "lam1": lam1,
            "block_count": sum(isinstance(i, AnalogBlock) for i in items),
            "raw_times": times,
            "sign": sign,
        },
    )


def compile_zz_pair(
    n: int, a: int, b: int, phi: float, g: float, dt: float = 1e-8, mode: str = "sdaqc"
) -> list:
    """Schedule items realising ``exp(+i phi Z_a Z_b)`` on an n-qubit resource.

    Strategy by size: a single (wrapped) block at n = 2; the general Ising
    synthesis of the one-pair target for invertible sizes; and at n = 4,
    where the sign matrix is singular, a four-block echo conjugated by X on
    ``a``, ``b``, and both, with backward blocks wrapped by full resource
    periods.  Forward-only durations throughout.
    """
    if not (0 <= a < n and 0 <= b < n) or a == b:
        raise IndexRangeError(f"invalid pair ({a}, {b}) for n={n}")
    if a > b:
        a, b = b, a
    period = _resource_period(g)

    def wrap(t):
        return t % period if t % period >= 0 else t % period + period

    if n == 2:
        return [AnalogBlock(wrap(-phi / g), label="pair(0,1)")]
    if n == 4:
        u_plain = wrap(-phi / (4 * g))
        u_conj = wrap(phi / (4 * g))
        items = [AnalogBlock(u_plain, label="echo bare")]
        for qubits in ([a], [b]):
            items.append(x_layer(qubits))
            items.append(AnalogBlock(u_conj, label="echo"))
            items.append(x_layer(qubits))
        items.append(x_layer([a, b]))
        items.append(AnalogBlock(u_plain, label="echo pair"))
        items.append(x_layer([a, b]))
        return items
    target = CouplingMatrix(n, {(a, b): phi})
    return compile_ising(target, 1.0, g, sign=+1, dt=dt, mode=mode).schedule.items


def circuit_to_schedule(circ, g: float, dt: float = 1e-8, mode: str = "sdaqc") -> Schedule:
    """Translate a gate circuit into a schedule over the all-to-all resource.

    Single-qubit gates become digital layers.  Each CNOT becomes a Hadamard
    sandwich around a controlled-Z, whose ZZ phase is synthesised from the
    resource; controlled-phase and fixed-ZZ gates synthesise their phases the
    same way.  Controlled-unitary payload gates have no schedule form here.
    """
    from .circuits import sqg_generator, SQG_KINDS
    from .schedule import DigitalLayer, hadamard_layer, phase_layer

    n = circ.n
    items = []

    def zz_with_local_phases(a, b, quarter):
        # exp(i q (1 - Z_a - Z_b + Z_a Z_b)) split into a phase layer + blocks
        items.append(phase_layer({a: quarter, b: quarter}, phase=quarter))
        items.extend(compile_zz_pair(n, a, b, quarter, g, dt=dt, mode=mode))

    for gate in circ.gates:
        if gate.kind in SQG_KINDS:
            q = gate.qubits[0]
            h = sqg_generator(gate)
            w, v = np.linalg.eigh(h)
            u = (v * np.exp(-1j * w)) @ v.conj().T
            items.append(DigitalLayer({q: u}, {q: h}, 0.0, f"{gate.kind}@q{q}"))
        elif gate.kind == "cnot":
            c, t = gate.qubits
            items.append(hadamard_layer([t]))
            zz_with_local_phases(c, t, np.pi / 4)
            items.append(hadamard_layer([t]))
        elif gate.kind == "cp":
            zz_with_local_phases(gate.qubits[0], gate.qubits[1], gate.param / 4)
        elif gate.kind == "czz":
            items.extend(
                compile_zz_pair(n, gate.qubits[0], gate.qubits[1], gate.param, g, dt=dt, mode=mode)
            )
        else:
            raise ParamError(f"gate kind {gate.kind!r} has no schedule translation")
    return Schedule(resource_hamiltonian(n, g), items, mode=mode, dt=dt)


# ---------------------------------------------------------------------------
# XZ model


XZ_CHANNELS = ("xx", "xz", "zx", "zz")


def xz_default_phases(N: int) -> np.ndarray:
    """Rotation phases ``theta[s-1][w-1] = s*pi*w / (2*(w+1))`` for s=1..4, w=1..N."""
    w = np.arange(1, N + 1, dtype=float)
    return np.array([s * np.pi * w / (2.0 * (w + 1.0)) for s in (1, 2, 3, 4)])


@dataclass
class XZDecomposition:
    phases: np.ndarray                 # shape (4, N)
    round_couplings: list              # four CouplingMatrix, one per rotated round


def decompose_xz(targets: dict, N: int, phases: np.ndarray | None = None,
                 cond_cap: float = 1e12) -> XZDecomposition:
    """Split XX/XZ/ZX/ZZ pair couplings into four rotated Ising rounds.

    ``targets[(j, k)]`` maps 0-based pairs to ``{"xx": .., "xz": .., "zx": ..,
    "zz": ..}``.  For each pair the 4x4 system in the round couplings is
    solved; the default phases keep it well conditioned for every pair.
    """
    th = xz_default_phases(N) if phases is None else np.asarray(phases, dtype=float)
    if th.shape != (4, N):
        raise ParamError(f"phases must have shape (4, {N})")
    sin, cos = np.sin(th), np.cos(th)

    rounds = [CouplingMatrix(N) for _ in range(4)]
    for (j, k), channels in targets.items():
        if not (0 <= j < k < N):
            raise IndexRangeError(f"pair ({j}, {k}) out of range")
        a = np.empty((4, 4))
        for row, (mu, nu) in enumerate([("x", "x"), ("x", "z"), ("z", "x"), ("z", "z")]):
            for s in range(4):
                fj = sin[s, j] if mu == "x" else cos[s, j]
                fk = sin[s, k] if nu == "x" else cos[s, k]
                a[row, s] = fj * fk
        if np.linalg.cond(a) > cond_cap:
            raise SingularPhaseSystem(
                f"phase system for pair ({j}, {k}) is ill conditioned"
            )
        rhs = np.array([float(channels.get(ch, 0.0)) for ch in XZ_CHANNELS])
        sol = np.linalg.solve(a, rhs)
        for s in range(4):
            if abs(sol[s]) > 1e-15:
                rounds[s].set(j, k, sol[s])
    return XZDecomposition(th, rounds)


def xz_round_rotation_gates(phases_row: np.ndarray) -> dict[int, np.ndarray]:
    """Per-qubit involution ``cos(theta/2) Z + sin(theta/2) X`` for one round."""
    gates = {}
    for q, theta in enumerate(phases_row):
        gates[q] = np.cos(theta / 2.0) * np.array([[1, 0], [0, -1]], dtype=complex) + np.sin(
            theta / 2.0
        ) * np.array([[0, 1], [1, 0]], dtype=complex)
    return gates


def xz_reconstructed_hamiltonian(dec: XZDecomposition, N: int) -> PauliHamiltonian:
    """Sum of the four rotated round Hamiltonians, as an explicit Pauli sum."""
    from .core import conjugate_by_layer

    total = PauliHamiltonian(N)
    for s in range(4):
        h_round = dec.round_couplings[s].hamiltonian()
        total = total + conjugate_by_layer(h_round, xz_round_rotation_gates(dec.phases[s]))
    return total


def xz_target_hamiltonian(targets: dict, N: int) -> PauliHamiltonian:
    site_terms = []
    for (j, k), channels in targets.items():
        for (mu, nu), ch in zip([("X", "X"), ("X", "Z"), ("Z", "X"), ("Z", "Z")], XZ_CHANNELS):
            v = float(channels.get(ch, 0.0))
            if v:
                site_terms.append((v, {j: mu, k: nu}))
    return PauliHamiltonian.from_sites(N, site_terms)


def compile_xz(
    targets: dict,
    t_f: float,
    n_t: int,
    g: float,
    N: int,
    sign: int = -1,
    phases: np.ndarray | None = None,
    dt: float = 1e-2,
    mode: str = "sdaqc",
) -> CompilationResult:
    """First-order Trotter schedule for a general two-body XZ target.

    Each Trotter step runs the four rotated Ising rounds; each round is the
    Ising synthesis of its coupling share, conjugated by the round's
    single-qubit rotations.  The per-step Hamiltonian reconstruction is exact;
    the unitary error is first order in ``1/n_t``.
    """
    if n_t < 1:
        raise ParamError("n_t must be >= 1")
    dec = decompose_xz(targets, N, phases)
    tau = t_f / n_t

    step_items = []
    total_blocks = 0
    for s in range(4):
        round_c = dec.round_couplings[s]
        if not round_c.couplings:
            continue
        gates = xz_round_rotation_gates(dec.phases[s])
        rot = layer_from_involutions(gates, label=f"Rtheta[{s + 1}]")
        if N == 2:
            # single pair: the resource itself is the only coupling
            inner = [AnalogBlock((-sign) * round_c.get(0, 1) * tau / g, label="pair(0,1)")]
            if inner[0].duration < 0:
                inner[0].duration += _resource_period(g) * np.ceil(
                    -inner[0].duration / _resource_period(g)
                )
        else:
            sub = compile_ising(round_c, tau, g, sign=sign, dt=dt, mode=mode)
            inner = sub.schedule.items
        step_items.append(rot)
        step_items.extend(inner)
        step_items.append(rot)
        total_blocks += sum(isinstance(i, AnalogBlock) for i in inner)

    items = []
    for _ in range(n_t):
        items.extend(step_items)

    sched = Schedule(resource_hamiltonian(N, g), items, mode=mode, dt=dt)

    recon = xz_reconstructed_hamiltonian(dec, N)
    target_h = xz_target_hamiltonian(targets, N)
    diff = recon + target_h.scaled(-1.0)
    from .core import frobenius_norm

    return CompilationResult(
        schedule=sched,
        analog_times=np.array([]),
        negative_time_repair=None,
        synthesis_residual=frobenius_norm(diff, normalized=True),
        diagnostics={"trotter_steps": n_t, "blocks_per_step": total_blocks},
    )


# ---------------------------------------------------------------------------
# M-body accounting and four-body NN building blocks


@dataclass
class MBodyBlockCount:
    count: int
    a: float
    b: float
    exact: float
    worked_m4_linear: int | None
    notes: list


def mbody_block_count(M: int, N: int) -> MBodyBlockCount:
    """Analog-block count ``a(M) N + b(M)`` for an M-body nearest-neighbour target.

    ``a(M) = 9/4 (3^(M-1) - 3)`` and ``b(M) = 3^(M-1)/2 (3/2 - M)``.  The
    closed forms do not reproduce the separately stated worked figure
    ``117 N - 306`` at M = 4 and give non-integer values at M = 3; both
    numbers are reported and neither is asserted as ground truth.
    """
    if M < 3:
        raise ParamError("M must be >= 3")
    if N < M:
        raise ParamError("need N >= M")
    a = 9.0 / 4.0 * (3 ** (M - 1) - 3)
    b = 3 ** (M - 1) / 2.0 * (1.5 - M)
    exact = a * N + b
    notes = []
    if abs(a - round(a)) > 1e-12 or abs(b - round(b)) > 1e-12:
        notes.append(f"closed forms are non-integer: a={a}, b={b}")
    worked = 117 * N - 306 if M == 4 else None
    if worked is not None and round(exact) != worked:
        notes.append(
            f"closed-form count {exact} conflicts with the worked linear form {worked}"
        )
    if notes:
        warnings.warn("; ".join(notes), stacklevel=2)
    return MBodyBlockCount(int(round(exact)), a, b, exact, worked, notes)


def mbody_default_phases(N: int, k: int) -> dict[int, float]:
    """Default conjugation angles, 1-based pair start ``w`` -> angle.

    ``w = 1, 2 (mod 4)`` get ``2 pi k / 3`` and ``w = 3, 0 (mod 4)`` get
    ``2 pi k / 5``.
    """
    phases = {}
    for w in range(1, N):
        if w % 4 in (1, 2):
            phases[w] = 2.0 * np.pi * k / 3.0
        else:
            phases[w] = 2.0 * np.pi * k / 5.0
    return phases


def _conjugate_by_xx_rotation(h: PauliHamiltonian, a: int, phi: float) -> PauliHamiltonian:
    """Conjugate a Pauli sum by ``exp(-i phi X_a X_{a+1})`` (0-based ``a``), exactly."""
    from .core import _mul_strings

    n = h.qubit_count
    axes_a = "".join("X" if q in (a, a + 1) else "I" for q in range(n))
    out = PauliHamiltonian(n)
    for coeff, p in h.terms:
        s = p.axes
        ph_ab, s_ab = _mul_strings(s, axes_a)
        ph_ba, s_ba = _mul_strings(axes_a, s)
        if ph_ab == ph_ba and s_ab == s_ba:
            out.add_term(coeff, s)  # commutes
        else:
            out.add_term(coeff * np.cos(2 * phi), s)
            prod = 1j * ph_ab * coeff * np.sin(2 * phi)
            if abs(prod.imag) > 1e-12:
                raise ValueError("conjugation produced a non-Hermitian term")
            out.add_term(prod.real, s_ab)
    return out


def build_mbody_hamiltonian_blocks(
    N: int,
    couplings_1=None,
    couplings_2=None,
    phases: dict[int, float] | None = None,
    k: int = 1,
) -> tuple[PauliHamiltonian, PauliHamiltonian]:
    """Four-body NN building blocks from conjugated nearest-neighbour Ising sums.

    ``H1`` is the chain ``sum_j g1_j Z_j Z_{j+1}`` conjugated by XX rotations
    on the even-start pairs (2,3), (4,5), ...; ``H2`` the second chain
    conjugated on the odd-start pairs (1,2), (3,4), ...  Together they carry
    every two- and three-site consecutive support and complementary four-site
    supports up to ``X Y Y X``.
    """
    if N < 4:
        raise TooFewQubits("four-body building blocks need N >= 4")
    g1 = list(couplings_1) if couplings_1 is not None else [1.0] * (N - 1)
    g2 = list(couplings_2) if couplings_2 is not None else [1.0] * (N - 1)
    if len(g1) != N - 1 or len(g2) != N - 1:
        raise ParamError("need N-1 nearest-neighbour couplings per chain")
    ph = phases if phases is not None else mbody_default_phases(N, k)

    def chain(gs):
        return PauliHamiltonian.from_sites(
            N, [(gs[j], {j: "Z", j + 1: "Z"}) for j in range(N - 1)]
        )

    h1 = chain(g1)
    for w in range(2, N, 2):  # 1-based even pair starts
        h1 = _conjugate_by_xx_rotation(h1, w - 1, ph.get(w, 0.0))
    h2 = chain(g2)
    for w in range(1, N, 2):  # 1-based odd pair starts
        h2 = _conjugate_by_xx_rotation(h2, w - 1, ph.get(w, 0.0))
    return h1, h2


# ---------------------------------------------------------------------------
# connectivity enhancement


def path_decomposition(N: int) -> list[list[int]]:
    """Split the complete graph on ``N`` vertices into N/2 edge-disjoint
    Hamiltonian paths (0-based vertex orderings).

    The first path zig-zags: forward one vertex, two back, three forward, and
    so on around the circle; the others are rotations of it.  Even ``N``
    only.
    """
    if N < 4 or N % 2:
        raise UnsupportedSize("path decomposition needs even N >= 4")
    base = [0]
    step = 1
    sign = 1
    v = 0
    for _ in range(N - 1):
        v = (v + sign * step) % N
        base.append(v)
        step += 1
        sign = -sign
    return [[(v + r) % N for v in base] for r in range(N // 2)]
