"""MAX-CUT QAOA in ideal, stepwise, and banged digital-analog form.

The ansatz alternates the cut-clause Hamiltonian ``sum (I - ZZ)/2`` with the
transverse driver.  The digital-analog arms realise the clause phase by
steering a homogeneous all-to-all resource: the linear-solve durations are
interleaved with paired X pulses, and in the banged variant both the pulses
(duration ``pi / alpha``) and the driver segment (duration ``beta / alpha``)
run on top of the always-on resource.  Large speed ratios ``alpha`` recover
the ideal circuit; small ones trade accuracy for hardware simplicity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .compiler import (
    CouplingMatrix,
    fix_negative_times,
    pair_count,
    resource_hamiltonian,
    sign_matrix,
    unvectorize_pair,
)
from .core import QuantumState
from .errors import ParamError, UnsupportedSize
from .noise import NoiseModel, run_trajectories
from .schedule import AnalogBlock, DigitalLayer, Schedule, x_layer


@dataclass
class QAOAProblem:
    edges: list
    n: int
    p: int = 1
    mode: str = "ideal"  # ideal | sda | bda
    alpha: float | None = None

    def __post_init__(self):
        self.edges = [tuple(sorted(e)) for e in self.edges]
        for a, b in self.edges:
            if not (0 <= a < b < self.n):
                raise ParamError(f"edge ({a}, {b}) out of range")
        if self.p < 1:
            raise ParamError("need p >= 1")
        if self.mode not in ("ideal", "sda", "bda"):
            raise ParamError(f"unknown mode {self.mode!r}")
        if self.mode == "bda":
            if self.alpha is None or self.alpha <= 0:
                raise ParamError("bda mode needs a positive speed ratio alpha")
        if not _connected(self.edges, self.n):
            warnings.warn("problem graph is disconnected", stacklevel=2)


def _connected(edges, n) -> bool:
    if n <= 1:
        return True
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == n


def cut_values(edges, n) -> np.ndarray:
    """Cut size of every bitstring: the diagonal of the clause Hamiltonian."""
    vals = np.zeros(2**n)
    bits = np.arange(2**n)
    for a, b in edges:
        ba = (bits >> (n - 1 - a)) & 1
        bb = (bits >> (n - 1 - b)) & 1
        vals += (ba ^ bb).astype(float)
    return vals


def maxcut_value(edges, n) -> float:
    """Brute-force optimum over all bitstrings."""
    return float(cut_values(edges, n).max())


# ---------------------------------------------------------------------------
# ansatz evaluation


class _AnsatzEngine:
    """Fast statevector evaluation with per-instance precomputation."""

    def __init__(self, prob: QAOAProblem):
        self.prob = prob
        n = prob.n
        self.n = n
        self.dim = 2**n
        self.hp_diag = cut_values(prob.edges, n)
        self.maxcut = self.hp_diag.max()
        self.plus = np.full(self.dim, 2 ** (-n / 2), dtype=complex)

        if prob.mode == "bda":
            self._prepare_bda()

    # -- ideal / stepwise -------------------------------------------------

    def _driver_1q(self, beta: float) -> np.ndarray:
        # exp(-i beta X) applied per qubit realises exp(-i beta H_D)
        c, s = np.cos(beta), np.sin(beta)
        return np.array([[c, -1j * s], [-1j * s, c]])

    def _apply_driver(self, psi: np.ndarray, beta: float) -> np.ndarray:
        u = self._driver_1q(beta)
        psi = psi.reshape([2] * self.n)
        for q in range(self.n):
            psi = np.moveaxis(np.tensordot(u, np.moveaxis(psi, q, 0), axes=1), 0, q)
        return psi.reshape(-1)

    def _ideal_state(self, gammas, betas) -> np.ndarray:
        # the clause stage e^{+i gamma H_P} coincides (up to phase) with free
        # evolution under the edge ZZ sum, which is what the resource runs
        psi = self.plus.copy()
        for g, b in zip(gammas, betas):
            psi = np.exp(1j * g * self.hp_diag) * psi
            psi = self._apply_driver(psi, b)
        return psi

    # -- banged ------------------------------------------------------------

    def _prepare_bda(self):
        prob = self.prob
        n, alpha = self.n, prob.alpha
        if n == 4:
            raise UnsupportedSize("the all-to-all steering matrix is singular at n = 4")
        self.pulse_dt = np.pi / alpha
        m = sign_matrix(n)
        lam1 = n * (n - 9) / 2 + 8
        target = CouplingMatrix(n, {e: 0.5 for e in prob.edges})
        unit = np.linalg.solve(m, target.vector())  # durations per unit gamma
        shifted_unit, extra_unit = fix_negative_times(unit, lam1)
        if extra_unit < 0:
            raise UnsupportedSize(
                "steering repair needs a backward bare block at this size"
            )
        self.block_pairs = []
        self.block_units = []
        for a0, t_u in enumerate(shifted_unit):
            if t_u > 1e-15:
                j, k = unvectorize_pair(a0 + 1, n)
                self.block_pairs.append((j - 1, k - 1))
                self.block_units.append(t_u)
        self.extra_unit = extra_unit

        # diagonal of the homogeneous resource
        bits = np.arange(self.dim)
        hint = np.zeros(self.dim)
        for j in range(n):
            for k in range(j + 1, n):
                zj = 1.0 - 2.0 * ((bits >> (n - 1 - j)) & 1)
                zk = 1.0 - 2.0 * ((bits >> (n - 1 - k)) & 1)
                hint += zj * zk
        self.hint_diag = hint

        # pulse unitaries: resource on while both pair qubits take a pi pulse
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        self.pulse_ops = {}
        hint_dense = np.diag(hint.astype(complex))
        for pair in sorted(set(self.block_pairs)):
            gen = self.pulse_dt * hint_dense.copy()
            for q in pair:
                gen += (np.pi / 2) * _embed_x(q, n)
            w, v = np.linalg.eigh(gen)
            self.pulse_ops[pair] = (v * np.exp(-1j * w)) @ v.conj().T

        # driver generator: resource + alpha * sum X
        drv = hint_dense.copy()
        for q in range(n):
            drv += alpha * _embed_x(q, n)
        self.drv_w, self.drv_v = np.linalg.eigh(drv)

    def _bda_layer_items(self, gamma: float):
        """(kind, payload) ops for one steering stage at angle gamma."""
        ops = []
        for pair, unit in zip(self.block_pairs, self.block_units):
            ops.append(("pulse", pair))
            ops.append(("block", gamma * unit))
            ops.append(("pulse", pair))
        if self.extra_unit > 0:
            ops.append(("block", gamma * self.extra_unit))
        return ops

    def _bda_state(self, gammas, betas) -> np.ndarray:
        psi = self.plus.copy()
        half = self.pulse_dt / 2
        for g, b in zip(gammas, betas):
            ops = self._bda_layer_items(g)
            # symmetric absorption: each pulse eats half its duration from
            # the analog neighbours, boundary pulses from their only one
            durations = [t for kind, t in ops if kind == "block"]
            claims = [0.0] * len(durations)
            idx = -1
            for i, (kind, _) in enumerate(ops):
                if kind == "block":
                    idx += 1
                    continue
                before = idx if idx >= 0 else None
                after = idx + 1 if idx + 1 < len(durations) else None
                if before is not None and after is not None:
                    claims[before] += half
                    claims[after] += half
                elif after is not None:
                    claims[after] += self.pulse_dt
                elif before is not None:
                    claims[before] += self.pulse_dt
            durs = [max(d - c, 0.0) for d, c in zip(durations, claims)]
            idx = -1
            for kind, payload in ops:
                if kind == "pulse":
                    psi = self.pulse_ops[payload] @ psi
                else:
                    idx += 1
                    psi = np.exp(-1j * durs[idx] * self.hint_diag) * psi
            # driver segment: banged transverse field for time beta / alpha
            phase = np.exp(-1j * (b / self.prob.alpha) * self.drv_w)
            psi = self.drv_v @ (phase * (self.drv_v.conj().T @ psi))
        return psi

    # -- public ------------------------------------------------------------

    def state(self, gammas, betas) -> np.ndarray:
        if self.prob.mode == "bda":
            return self._bda_state(gammas, betas)
        return self._ideal_state(gammas, betas)

    def ratio(self, gammas, betas) -> float:
        psi = self.state(gammas, betas)
        expect = float(np.real(np.vdot(psi, self.hp_diag * psi)))
        return expect / self.maxcut


def _embed_x(q: int, n: int) -> np.ndarray:
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    m = np.eye(1, dtype=complex)
    for i in range(n):
        m = np.kron(m, x if i == q else np.eye(2, dtype=complex))
    return m


def build_qaoa_schedule(prob: QAOAProblem, gammas, betas, dt: float | None = None,
                        g: float = 1.0) -> Schedule:
    """Explicit schedule for the digital-analog ansatz (noise-capable form).

    In bda mode the pulse and driver layers carry their physical durations
    ``pi/alpha`` and ``beta/alpha``; in sda mode the same items run with the
    resource switched off during layers.
    """
    if prob.mode == "ideal":
        raise ParamError("the ideal ansatz has no schedule form")
    engine = _AnsatzEngine(
        prob if prob.mode == "bda" else QAOAProblem(prob.edges, prob.n, prob.p, "bda", 1000.0)
    )
    alpha = prob.alpha if prob.alpha else 1000.0
    pulse_dt = np.pi / alpha if prob.mode == "bda" else (dt or 1e-8)
    mode = "bdaqc" if prob.mode == "bda" else "sdaqc"
    items = []
    x_gen = 0.5 * np.pi * np.array([[0, 1], [1, 0]], dtype=complex)
    for gamma, beta in zip(gammas, betas):
        for pair, unit in zip(engine.block_pairs, engine.block_units):
            items.append(x_layer(pair))
            items.append(AnalogBlock(gamma * unit, label=f"pair{pair}"))
            items.append(x_layer(pair))
        if engine.extra_unit > 0:
            items.append(AnalogBlock(gamma * engine.extra_unit, label="bare"))
        drv_gates = {}
        drv_gens = {}
        for q in range(prob.n):
            c, s = np.cos(beta), np.sin(beta)
            drv_gates[q] = np.array([[c, -1j * s], [-1j * s, c]])
            drv_gens[q] = beta * np.array([[0, 1], [1, 0]], dtype=complex)
        items.append(
            DigitalLayer(drv_gates, drv_gens, 0.0, "driver",
                         duration=beta / alpha, absorbs=False)
        )
    sched = Schedule(resource_hamiltonian(prob.n, g), items, mode=mode, dt=pulse_dt)
    return sched


# ---------------------------------------------------------------------------
# variational optimization


@dataclass
class QAOAResult:
    best_gammas: np.ndarray
    best_betas: np.ndarray
    best_ratio: float
    start_ratios: list
    evaluations: int
    mode: str


def qaoa_run(
    prob: QAOAProblem,
    noise: NoiseModel | None = None,
    starts: int = 20,
    maxfev: int = 2000,
    seed: int = 0,
    warm_starts=None,
    shots: int = 200,
) -> QAOAResult:
    """Optimize the ansatz with a derivative-free simplex over multi-starts.

    Start points are drawn uniformly from ``[0, pi]^p x [0, 2 pi]^p``; any
    ``warm_starts`` (full parameter vectors) are prepended.  The best point
    is selected deterministically by (ratio, start index).  With a noise
    model the objective is the trajectory-averaged expectation of the clause
    Hamiltonian over the explicit schedule.
    """
    engine = _AnsatzEngine(prob)
    p = prob.p
    evals = 0

    if noise is None or noise.is_trivial():
        def objective(params):
            nonlocal evals
            evals += 1
            return -engine.ratio(params[:p], params[p:])
    else:
        if prob.mode == "ideal":
            raise ParamError("noisy evaluation needs a digital-analog mode")

        def objective(params):
            nonlocal evals
            evals += 1
            sched = build_qaoa_schedule(prob, params[:p], params[p:])
            run = run_trajectories(sched, noise, shots=shots, seed=seed,
                                   initial=QuantumState.statevector(engine.plus))
            expect = float(np.real(np.trace(run.result.data @ np.diag(engine.hp_diag))))
            return -expect / engine.maxcut

    rng = np.random.default_rng(seed)
    points = [np.asarray(w, dtype=float) for w in (warm_starts or [])]
    while len(points) < starts:
        points.append(
            np.concatenate(
                [rng.uniform(0, np.pi, size=p), rng.uniform(0, 2 * np.pi, size=p)]
            )
        )

    best = None
    ratios = []
    for idx, x0 in enumerate(points[:starts]):
        res = scipy.optimize.minimize(
            objective, x0, method="Nelder-Mead",
            options={"maxfev": maxfev, "xatol": 1e-4, "fatol": 1e-7},
        )
        ratios.append(-res.fun)
        if best is None or -res.fun > best[0]:
            best = (-res.fun, idx, res.x)
    ratio, _, x = best
    return QAOAResult(x[:p].copy(), x[p:].copy(), float(ratio), ratios, evals, prob.mode)
