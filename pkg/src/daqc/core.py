"""Dense complex linear algebra for N-qubit systems.

Pauli strings and weighted Pauli sums, exact propagators, quantum states,
and the figures of merit (fidelity, Frobenius / spectral norms) used by the
compiler and the simulators.

Conventions, fixed once for the whole package:

* qubit 1 is the leftmost tensor factor (most significant bit),
* the canonical propagator is ``exp(-i H t)``; entry points that need the
  opposite sign take an explicit ``sign`` argument,
* validity checks at 1e-10, unitary/equivalence checks at 1e-9, iterative
  norms at 1e-8.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    DimensionError,
    InvalidHamiltonian,
    RequiresDensityMatrix,
)

ATOL_STATE = 1e-10
ATOL_UNITARY = 1e-9
RTOL_NORM = 1e-8

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit Pauli products: _PAULI_MUL[a][b] = (phase, axis) with a.b = phase * axis
_PAULI_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis, e.g. ``"XZI"``.

    ``axes[0]`` acts on qubit 1 (leftmost tensor factor).
    """

    axes: str

    def __post_init__(self):
        if not self.axes or any(c not in "IXYZ" for c in self.axes):
            raise ValueError(f"invalid Pauli string {self.axes!r}")

    @property
    def n(self) -> int:
        return len(self.axes)

    def matrix(self) -> np.ndarray:
        m = PAULI_1Q[self.axes[0]]
        for c in self.axes[1:]:
            m = np.kron(m, PAULI_1Q[c])
        return m

    def weight(self) -> int:
        return sum(c != "I" for c in self.axes)

    def __str__(self):
        return self.axes


def pauli_matrix(p: PauliString | str) -> np.ndarray:
    """Dense 2^N matrix of a Pauli string (Kronecker product, qubit 1 leftmost)."""
    if isinstance(p, str):
        p = PauliString(p)
    return p.matrix()


def _mul_strings(a: str, b: str) -> tuple[complex, str]:
    phase = 1 + 0j
    out = []
    for ca, cb in zip(a, b):
        ph, ax = _PAULI_MUL[(ca, cb)]
        phase *= ph
        out.append(ax)
    return phase, "".join(out)


class PauliHamiltonian:
    """Weighted sum of Pauli strings with real coefficients (Hermitian)."""

    def __init__(self, qubit_count: int, terms=None):
        self.qubit_count = int(qubit_count)
        self._terms: dict[str, float] = {}
        for coeff, string in terms or []:
            self.add_term(coeff, string)

    @classmethod
    def from_sites(cls, qubit_count: int, site_terms) -> "PauliHamiltonian":
        """Build from ``[(coeff, {qubit: axis, ...}), ...]`` with 0-based qubits."""
        h = cls(qubit_count)
        for coeff, sites in site_terms:
            axes = ["I"] * qubit_count
            for q, ax in sites.items():
                if not 0 <= q < qubit_count:
                    raise DimensionError(f"qubit {q} out of range for {qubit_count} qubits")
                axes[q] = ax
            h.add_term(coeff, "".join(axes))
        return h

    def add_term(self, coeff: float, string: PauliString | str):
        s = string.axes if isinstance(string, PauliString) else str(string)
        if len(s) != self.qubit_count:
            raise DimensionError(
                f"term {s!r} has {len(s)} sites, expected {self.qubit_count}"
            )
        PauliString(s)  # validate characters
        c = self._terms.get(s, 0.0) + float(coeff)
        if abs(c) < 1e-15:
            self._terms.pop(s, None)
        else:
            self._terms[s] = c

    @property
    def terms(self) -> list[tuple[float, PauliString]]:
        return [(c, PauliString(s)) for s, c in sorted(self._terms.items())]

    @property
    def dim(self) -> int:
        return 2**self.qubit_count

    def coefficient(self, string: str) -> float:
        return self._terms.get(string, 0.0)

    def is_diagonal(self) -> bool:
        return all(set(s) <= {"I", "Z"} for s in self._terms)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for s, c in self._terms.items():
            m += c * PauliString(s).matrix()
        return m

    def diagonal(self) -> np.ndarray:
        """Diagonal of the matrix form; exact when ``is_diagonal()``."""
        d = np.zeros(self.dim)
        for s, c in self._terms.items():
            v = np.ones(1)
            for ax in s:
                v = np.kron(v, np.array([1.0, -1.0]) if ax == "Z" else np.ones(2))
            d += c * v
        return d

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-free action on a 2^N statevector."""
        n = self.qubit_count
        psi = np.asarray(vec, dtype=complex).reshape([2] * n)
        out = np.zeros_like(psi)
        for s, c in self._terms.items():
            term = psi
            for q, ax in enumerate(s):
                if ax == "I":
                    continue
                term = np.moveaxis(term, q, 0)
                if ax == "X":
                    term = term[::-1]
                elif ax == "Y":
                    term = term[::-1] * np.array([-1j, 1j]).reshape([2] + [1] * (n - 1))
                else:  # Z
                    term = term * np.array([1, -1]).reshape([2] + [1] * (n - 1))
                term = np.moveaxis(term, 0, q)
            out = out + c * term
        return out.reshape(-1)

    def __add__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        if other.qubit_count != self.qubit_count:
            raise DimensionError("qubit counts differ")
        h = PauliHamiltonian(self.qubit_count)
        for s, c in self._terms.items():
            h.add_term(c, s)
        for s, c in other._terms.items():
            h.add_term(c, s)
        return h

    def scaled(self, factor: float) -> "PauliHamiltonian":
        h = PauliHamiltonian(self.qubit_count)
        for s, c in self._terms.items():
            h.add_term(factor * c, s)
        return h

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        parts = " + ".join(f"{c:+g}*{s}" for s, c in sorted(self._terms.items()))
        return f"PauliHamiltonian({self.qubit_count}, {parts or '0'})"


def conjugate_by_layer(h: PauliHamiltonian, gates: dict[int, np.ndarray]) -> PauliHamiltonian:
    """Conjugate a Pauli sum by a layer of single-qubit unitaries: ``V^dag H V``.

    The result is expanded back into Pauli-sum form.  Hermiticity is
    preserved; Clifford layers keep single-string terms with unchanged
    coefficient magnitudes.
    """
    from .errors import InvalidLayer

    n = h.qubit_count
    # per-site map axis -> [(coeff, axis')] from v^dag sigma v expanded in Paulis
    site_maps: dict[int, dict[str, list[tuple[float, str]]]] = {}
    for q, v in gates.items():
        v = np.asarray(v, dtype=complex)
        if v.shape != (2, 2) or np.max(np.abs(v.conj().T @ v - np.eye(2))) > 1e-9:
            raise InvalidLayer(f"gate on qubit {q} is not a 2x2 unitary")
        table = {}
        for ax in "XYZ":
            conj = v.conj().T @ PAULI_1Q[ax] @ v
            entries = []
            for bx in "IXYZ":
                c = 0.5 * np.trace(PAULI_1Q[bx].conj().T @ conj)
                if abs(c.imag) > 1e-12:
                    raise InvalidLayer("conjugation produced a non-Hermitian component")
                if abs(c.real) > 1e-12:
                    entries.append((float(c.real), bx))
            table[ax] = entries
        table["I"] = [(1.0, "I")]
        site_maps[q] = table

    out = PauliHamiltonian(n)
    for coeff, p in h.terms:
        expansion = [(coeff, [])]
        for q, ax in enumerate(p.axes):
            table = site_maps.get(q)
            if table is None or ax == "I":
                expansion = [(c, axes + [ax]) for c, axes in expansion]
            else:
                expansion = [
                    (c * c2, axes + [bx])
                    for c, axes in expansion
                    for c2, bx in table[ax]
                ]
        for c, axes in expansion:
            if abs(c) > 1e-14:
                out.add_term(c, "".join(axes))
    return out


def commutator_i(h1: PauliHamiltonian, h2: PauliHamiltonian) -> PauliHamiltonian:
    """Hermitian commutator ``i[H1, H2]`` as an explicit Pauli sum.

    ``[H1, H2]`` is anti-Hermitian for Hermitian inputs, so multiplying by i
    keeps coefficients real and the operator norm unchanged.
    """
    if h1.qubit_count != h2.qubit_count:
        raise DimensionError("qubit counts differ")
    acc: dict[str, complex] = {}
    for s1, c1 in h1._terms.items():
        for s2, c2 in h2._terms.items():
            ph12, s12 = _mul_strings(s1, s2)
            ph21, s21 = _mul_strings(s2, s1)
            if s12 == s21 and ph12 == ph21:
                continue  # commuting pair
            acc[s12] = acc.get(s12, 0) + 1j * c1 * c2 * ph12
            acc[s21] = acc.get(s21, 0) - 1j * c1 * c2 * ph21
    out = PauliHamiltonian(h1.qubit_count)
    for s, c in acc.items():
        if abs(c.imag) > 1e-12 * max(1.0, abs(c.real)):
            raise InvalidHamiltonian("commutator produced a non-real coefficient")
        if abs(c.real) > 1e-14:
            out.add_term(c.real, s)
    return out


# ---------------------------------------------------------------------------
# states


class QuantumState:
    """Dense statevector or density matrix over 2^N dimensions."""

    def __init__(self, kind: str, data: np.ndarray, check: bool = True):
        if kind not in ("statevector", "density_matrix"):
            raise ValueError(f"unknown state kind {kind!r}")
        self.kind = kind
        self.data = np.asarray(data, dtype=complex)
        if check:
            self.validate()

    @classmethod
    def statevector(cls, vec) -> "QuantumState":
        return cls("statevector", np.asarray(vec, dtype=complex).reshape(-1))

    @classmethod
    def density(cls, mat) -> "QuantumState":
        return cls("density_matrix", np.asarray(mat, dtype=complex))

    @classmethod
    def zero(cls, n: int) -> "QuantumState":
        v = np.zeros(2**n, dtype=complex)
        v[0] = 1.0
        return cls.statevector(v)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def qubit_count(self) -> int:
        return int(round(np.log2(self.dim)))

    def validate(self):
        if self.kind == "statevector":
            if self.data.ndim != 1:
                raise DimensionError("statevector must be one-dimensional")
            if abs(np.linalg.norm(self.data) - 1.0) > ATOL_STATE:
                raise ValueError("statevector norm differs from 1")
        else:
            if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
                raise DimensionError("density matrix must be square")
            if np.max(np.abs(self.data - self.data.conj().T)) > ATOL_STATE:
                raise ValueError("density matrix is not Hermitian")
            if abs(np.trace(self.data).real - 1.0) > ATOL_STATE:
                raise ValueError("density matrix trace differs from 1")
            if np.min(np.linalg.eigvalsh(self.data)) < -1e-9:
                raise ValueError("density matrix has a negative eigenvalue")

    def to_density(self) -> "QuantumState":
        if self.kind == "density_matrix":
            return self
        v = self.data
        return QuantumState("density_matrix", np.outer(v, v.conj()), check=False)

    def require_density(self) -> np.ndarray:
        if self.kind != "density_matrix":
            raise RequiresDensityMatrix("operation needs a density matrix")
        return self.data

    def probabilities(self) -> np.ndarray:
        if self.kind == "statevector":
            return np.abs(self.data) ** 2
        return np.real(np.diag(self.data)).clip(min=0.0)


# ---------------------------------------------------------------------------
# propagators and figures of merit


def propagator(h: PauliHamiltonian | np.ndarray, t: float) -> np.ndarray:
    """Unitary ``exp(-i H t)`` from a Hermitian eigendecomposition.

    ``t`` is a dimensionless phase (seconds times rad/s).  Diagonal Pauli sums
    take a fast path that exponentiates the diagonal directly.
    """
    if isinstance(h, PauliHamiltonian):
        if h.is_diagonal():
            return np.diag(np.exp(-1j * t * h.diagonal()))
        m = h.matrix()
    else:
        m = np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidHamiltonian("generator must be a square matrix")
    if np.max(np.abs(m - m.conj().T)) > 1e-9 * max(1.0, np.max(np.abs(m))):
        raise InvalidHamiltonian("generator is not Hermitian")
    w, v = np.linalg.eigh(m)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def hermitian_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """Uhlmann fidelity ``[tr sqrt(sqrt(ra) rb sqrt(ra))]^2``.

    Statevectors are auto-promoted to density matrices; symmetric in its
    arguments; equals 1 iff the states coincide.
    """
    ra = a.to_density().data
    rb = b.to_density().data
    if ra.shape != rb.shape:
        raise DimensionError(f"state dimensions differ: {ra.shape[0]} vs {rb.shape[0]}")
    # tr sqrt(sqrt(ra) rb sqrt(ra)) equals the trace norm of sqrt(ra) sqrt(rb),
    # whose singular values are exactly symmetric in the two states
    prod = hermitian_sqrt(ra) @ hermitian_sqrt(rb)
    f = float(np.sum(np.linalg.svd(prod, compute_uv=False))) ** 2
    return min(max(f, 0.0), 1.0)


def frobenius_norm(m, normalized: bool = False) -> float:
    """``sqrt(tr(A^dag A))``; with ``normalized`` the trace convention is
    ``tr(I) = 1``, i.e. the plain norm divided by 2^(N/2)."""
    if isinstance(m, PauliHamiltonian):
        # Pauli strings are orthonormal under the tr(I)=1 convention
        sq = np.sqrt(sum(c * c for c in m._terms.values()))
        return float(sq) if normalized else float(sq) * 2 ** (m.qubit_count / 2)
    m = np.asarray(m)
    nrm = float(np.linalg.norm(m))
    if normalized:
        dim = m.shape[0]
        nrm /= np.sqrt(dim)
    return nrm


def spectral_norm(m, rtol: float = RTOL_NORM, max_iter: int = 20000, seed: int = 7) -> float:
    """Largest singular value by power iteration on ``m^dag m``.

    Accepts a dense matrix or a :class:`PauliHamiltonian` (applied
    matrix-free, which is what makes 16-qubit commutator norms feasible).
    Raises :class:`ConvergenceError` when the iteration cap is hit.
    """
    if isinstance(m, PauliHamiltonian):
        dim = m.dim
        apply_m = m.apply
        apply_mdag = m.apply  # Hermitian
    else:
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("spectral_norm expects a square matrix")
        dim = m.shape[0]
        apply_m = lambda v: m @ v
        mdag = m.conj().T
        apply_mdag = lambda v: mdag @ v

    rng = np.random.default_rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(max_iter):
        w = apply_m(v)
        sigma = np.linalg.norm(w)
        if sigma == 0.0:
            return 0.0
        v = apply_mdag(w)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return 0.0
        v /= nv
        est = np.sqrt(nv)  # ||m^dag m v|| -> sigma_max^2
        if abs(est - prev) <= rtol * max(est, 1e-300):
            return float(est)
        prev = est
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def is_unitary(u: np.ndarray, atol: float = ATOL_UNITARY) -> bool:
    u = np.asarray(u)
    eye = np.eye(u.shape[0])
    return np.linalg.norm(u.conj().T @ u - eye) <= atol


def unitary_distance(u: np.ndarray, v: np.ndarray, up_to_phase: bool = False) -> float:
    """Frobenius distance between unitaries, optionally minimized over a
    global phase."""
    if u.shape != v.shape:
        raise DimensionError("unitary shapes differ")
    if up_to_phase:
        tr = np.trace(u.conj().T @ v)
        if abs(tr) > 1e-14:
            v = v * (abs(tr) / tr)
    return float(np.linalg.norm(u - v))


def hermitian_log(u: np.ndarray) -> np.ndarray:
    """Hermitian ``h`` with ``expm(-i h) = u`` (principal branch)."""
    h = 1j * scipy.linalg.logm(np.asarray(u, dtype=complex))
    return 0.5 * (h + h.conj().T)


def embed_1q(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Embed a 2x2 operator on ``qubit`` (0-based) into the 2^n space."""
    m = np.eye(1, dtype=complex)
    for q in range(n):
        m = np.kron(m, op if q == qubit else PAULI_1Q["I"])
    return m


def apply_unitary_1q(u2: np.ndarray, qubit: int, state: np.ndarray) -> np.ndarray:
    """Apply a 2x2 unitary to one qubit of a statevector (matrix-free)."""
    n = int(round(np.log2(state.size)))
    psi = state.reshape([2] * n)
    psi = np.moveaxis(psi, qubit, 0)
    psi = np.tensordot(u2, psi, axes=([1], [0]))
    return np.moveaxis(psi, 0, qubit).reshape(-1)
