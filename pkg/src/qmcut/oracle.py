"""Desk-scale exact ground truth: dense Hamiltonians and statevector circuits.

Qubit 0 is the lowest-order bit of the amplitude index (so in a state array
reshaped to [2]*n, qubit q lives on axis n-1-q). Dense construction is capped
at n = 14.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import WeightedGraph, edge_key
from .paulis import Monomial

DENSE_CAP = 14

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)   # (|01> - |10>)/sqrt2
EPR_PAIR = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)   # (|00> + |11>)/sqrt2


def term_matrix(kind: str) -> np.ndarray:
    """4x4 two-qubit term: twice the projector onto the target entangled state.

    Index convention: the 4-dim factor is (bit_i, bit_j) with bit_i the
    most significant of the pair.
    """
    v = SINGLET if kind == "qmc" else EPR_PAIR
    return 2.0 * np.outer(v, v.conj())


@dataclass(frozen=True)
class DenseHamiltonian:
    matrix: np.ndarray
    kind: str
    n: int


def _embed_two_site(op4: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """Embed a 4x4 operator acting on qubits (i, j) into the full 2^n space."""
    dim = 2 ** n
    full = np.zeros((dim, dim), dtype=complex)
    op = op4.reshape(2, 2, 2, 2)  # (i_out, j_out, i_in, j_in)
    idx = np.arange(dim)
    bits_i = (idx >> i) & 1
    bits_j = (idx >> j) & 1
    base = idx & ~((1 << i) | (1 << j))
    # group indices by the configuration of the remaining qubits
    for bi_out in range(2):
        for bj_out in range(2):
            for bi_in in range(2):
                for bj_in in range(2):
                    amp = op[bi_out, bj_out, bi_in, bj_in]
                    if amp == 0:
                        continue
                    src = base | (bi_in << i) | (bj_in << j)
                    dst = base | (bi_out << i) | (bj_out << j)
                    sel = (bits_i == bi_in) & (bits_j == bj_in)
                    full[dst[sel], src[sel]] += amp
    return full


def build_hamiltonian(g: WeightedGraph, kind: str) -> DenseHamiltonian:
    """Weighted sum of two-qubit terms as a dense 2^n x 2^n matrix."""
    if g.n > DENSE_CAP:
        raise ValueError(f"dense Hamiltonian capped at n={DENSE_CAP}, got n={g.n}")
    dim = 2 ** g.n
    h = np.zeros((dim, dim), dtype=complex)
    t = term_matrix(kind)
    for (i, j, w) in g.edges:
        h += w * _embed_two_site(t, i, j, g.n)
    return DenseHamiltonian(matrix=h, kind=kind, n=g.n)


def max_eigenvalue(h: DenseHamiltonian) -> float:
    return float(np.linalg.eigvalsh(h.matrix)[-1])


def top_eigenvector(h: DenseHamiltonian) -> np.ndarray:
    vals, vecs = np.linalg.eigh(h.matrix)
    return np.ascontiguousarray(vecs[:, -1])


def zero_state(n: int) -> np.ndarray:
    v = np.zeros(2 ** n, dtype=complex)
    v[0] = 1.0
    return v


def bloch_ket(v: np.ndarray) -> np.ndarray:
    """Single-qubit state with Bloch vector v (unit norm)."""
    vz = float(np.clip(v[2], -1.0, 1.0))
    theta = np.arccos(vz)
    phi = float(np.arctan2(v[1], v[0]))
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], dtype=complex)


def product_state(blochs: np.ndarray) -> np.ndarray:
    """Tensor product of single-qubit states given per-vertex Bloch vectors."""
    n = blochs.shape[0]
    psi = np.array([1.0 + 0j])
    for q in range(n - 1, -1, -1):
        psi = np.kron(psi, bloch_ket(blochs[q]))
    return psi


def apply_two_qubit(state: np.ndarray, op4: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """Apply a 4x4 operator to qubits (i, j) of a statevector (or a batch).

    Accepts shape (2^n,) or (batch, 2^n); op4 may be (4, 4) or (batch, 4, 4).
    """
    batched = state.ndim == 2
    b = state.shape[0] if batched else 1
    psi = state.reshape((b,) + (2,) * n)
    ai, aj = n - i, n - j  # +1 offset for the batch axis
    psi = np.moveaxis(psi, (ai, aj), (1, 2))
    tail = psi.shape[3:]
    psi = psi.reshape(b, 2, 2, -1)
    op = np.broadcast_to(op4.reshape((-1, 2, 2, 2, 2)), (b, 2, 2, 2, 2))
    psi = np.einsum("sabcd,scdr->sabr", op, psi)
    psi = psi.reshape((b, 2, 2) + tail)
    psi = np.moveaxis(psi, (1, 2), (ai, aj))
    out = psi.reshape(b, -1)
    return out if batched else out[0]


def rotation_gate(axis_i: np.ndarray, axis_j: np.ndarray, theta: float, sign: float) -> np.ndarray:
    """exp(i * sign * theta * (axis_i . sigma) x (axis_j . sigma)) as a 4x4."""
    pi = sum(axis_i[a] * PAULIS[a] for a in range(3))
    pj = sum(axis_j[a] * PAULIS[a] for a in range(3))
    pp = np.kron(pi, pj)
    return np.cos(theta) * np.eye(4, dtype=complex) + 1j * sign * np.sin(theta) * pp


def apply_circuit(state: np.ndarray, plan) -> np.ndarray:
    """Apply the plan's commuting two-qubit rotations in canonical edge order."""
    n = plan.n
    out = state
    for (i, j) in plan.edge_order:
        theta = plan.theta[(i, j)]
        if theta == 0.0:
            continue
        gate = rotation_gate(plan.axes[i], plan.axes[j], theta, plan.sign[(i, j)])
        out = apply_two_qubit(out, gate, i, j, n)
    return out


def energy(state: np.ndarray, h: DenseHamiltonian) -> float:
    val = np.vdot(state, h.matrix @ state)
    assert abs(val.imag) <= 1e-12, f"energy has imaginary residue {val.imag}"
    return float(val.real)


def edge_energy(state: np.ndarray, i: int, j: int, n: int, kind: str) -> float:
    """<state| term_ij |state> without building the full Hamiltonian."""
    t = term_matrix(kind)
    rotated = apply_two_qubit(state, t, i, j, n)
    val = np.vdot(state, rotated)
    assert abs(val.imag) <= 1e-10
    return float(val.real)


def edge_energies_batch(states: np.ndarray, i: int, j: int, n: int, kind: str) -> np.ndarray:
    """Per-sample <term_ij> for a (batch, 2^n) array of states."""
    t = term_matrix(kind)
    rotated = apply_two_qubit(states, t, i, j, n)
    vals = np.einsum("sk,sk->s", states.conj(), rotated)
    return vals.real


def graph_energy(state: np.ndarray, g: WeightedGraph, kind: str) -> float:
    """Total energy from per-edge terms; avoids the dense 2^n x 2^n matrix."""
    return sum(w * edge_energy(state, i, j, g.n, kind) for (i, j, w) in g.edges)


def apply_monomial(state: np.ndarray, mono: Monomial, n: int) -> np.ndarray:
    """Apply a Pauli monomial to a statevector."""
    out = state
    for (q, a) in mono:
        psi = out.reshape((2,) * n)
        axis = n - 1 - q
        psi = np.moveaxis(psi, axis, 0)
        if a == 0:      # X
            psi = psi[::-1]
        elif a == 1:    # Y
            psi = np.stack([-1j * psi[1], 1j * psi[0]])
        else:           # Z
            psi = np.stack([psi[0], -psi[1]])
        out = np.moveaxis(psi, 0, axis).reshape(-1)
    return out


def moment_matrix_from_state(state: np.ndarray, monomials: list[Monomial]) -> np.ndarray:
    """Real parts of <state| A B |state> over all monomial pairs.

    This is the moment matrix induced by a genuine quantum state; it must
    satisfy every constraint of the relaxation.
    """
    n = int(np.log2(state.size))
    if n > 10:
        raise ValueError(f"moment matrix extraction capped at n=10, got n={n}")
    columns = np.stack([apply_monomial(state, m, n) for m in monomials])
    gram = columns.conj() @ columns.T
    return np.ascontiguousarray(gram.real)
