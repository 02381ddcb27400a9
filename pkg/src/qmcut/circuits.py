"""Entangling-circuit rounding: shared machinery and the two pipelines.

Both pipelines apply commuting two-qubit rotations exp(+/- i theta (n_i .
sigma) x (n_j . sigma)) to a product state, with rotation axes orthogonal to
the local Bloch vectors and per-edge angles read off the solved relaxation.

For the EPR Hamiltonian the product state is all-zero, every axis is the
fixed (1, -1, 0)/sqrt2, and the result is deterministic. For Quantum Max-Cut
the product state comes from Gaussian-projection rounding, the axes are
sampled uniformly on the great circle orthogonal to each Bloch vector, and
each edge's rotation sign is chosen to steer the pair toward the singlet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import WeightedGraph, edge_key, neighbors
from .oracle import PAULIS, bloch_ket
from .rounding import (
    gp_round,
    level1_gram,
    product_edge_energy,
    product_energy_bound,
)
from .sdp import SDPSolution

# Damping constant for the Quantum Max-Cut angles and the worst-case ratio it
# guarantees, re-derived by optimize_beta (see the regression test). The
# maximin landscape is flat near the top, so only the leading digits are
# meaningful.
BETA_STAR = 0.38981
GUARANTEED_RATIO = 0.58281

EPR_RATIO = 1.0 / np.sqrt(2.0)
ETA_THRESHOLD = np.sqrt(2.0) - 1.0
EPR_AXIS = np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0)

ROTATED = "ROTATED"
PRODUCT = "PRODUCT"


@dataclass(frozen=True)
class CircuitPlan:
    """Complete description of one output state: apply the rotations to the
    product state with the given Bloch vectors."""

    kind: str
    n: int
    edge_order: tuple[tuple[int, int], ...]
    bloch: np.ndarray                     # (n, 3) unit vectors
    axes: np.ndarray                      # (n, 3) unit vectors, axes[k] . bloch[k] = 0
    theta: dict[tuple[int, int], float]   # radians, in [0, pi/4]
    sign: dict[tuple[int, int], float]    # +/- 1


@dataclass(frozen=True)
class EnergyReport:
    kind: str
    branch: str
    per_edge_energy: dict[tuple[int, int], float]
    total_energy: float
    sdp_upper_bound: float
    ratio: float
    eta: float | None = None          # EPR only: weighted mean edge value
    beta_used: float | None = None    # QMC only
    trials_mean: float | None = None  # QMC only: mean expected energy over trials
    trials_below_guarantee: int | None = None


def epr_angles(yvals: dict[tuple[int, int], float]) -> dict[tuple[int, int], float]:
    """sin 2theta = y for y >= 0, else theta = 0."""
    out = {}
    for e, y in yvals.items():
        if not -1.0 <= y <= 1.0:
            raise ValueError(f"edge value {y} outside [-1, 1]")
        out[e] = 0.5 * float(np.arcsin(y)) if y >= 0 else 0.0
    return out


def qmc_angles(xvals: dict[tuple[int, int], float], beta: float) -> dict[tuple[int, int], float]:
    """sin 2theta = beta * x for x >= 0, else theta = 0."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    out = {}
    for e, x in xvals.items():
        if not -1.0 <= x <= 1.0:
            raise ValueError(f"edge value {x} outside [-1, 1]")
        out[e] = 0.5 * float(np.arcsin(beta * x)) if x >= 0 else 0.0
    return out


def qmc_rotation_bracket(beta, x):
    """Worst-case multiplier on the product edge energy after rotation.

    Derived from the closed-form expected energy by bounding every
    neighbour product through the monogamy inequality.
    """
    beta = np.asarray(beta, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    root = np.sqrt(1.0 - beta * beta)
    return (0.5 + 0.5 * (1.0 - beta ** 2 * (1.0 - x_arr) ** 2)
            + (2.0 / np.pi) * beta * x_arr * (root + (1.0 - root) * x_arr))


def rotated_energy_bound(beta, x):
    """Guaranteed expected edge energy of the full pipeline at edge value x."""
    return product_energy_bound(x) * qmc_rotation_bracket(beta, x)


def _worst_ratio(beta: float, xs: np.ndarray, fx: np.ndarray) -> float:
    vals = fx * qmc_rotation_bracket(beta, xs) / (1.0 + xs)
    return float(vals.min())


def optimize_beta(beta_step: float = 1e-3, x_step: float = 1e-4,
                  refine_tol: float = 1e-5) -> tuple[float, float]:
    """Maximize the worst-case ratio of guaranteed energy to relaxation value.

    Grid search over beta in [0, 1] and x in (-1, 1] (x = -1 carries no
    relaxation mass and the ratio diverges there), then golden-section
    refinement around the best grid point.
    """
    xs = np.linspace(-1.0 + x_step, 1.0, round(2.0 / x_step))
    fx = product_energy_bound(xs)
    betas = np.linspace(0.0, 1.0, round(1.0 / beta_step) + 1)
    scores = np.array([_worst_ratio(b, xs, fx) for b in betas])
    k = int(np.argmax(scores))
    lo = betas[max(k - 1, 0)]
    hi = betas[min(k + 1, len(betas) - 1)]
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = _worst_ratio(c, xs, fx), _worst_ratio(d, xs, fx)
    while b - a > refine_tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = _worst_ratio(d, xs, fx)
        else:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = _worst_ratio(c, xs, fx)
    beta_star = 0.5 * (a + b)
    return beta_star, _worst_ratio(beta_star, xs, fx)


def orthonormal_frame(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Any orthonormal pair spanning the plane orthogonal to unit vector v."""
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(v)))] = 1.0
    e1 = np.cross(v, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(v, e1)
    return e1, e2


def sample_axes(blochs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Per vertex, a uniform unit vector on the great circle orthogonal to the
    Bloch vector."""
    n = blochs.shape[0]
    axes = np.empty((n, 3))
    phis = rng.uniform(0.0, 2.0 * np.pi, size=n)
    for k in range(n):
        e1, e2 = orthonormal_frame(blochs[k])
        axes[k] = np.cos(phis[k]) * e1 + np.sin(phis[k]) * e2
    return axes


def choose_signs(blochs: np.ndarray, axes: np.ndarray,
                 edges) -> dict[tuple[int, int], float]:
    """Pick each edge's rotation sign so the pair rotates toward the singlet.

    The decider is the phase of <v_i|P_j|v_j><v_j|P_i|v_i> with P_k the axis
    operator; phases in [0, pi) take +, in [-pi, 0) take -. A vanishing
    amplitude (probability zero) takes + by convention; the energy law is
    sign-independent there.
    """
    kets = [bloch_ket(v) for v in blochs]
    ops = [sum(axes[k][a] * PAULIS[a] for a in range(3)) for k in range(blochs.shape[0])]
    signs = {}
    for (i, j) in edges:
        amp = (kets[i].conj() @ (ops[j] @ kets[j])) * (kets[j].conj() @ (ops[i] @ kets[i]))
        gamma = float(np.angle(amp))
        signs[(i, j)] = 1.0 if 0.0 <= gamma < np.pi else -1.0
    return signs


def resample_rotated_states(blochs: np.ndarray, theta: dict[tuple[int, int], float],
                            edge_order, n: int, rng: np.random.Generator,
                            samples: int) -> np.ndarray:
    """Monte Carlo over the circuit's randomness: fresh axes and rule-chosen
    signs per sample. Returns statevectors of shape (samples, 2^n).

    Used to verify the closed-form expected energies against the simulator.
    """
    from . import oracle as _oracle

    frames = np.array([orthonormal_frame(v) for v in blochs])  # (n, 2, 3)
    phis = rng.uniform(0.0, 2.0 * np.pi, size=(samples, n))
    axes = (np.cos(phis)[:, :, None] * frames[None, :, 0, :]
            + np.sin(phis)[:, :, None] * frames[None, :, 1, :])  # (s, n, 3)
    sigma = np.stack(PAULIS)  # (3, 2, 2)
    ops = np.einsum("sna,aij->snij", axes, sigma)  # (s, n, 2, 2)
    kets = np.array([bloch_ket(v) for v in blochs])  # (n, 2)
    base = _oracle.product_state(blochs)
    states = np.broadcast_to(base, (samples, base.size)).copy()
    eye4 = np.eye(4, dtype=complex)
    for (i, j) in edge_order:
        t = theta[edge_key(i, j)]
        if t == 0.0:
            continue
        amp = (np.einsum("a,sab,b->s", kets[i].conj(), ops[:, j], kets[j])
               * np.einsum("a,sab,b->s", kets[j].conj(), ops[:, i], kets[i]))
        gamma = np.angle(amp)
        signs = np.where((gamma >= 0.0) & (gamma < np.pi), 1.0, -1.0)
        pp = np.einsum("sab,scd->sacbd", ops[:, i], ops[:, j]).reshape(samples, 4, 4)
        gates = np.cos(t) * eye4 + 1j * np.sin(t) * signs[:, None, None] * pp
        states = _oracle.apply_two_qubit(states, gates, i, j, n)
    return states


def neighbor_cos_products(g: WeightedGraph, theta: dict[tuple[int, int], float],
                          i: int, j: int) -> tuple[float, float]:
    """Products of cos 2theta over edges at i excluding j, and at j excluding i."""
    ci = 1.0
    for k in neighbors(g, i):
        if k != j:
            ci *= float(np.cos(2.0 * theta[edge_key(i, k)]))
    cj = 1.0
    for l in neighbors(g, j):
        if l != i:
            cj *= float(np.cos(2.0 * theta[edge_key(j, l)]))
    return ci, cj


def epr_edge_energy_product_form(g: WeightedGraph, theta: dict[tuple[int, int], float],
                                 edge: tuple[int, int]) -> float:
    """Product-form energy of the rotated all-zero state on one EPR term:

        1/2 + (1/2) c_i c_j + (1/2) sin 2theta_ij (c_i + c_j)

    with c_i, c_j the neighbour cosine products. This equals the exact energy
    whenever i and j have at most one common neighbour with active rotations;
    on denser neighbourhoods it is a lower bound (the dropped cross terms are
    sums of squares). It is the quantity the worst-case guarantee bounds."""
    i, j = edge
    ci, cj = neighbor_cos_products(g, theta, i, j)
    s = float(np.sin(2.0 * theta[edge_key(i, j)]))
    return 0.5 + 0.5 * ci * cj + 0.5 * s * (ci + cj)


def _epr_channel_matrices():
    from .oracle import PAULI_X, PAULI_Y, term_matrix

    p = (PAULI_X - PAULI_Y) / np.sqrt(2.0)
    eye = np.eye(2, dtype=complex)
    return (
        np.kron(p, eye),            # axis operator on qubit i
        np.kron(eye, p),            # axis operator on qubit j
        np.kron(p, p),
        term_matrix("epr"),
    )


def epr_edge_energy_analytic(g: WeightedGraph, theta: dict[tuple[int, int], float],
                             edge: tuple[int, int]) -> float:
    """Exact energy of the rotated all-zero state on one EPR term.

    Every gate commutes, so neighbours outside the edge act on its two-qubit
    term as independent dephasing channels: a neighbour k of i contributes
    Kraus operators (cos theta_ik, sin theta_ik P_i), and a common neighbour
    m of both endpoints couples the two sides. Composing these 4x4 channels
    is exact on arbitrary graphs, unlike the neighbour-cosine product form,
    which drops cross terms once the endpoints share two or more rotated
    neighbours.
    """
    i, j = edge
    pi, pj, pipj, term = _epr_channel_matrices()
    t_ij = theta[edge_key(i, j)]
    rot = np.cos(t_ij) * np.eye(4, dtype=complex) + 1j * np.sin(t_ij) * pipj
    op = rot.conj().T @ term @ rot
    common = set(neighbors(g, i)) & set(neighbors(g, j))
    for k in neighbors(g, i):
        if k == j or k in common:
            continue
        c, s = np.cos(theta[edge_key(i, k)]), np.sin(theta[edge_key(i, k)])
        op = c * c * op + s * s * (pi @ op @ pi)
    for l in neighbors(g, j):
        if l == i or l in common:
            continue
        c, s = np.cos(theta[edge_key(j, l)]), np.sin(theta[edge_key(j, l)])
        op = c * c * op + s * s * (pj @ op @ pj)
    for m in sorted(common):
        c1, s1 = np.cos(theta[edge_key(i, m)]), np.sin(theta[edge_key(i, m)])
        c2, s2 = np.cos(theta[edge_key(m, j)]), np.sin(theta[edge_key(m, j)])
        kraus_even = c1 * c2 * np.eye(4, dtype=complex) - s1 * s2 * pipj
        kraus_odd = 1j * (s1 * c2 * pi + c1 * s2 * pj)
        op = (kraus_even.conj().T @ op @ kraus_even
              + kraus_odd.conj().T @ op @ kraus_odd)
    return float(op[0, 0].real)


def has_common_neighbor(g: WeightedGraph, i: int, j: int) -> bool:
    return bool(set(neighbors(g, i)) & set(neighbors(g, j)) - {i, j})


def qmc_edge_energy_expected(g: WeightedGraph, theta: dict[tuple[int, int], float],
                             edge_product_energy: float, edge: tuple[int, int]) -> float:
    """Expected energy of the rotated product state on one singlet term,
    averaged over the random axes and the induced signs.

    With E the product-state edge energy and c_i, c_j the neighbour cosine
    products, the expectation is

        E * (1/2 + (1/2) c_i c_j + (1/pi) sin 2theta (c_i + c_j))
          + (1 - E) * (1/2) (1 - c_i c_j).

    The second term is the energy the edge picks up when an odd number of
    rotations fire on exactly one side. The expression is the exact
    expectation whenever i and j have no common neighbour; edges inside
    triangles retain small cross terms with no product closed form, and for
    those this value is an approximation (the guarantee bound below it still
    holds).
    """
    i, j = edge
    ci, cj = neighbor_cos_products(g, theta, i, j)
    s = float(np.sin(2.0 * theta[edge_key(i, j)]))
    e = edge_product_energy
    gain = 0.5 + 0.5 * ci * cj + (1.0 / np.pi) * s * (ci + cj)
    leak = 0.5 * (1.0 - ci * cj)
    return e * gain + (1.0 - e) * leak


def run_epr(g: WeightedGraph, s: SDPSolution) -> tuple[EnergyReport, CircuitPlan]:
    """Deterministic EPR pipeline: rotate the all-zero state, or keep it.

    If the weighted mean edge value eta reaches sqrt(2) - 1 the rotated state
    is returned with its exact closed-form energy (at least 1/2 + eta +
    eta^2/2); otherwise the all-zero product state wins at energy 1. Either
    way the energy is at least 1/sqrt(2) times the relaxation bound.
    """
    if s.problem.kind != "epr":
        raise ValueError("run_epr needs a solution of the EPR relaxation")
    yvals = s.edge_values
    eta = sum(w * yvals[(i, j)] for (i, j, w) in g.edges)
    if eta >= ETA_THRESHOLD:
        branch = ROTATED
        theta = epr_angles(yvals)
    else:
        branch = PRODUCT
        theta = {e: 0.0 for e in yvals}
    per_edge = {
        (i, j): epr_edge_energy_analytic(g, theta, (i, j)) for (i, j, _) in g.edges
    }
    total = sum(w * per_edge[(i, j)] for (i, j, w) in g.edges)
    blochs = np.tile([0.0, 0.0, 1.0], (g.n, 1))
    axes = np.tile(EPR_AXIS, (g.n, 1))
    plan = CircuitPlan(
        kind="epr",
        n=g.n,
        edge_order=tuple((i, j) for (i, j, _) in g.edges),
        bloch=blochs,
        axes=axes,
        theta=theta,
        sign={e: 1.0 for e in theta},
    )
    report = EnergyReport(
        kind="epr",
        branch=branch,
        per_edge_energy=per_edge,
        total_energy=float(total),
        sdp_upper_bound=s.objective_value,
        ratio=float(total) / s.objective_value,
        eta=float(eta),
    )
    return report, plan


def run_qmc(g: WeightedGraph, s: SDPSolution, seed: int = 0, trials: int = 64,
            beta: float = BETA_STAR) -> tuple[EnergyReport, CircuitPlan]:
    """Randomized Quantum Max-Cut pipeline.

    Rounds the level-1 block to `trials` candidate product states (trial t
    drawn from seed (seed, t)), keeps the one with the best expected rotated
    energy, then samples rotation axes and signs for it. The reported energy
    is the analytic expectation over axes and signs; the mean over trials is
    reported alongside, and trials falling below the guaranteed ratio are
    counted.
    """
    if s.problem.kind != "qmc":
        raise ValueError("run_qmc needs a solution of the QMC relaxation")
    if trials < 1:
        raise ValueError("need at least one rounding trial")
    xvals = s.edge_values
    theta = qmc_angles(xvals, beta)
    grams = level1_gram(s)
    seq = np.random.SeedSequence(seed)
    children = seq.spawn(trials + 1)
    totals = np.empty(trials)
    candidates = []
    for t in range(trials):
        blochs = gp_round(grams, np.random.default_rng(children[t]))
        candidates.append(blochs)
        totals[t] = sum(
            w * qmc_edge_energy_expected(
                g, theta, product_edge_energy(blochs, (i, j), "qmc"), (i, j))
            for (i, j, w) in g.edges
        )
    best = int(np.argmax(totals))
    blochs = candidates[best]
    axes_rng = np.random.default_rng(children[trials])
    axes = sample_axes(blochs, axes_rng)
    edge_order = tuple((i, j) for (i, j, _) in g.edges)
    signs = choose_signs(blochs, axes, edge_order)
    per_edge = {
        (i, j): qmc_edge_energy_expected(
            g, theta, product_edge_energy(blochs, (i, j), "qmc"), (i, j))
        for (i, j, _) in g.edges
    }
    total = float(totals[best])
    bound = s.objective_value
    below = int(np.sum(totals < GUARANTEED_RATIO * bound))
    plan = CircuitPlan(
        kind="qmc",
        n=g.n,
        edge_order=edge_order,
        bloch=blochs,
        axes=axes,
        theta=theta,
        sign=signs,
    )
    report = EnergyReport(
        kind="qmc",
        branch=ROTATED,
        per_edge_energy=per_edge,
        total_energy=total,
        sdp_upper_bound=bound,
        ratio=total / bound,
        beta_used=beta,
        trials_mean=float(totals.mean()),
        trials_below_guarantee=below,
    )
    return report, plan
