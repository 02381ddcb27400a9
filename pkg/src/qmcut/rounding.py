"""Product-state rounding of the level-1 moment block via Gaussian projection.

The weight-1 submatrix of the solved relaxation is factorized into Gram
vectors, one per (vertex, axis). A single shared Gaussian vector projects
each vertex's three Gram vectors to a 3-vector, which is normalized to a
Bloch vector. The expected per-edge energy of the resulting product state is
lower-bounded by a hypergeometric curve of the edge value; the worst ratio of
that curve to the relaxation's per-edge objective is about 0.4988, attained
near x = 0.949.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import WeightedGraph
from .sdp import SDPSolution

SERIES_TOL = 1e-15
SERIES_MAX_TERMS = 2_000_000
GRAM_EIG_FLOOR = -1e-7
RESAMPLE_LIMIT = 16


# Series limits at the two convergence-boundary points, where term decay is
# only n**-2.5 and truncation would need ~1e6 terms. At z = 1 Gauss's
# summation gives Gamma(5/2) Gamma(3/2) / Gamma(2)^2 = 3 pi / 8; at z = -1
# the Euler integral reduces to elementary functions.
_VALUE_AT_PLUS_ONE = 3.0 * np.pi / 8.0
_VALUE_AT_MINUS_ONE = 2.25 * np.log(1.0 + np.sqrt(2.0)) - 0.75 * np.sqrt(2.0)


def hyp2f1_half_half_fivehalf(z):
    """Gauss series for 2F1(1/2, 1/2; 5/2; z), |z| <= 1.

    The series converges absolutely on the closed unit interval used here
    (terms fall off polynomially at |z| = 1); the two boundary points are
    returned as their exact limits. Accepts scalars or arrays.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(np.abs(z_arr) > 1.0 + 1e-15):
        raise ValueError("2F1 series argument must satisfy |z| <= 1")
    total = np.ones_like(z_arr)
    boundary = np.abs(z_arr) >= 1.0 - 1e-14
    total[boundary & (z_arr > 0)] = _VALUE_AT_PLUS_ONE
    total[boundary & (z_arr < 0)] = _VALUE_AT_MINUS_ONE
    # iterate on a shrinking working set so converged points cost nothing
    index = np.nonzero(~boundary)[0]
    if index.size == 0:
        return total if np.ndim(z) else float(total[0])
    zs = z_arr[index]
    term = np.ones_like(zs)
    partial = np.ones_like(zs)
    for n in range(SERIES_MAX_TERMS):
        ratio = (0.5 + n) * (0.5 + n) / ((2.5 + n) * (1.0 + n))
        term = term * ratio * zs
        partial = partial + term
        live = np.abs(term) >= SERIES_TOL
        if not live.all():
            done = ~live
            total[index[done]] = partial[done]
            index, zs, term, partial = index[live], zs[live], term[live], partial[live]
            if index.size == 0:
                break
    else:
        raise RuntimeError("2F1 series failed to reach tolerance")
    return total if np.ndim(z) else float(total[0])


def product_energy_bound(x):
    """Guaranteed expected edge energy of the rounded product state.

    For edge value x, the projected Bloch vectors have mean axis correlation
    m = -(1 + 2x)/3 and the expected inner product of the normalized
    projections is (8 / 3pi) * m * 2F1(1/2, 1/2; 5/2; m^2), which gives the
    energy bound 1/2 - (4 / 3pi) * m * 2F1(1/2, 1/2; 5/2; m^2).
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < -1 - 1e-12) or np.any(x_arr > 1 + 1e-12):
        raise ValueError("edge value must lie in [-1, 1]")
    m = -(1.0 + 2.0 * x_arr) / 3.0
    f = 0.5 - (4.0 / (3.0 * np.pi)) * m * hyp2f1_half_half_fivehalf(m * m)
    return f if np.ndim(x) else float(f)


def product_ratio_curve(step: float = 1e-4):
    """Grid of (x, bound, bound / (1 + x)); x = -1 is excluded (ratio blows up)."""
    count = round(2.0 / step)
    xs = np.linspace(-1.0 + step, 1.0, count)
    f = product_energy_bound(xs)
    return xs, f, f / (1.0 + xs)


@dataclass(frozen=True)
class GramVectors:
    """Per (vertex, axis) unit vectors reproducing the level-1 moment block."""

    vectors: np.ndarray  # shape (n, 3, m)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def flat(self) -> np.ndarray:
        n, _, m = self.vectors.shape
        return self.vectors.reshape(3 * n, m)


def level1_gram(s: SDPSolution) -> GramVectors:
    """Factorize the weight-1 block of the moment matrix into Gram vectors.

    Eigenvalues in [GRAM_EIG_FLOOR, 0) are zeroed; anything lower means the
    solver output is unusable and raises.
    """
    n = s.problem.graph.n
    block = s.M[1:3 * n + 1, 1:3 * n + 1]
    vals, vecs = np.linalg.eigh(block)
    if vals[0] < GRAM_EIG_FLOOR:
        raise ValueError(f"level-1 block indefinite: min eigenvalue {vals[0]:.3e}")
    vals = np.clip(vals, 0.0, None)
    factors = vecs * np.sqrt(vals)  # rows are the Gram vectors
    return GramVectors(vectors=factors.reshape(n, 3, 3 * n))


def gp_round(grams: GramVectors, rng: np.random.Generator) -> np.ndarray:
    """One rounding trial: project through a shared Gaussian vector and
    normalize. Returns Bloch vectors, shape (n, 3). Deterministic per rng state."""
    m = grams.vectors.shape[2]
    for _ in range(RESAMPLE_LIMIT):
        z = rng.standard_normal(m)
        w = grams.vectors @ z  # (n, 3)
        norms = np.linalg.norm(w, axis=1)
        if np.all(norms > 1e-12):
            return w / norms[:, None]
    raise RuntimeError("Gaussian projection kept collapsing to zero vectors")


def gp_round_batch(grams: GramVectors, rng: np.random.Generator, trials: int) -> np.ndarray:
    """Independent rounding trials, shape (trials, n, 3). Zero-norm rows are
    resampled per trial (probability-zero event)."""
    m = grams.vectors.shape[2]
    z = rng.standard_normal((trials, m))
    w = np.einsum("nam,tm->tna", grams.vectors, z)
    norms = np.linalg.norm(w, axis=2)
    bad = np.nonzero(~np.all(norms > 1e-12, axis=1))[0]
    for t in bad:
        w[t] = gp_round(grams, rng) * 1.0
        norms[t] = 1.0
    return w / norms[:, :, None]


def product_edge_energy(blochs: np.ndarray, edge: tuple[int, int], kind: str) -> float:
    """Energy of a product state on one two-qubit term, from Bloch vectors."""
    i, j = edge
    vi, vj = blochs[i], blochs[j]
    if kind == "qmc":
        return 0.5 * (1.0 - float(np.dot(vi, vj)))
    return 0.5 * (1.0 + vi[0] * vj[0] - vi[1] * vj[1] + vi[2] * vj[2])


def product_total_energy(blochs: np.ndarray, g: WeightedGraph, kind: str) -> float:
    return sum(w * product_edge_energy(blochs, (i, j), kind) for (i, j, w) in g.edges)
