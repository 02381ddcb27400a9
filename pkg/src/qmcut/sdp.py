"""Level-2 moment-matrix relaxation: assembly, solving, and value extraction.

The relaxation optimizes over real symmetric matrices M indexed by Pauli
monomials of weight <= 2, subject to: M is PSD, entries depend only on the
(signed) product of their index monomials, non-Hermitian products are pinned
to 0, and the diagonal is pinned to 1. Its optimum upper-bounds the maximum
eigenvalue of the corresponding Hamiltonian.

Entries are reduced to one scalar variable per constraint class before
solving; the solver sees a standard conic form (linear objective, one PSD
cone) through a small adapter, so backends are interchangeable. The default
backend is SCS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from io import StringIO

import numpy as np
import scipy.sparse as sp

from .graphs import WeightedGraph, edge_key, neighbors
from .paulis import ConstraintClasses, Monomial, cached_classes, format_monomial

KINDS = ("qmc", "epr")

# objective signs on the (XX, YY, ZZ) classes per Hamiltonian kind
_OBJ_SIGNS = {"qmc": (-1.0, -1.0, -1.0), "epr": (+1.0, -1.0, +1.0)}

DEFAULT_TOL = 1e-7


class SolverError(RuntimeError):
    """Raised when the conic backend fails to converge."""

    def __init__(self, status: str, message: str = ""):
        self.status = status
        super().__init__(message or f"conic solver failed with status {status!r}")


@dataclass(frozen=True)
class SDPProblem:
    """Assembled relaxation for one graph and Hamiltonian kind."""

    dim: int
    classes: ConstraintClasses
    objective: dict[Monomial, float]
    objective_const: float
    kind: str
    monomials: list[Monomial]
    graph: WeightedGraph


@dataclass(frozen=True)
class ConicForm:
    """min c'v  s.t.  b - A v is PSD (lower-triangle packed, off-diag * sqrt2)."""

    A: sp.csc_matrix
    b: np.ndarray
    c: np.ndarray
    cone_dim: int
    var_keys: list[Monomial]


@dataclass(frozen=True)
class SDPSolution:
    problem: SDPProblem
    M: np.ndarray
    objective_value: float
    solver_gap: float
    class_values: dict[Monomial, float]
    edge_values: dict[tuple[int, int], float]


def build_sdp(g: WeightedGraph, kind: str) -> SDPProblem:
    """Assemble the relaxation for a normalized graph."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if abs(g.total_weight - 1.0) > 1e-9:
        raise ValueError("graph must be normalized (total weight 1) before building the SDP")
    mons, classes = cached_classes(g.n)
    signs = _OBJ_SIGNS[kind]
    objective: dict[Monomial, float] = {}
    const = 0.0
    for (i, j, w) in g.edges:
        const += 0.5 * w
        for a in range(3):
            key = ((i, a), (j, a))
            objective[key] = objective.get(key, 0.0) + 0.5 * w * signs[a]
    return SDPProblem(
        dim=len(mons),
        classes=classes,
        objective=objective,
        objective_const=const,
        kind=kind,
        monomials=mons,
        graph=g,
    )


def _tri_index(r: int, c: int, dim: int) -> int:
    """Packed lower-triangle index of entry (r, c) with r >= c, column-major."""
    return c * dim - (c * (c - 1)) // 2 + (r - c)


def conic_form(p: SDPProblem) -> ConicForm:
    """Reduce to one variable per class and emit the sparse conic data."""
    dim = p.dim
    m = dim * (dim + 1) // 2
    var_keys = sorted(p.classes.classes.keys())
    var_index = {k: i for i, k in enumerate(var_keys)}
    b = np.zeros(m)
    for (r, c) in p.classes.identity_pairs:
        b[_tri_index(max(r, c), min(r, c), dim)] = 1.0
    rows, cols, vals = [], [], []
    sqrt2 = math.sqrt(2.0)
    for key in var_keys:
        col = var_index[key]
        for (r, c, s) in p.classes.classes[key]:
            rows.append(_tri_index(max(r, c), min(r, c), dim))
            cols.append(col)
            vals.append(-s * (1.0 if r == c else sqrt2))
    A = sp.csc_matrix((vals, (rows, cols)), shape=(m, len(var_keys)))
    c = np.zeros(len(var_keys))
    for key, coeff in p.objective.items():
        c[var_index[key]] -= coeff  # maximize -> minimize
    return ConicForm(A=A, b=b, c=c, cone_dim=dim, var_keys=var_keys)


def _solve_scs(form: ConicForm, eps: float, max_iters: int = 200_000):
    import scs

    solver = scs.SCS(
        dict(A=form.A, b=form.b, c=form.c),
        dict(s=[form.cone_dim]),
        eps_abs=eps,
        eps_rel=eps,
        max_iters=max_iters,
        verbose=False,
    )
    result = solver.solve()
    info = result["info"]
    if info["status"] != "solved":
        raise SolverError(info["status"])
    gap = abs(info["pobj"] - info["dobj"])
    return result["x"], gap


def matrix_from_class_values(classes: ConstraintClasses, values: dict[Monomial, float]) -> np.ndarray:
    """Dense symmetric moment matrix from one scalar per class."""
    m = np.zeros((classes.dim, classes.dim))
    for (r, c) in classes.identity_pairs:
        m[r, c] = 1.0
        m[c, r] = 1.0
    for key, members in classes.classes.items():
        v = values[key]
        for (r, c, s) in members:
            m[r, c] = s * v
            m[c, r] = s * v
    return m


def solve_sdp(p: SDPProblem, tol: float = DEFAULT_TOL) -> SDPSolution:
    """Solve the relaxation; the result upper-bounds the Hamiltonian norm.

    tol is the target duality gap; the backend runs at eps = tol / 10 so the
    reconstructed matrix is PSD within tol. Infeasibility cannot occur (the
    identity matrix is always feasible) and is surfaced as a SolverError.
    """
    if not (0 < tol <= 1e-4):
        raise ValueError(f"tol must be in (0, 1e-4], got {tol}")
    form = conic_form(p)
    x, gap = _solve_scs(form, eps=tol / 10.0)
    class_values = {k: float(v) for k, v in zip(form.var_keys, x)}
    m = matrix_from_class_values(p.classes, class_values)
    objective_value = p.objective_const + sum(
        coeff * class_values[key] for key, coeff in p.objective.items()
    )
    vals = _edge_values_from_classes(class_values, p.graph, p.kind)
    return SDPSolution(
        problem=p,
        M=m,
        objective_value=float(objective_value),
        solver_gap=float(gap),
        class_values=class_values,
        edge_values=vals,
    )


_CLIP_WARN = 1e-5


def _edge_values_from_classes(class_values: dict[Monomial, float], g: WeightedGraph,
                              kind: str, warn=None) -> dict[tuple[int, int], float]:
    out = {}
    for (i, j, _) in g.edges:
        mxx = class_values[((i, 0), (j, 0))]
        myy = class_values[((i, 1), (j, 1))]
        mzz = class_values[((i, 2), (j, 2))]
        if kind == "qmc":
            val = -0.5 * (1.0 + mxx + myy + mzz)
        else:
            val = 0.5 * (-1.0 + mxx - myy + mzz)
        clipped = min(1.0, max(-1.0, val))
        if abs(val - clipped) > _CLIP_WARN and warn is not None:
            warn(f"edge ({i},{j}) value {val} clipped beyond {_CLIP_WARN}")
        out[(i, j)] = clipped
    return out


def edge_values(s: SDPSolution, g: WeightedGraph, kind: str, warn=None) -> dict[tuple[int, int], float]:
    """Per-edge values measuring how close the relaxation puts each edge to
    the target entangled state; clipped to [-1, 1]."""
    if kind != s.problem.kind:
        raise ValueError(f"solution was computed for kind {s.problem.kind!r}, not {kind!r}")
    return _edge_values_from_classes(s.class_values, g, kind, warn=warn)


@dataclass(frozen=True)
class MonogamyReport:
    ok: bool
    worst_vertex: int
    worst_sum: float
    violations: tuple[tuple[int, float], ...]


def check_monogamy(values: dict[tuple[int, int], float], g: WeightedGraph,
                   tol: float = 1e-6) -> MonogamyReport:
    """Check that no vertex carries more than one unit of positive edge value.

    The worst subset of neighbours is the set with non-negative values, so
    only that sum is examined per vertex.
    """
    violations = []
    worst_vertex, worst_sum = 0, 0.0
    for v in range(g.n):
        total = sum(
            values[edge_key(v, u)]
            for u in neighbors(g, v)
            if values[edge_key(v, u)] >= 0
        )
        if total > worst_sum:
            worst_vertex, worst_sum = v, total
        if total > 1.0 + tol:
            violations.append((v, total))
    return MonogamyReport(
        ok=not violations,
        worst_vertex=worst_vertex,
        worst_sum=worst_sum,
        violations=tuple(violations),
    )


def constraint_violation(m: np.ndarray, classes: ConstraintClasses) -> float:
    """Largest violation of the class/zero/diagonal constraints by a matrix.

    Used to validate constraint generation against moment matrices induced
    from genuine quantum states.
    """
    worst = 0.0
    for (r, c) in classes.identity_pairs:
        worst = max(worst, abs(m[r, c] - 1.0))
    for (r, c) in classes.zero_pairs:
        worst = max(worst, abs(m[r, c]))
    for key, members in classes.classes.items():
        r0, c0, s0 = members[0]
        ref = s0 * m[r0, c0]
        for (r, c, s) in members[1:]:
            worst = max(worst, abs(s * m[r, c] - ref))
    return worst


def export_sdp_text(p: SDPProblem) -> str:
    """Serialize the assembled relaxation in a class-indexed sparse format.

    Format (one record per line):
        moment-sdp 1
        kind <qmc|epr>
        dim <matrix side>
        class <id> <monomial> <objective coefficient>
        pair <class id> <row> <col> <sign>      # sign relative to +monomial
        diag <row>                              # pinned to 1
        zero <row> <col>                        # pinned to 0
    Only the upper triangle (row <= col) is listed.
    """
    out = StringIO()
    out.write("moment-sdp 1\n")
    out.write(f"kind {p.kind}\n")
    out.write(f"dim {p.dim}\n")
    out.write(f"objective-const {p.objective_const!r}\n")
    keys = sorted(p.classes.classes.keys())
    for idx, key in enumerate(keys):
        coeff = p.objective.get(key, 0.0)
        out.write(f"class {idx} {format_monomial(key)} {coeff!r}\n")
    for idx, key in enumerate(keys):
        for (r, c, s) in p.classes.classes[key]:
            out.write(f"pair {idx} {r} {c} {s:+d}\n")
    for (r, _) in p.classes.identity_pairs:
        out.write(f"diag {r}\n")
    for (r, c) in p.classes.zero_pairs:
        out.write(f"zero {r} {c}\n")
    return out.getvalue()
