"""Relaxation assembly, solving, extraction, and the monogamy check."""

import numpy as np
import pytest

from qmcut import oracle
from qmcut.graphs import WeightedGraph, normalize_weights
from qmcut.paulis import cached_classes
from qmcut.sdp import (
    SolverError,
    _edge_values_from_classes,
    build_sdp,
    check_monogamy,
    constraint_violation,
    edge_values,
    export_sdp_text,
    matrix_from_class_values,
    solve_sdp,
)
from conftest import complete, path, solve_cached, star


def single_edge():
    return WeightedGraph(n=2, edges=((0, 1, 1.0),))


def test_build_dimensions_and_objective():
    p = build_sdp(single_edge(), "qmc")
    assert p.dim == 16
    assert len(p.objective) == 3
    assert p.objective_const == pytest.approx(0.5)
    assert all(c == pytest.approx(-0.5) for c in p.objective.values())
    p_epr = build_sdp(single_edge(), "epr")
    signs = [p_epr.objective[((0, a), (1, a))] for a in range(3)]
    assert signs == pytest.approx([0.5, -0.5, 0.5])


def test_build_triangle_dim():
    assert build_sdp(complete(3), "qmc").dim == 37


def test_build_requires_normalized():
    with pytest.raises(ValueError, match="normalized"):
        build_sdp(WeightedGraph(n=2, edges=((0, 1, 2.0),)), "qmc")
    with pytest.raises(ValueError, match="kind"):
        build_sdp(single_edge(), "ising")


@pytest.mark.parametrize("kind", ["qmc", "epr"])
def test_single_edge_objective_is_two(kind):
    s = solve_cached("star1", single_edge(), kind)
    assert s.objective_value == pytest.approx(2.0, abs=1e-5)
    assert s.edge_values[(0, 1)] == pytest.approx(1.0, abs=1e-5)


def test_path3_upper_bounds_norm():
    g = path(3)
    s = solve_cached("path3", g, "qmc")
    assert s.objective_value >= 1.5 - 1e-5
    assert s.objective_value == pytest.approx(1.5, abs=1e-4)


def test_solution_invariants():
    g = path(3)
    for kind in ("qmc", "epr"):
        s = solve_cached("path3", g, kind)
        assert np.linalg.eigvalsh(s.M)[0] >= -1e-7
        assert np.allclose(np.diag(s.M), 1.0, atol=1e-6)
        recon = 1.0 + sum(w * s.edge_values[(i, j)] for (i, j, w) in g.edges)
        assert s.objective_value == pytest.approx(recon, abs=1e-6)
        assert s.solver_gap <= 1e-7
        assert all(-1.0 <= v <= 1.0 for v in s.edge_values.values())


def test_solve_rejects_bad_tol():
    p = build_sdp(single_edge(), "qmc")
    with pytest.raises(ValueError):
        solve_sdp(p, tol=1e-3)
    with pytest.raises(ValueError):
        solve_sdp(p, tol=0.0)


def test_edge_value_substitutions():
    g = single_edge()
    keys = {a: ((0, a), (1, a)) for a in range(3)}
    vals = {keys[0]: -1.0, keys[1]: -1.0, keys[2]: -1.0}
    assert _edge_values_from_classes(vals, g, "qmc")[(0, 1)] == pytest.approx(1.0)
    vals = {keys[0]: 0.0, keys[1]: 0.0, keys[2]: 0.0}
    assert _edge_values_from_classes(vals, g, "qmc")[(0, 1)] == pytest.approx(-0.5)
    vals = {keys[0]: 1.0, keys[1]: -1.0, keys[2]: 1.0}
    assert _edge_values_from_classes(vals, g, "epr")[(0, 1)] == pytest.approx(1.0)


def test_edge_values_clip_and_warn():
    g = single_edge()
    keys = {a: ((0, a), (1, a)) for a in range(3)}
    vals = {keys[0]: -1.1, keys[1]: -1.0, keys[2]: -1.0}
    warnings = []
    out = _edge_values_from_classes(vals, g, "qmc", warn=warnings.append)
    assert out[(0, 1)] == 1.0
    assert len(warnings) == 1


def test_edge_values_kind_mismatch():
    s = solve_cached("star1", single_edge(), "qmc")
    with pytest.raises(ValueError, match="kind"):
        edge_values(s, single_edge(), "epr")


def test_monogamy_star_tight():
    g = star(3)
    s = solve_cached("star3", g, "qmc")
    rep = check_monogamy(s.edge_values, g, tol=1e-6)
    assert rep.ok
    assert rep.worst_vertex == 0
    assert rep.worst_sum <= 1.0 + 1e-6
    assert rep.worst_sum >= 0.99  # the relaxation saturates the star bound


def test_monogamy_epr_two_leaves():
    g = star(2)
    s = solve_cached("star2", g, "epr")
    rep = check_monogamy(s.edge_values, g, tol=1e-6)
    assert rep.ok
    y = s.edge_values
    assert y[(0, 1)] + y[(0, 2)] <= 1.0 + 1e-6


def test_monogamy_single_edge():
    s = solve_cached("star1", single_edge(), "qmc")
    assert check_monogamy(s.edge_values, single_edge(), tol=1e-6).ok


def test_monogamy_rejects_corrupted_values():
    g = star(2)
    rep = check_monogamy({(0, 1): 0.8, (0, 2): 0.8}, g, tol=1e-6)
    assert not rep.ok
    assert rep.violations == ((0, pytest.approx(1.6)),)


def test_true_state_moment_matrix_is_feasible():
    """Moment matrix induced from the exact top eigenvector satisfies every
    generated constraint: validates constraint generation end to end."""
    g = path(3)
    mons, classes = cached_classes(g.n)
    for kind in ("qmc", "epr"):
        h = oracle.build_hamiltonian(g, kind)
        psi = oracle.top_eigenvector(h)
        m = oracle.moment_matrix_from_state(psi, mons)
        assert constraint_violation(m, classes) <= 1e-9
        assert np.linalg.eigvalsh(m)[0] >= -1e-10


def test_matrix_reconstruction_roundtrip():
    g = path(3)
    s = solve_cached("path3", g, "qmc")
    m = matrix_from_class_values(s.problem.classes, s.class_values)
    assert np.array_equal(m, s.M)
    assert constraint_violation(s.M, s.problem.classes) == 0.0


def test_solve_deterministic():
    g = path(3)
    p = build_sdp(g, "qmc")
    s1 = solve_sdp(p)
    s2 = solve_sdp(p)
    assert np.array_equal(s1.M, s2.M)
    assert s1.objective_value == s2.objective_value


def test_bipartite_objectives_agree():
    g = path(3)
    sq = solve_cached("path3", g, "qmc")
    se = solve_cached("path3", g, "epr")
    assert sq.objective_value == pytest.approx(se.objective_value, abs=2e-5)


def test_export_text_format():
    p = build_sdp(single_edge(), "qmc")
    text = export_sdp_text(p)
    lines = text.splitlines()
    assert lines[0] == "moment-sdp 1"
    assert "kind qmc" in lines
    assert "dim 16" in lines
    n_class = sum(1 for l in lines if l.startswith("class "))
    assert n_class == len(p.classes.classes)
    n_pairs = sum(1 for l in lines if l.startswith("pair "))
    n_diag = sum(1 for l in lines if l.startswith("diag "))
    n_zero = sum(1 for l in lines if l.startswith("zero "))
    assert n_pairs + n_diag + n_zero == p.dim * (p.dim + 1) // 2
