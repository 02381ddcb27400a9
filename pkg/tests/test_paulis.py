"""Pauli algebra checked against brute-force dense matrix products."""

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmcut.oracle import PAULIS
from qmcut.paulis import (
    cached_classes,
    constraint_classes,
    enumerate_monomials,
    format_monomial,
    multiply,
)


def monomial_matrix(mono, n):
    """Dense 2^n x 2^n matrix of a monomial (independent reference)."""
    ops = {q: PAULIS[a] for (q, a) in mono}
    out = np.array([[1.0 + 0j]])
    for q in range(n - 1, -1, -1):
        out = np.kron(out, ops.get(q, np.eye(2, dtype=complex)))
    return out


@pytest.mark.parametrize("n,d,count", [(2, 2, 16), (1, 1, 4), (3, 2, 37), (8, 2, 277)])
def test_enumeration_counts(n, d, count):
    assert len(enumerate_monomials(n, d)) == count


def test_enumeration_order_frozen():
    mons = enumerate_monomials(2, 2)
    assert mons[0] == ()
    assert mons[1:7] == [((0, 0),), ((0, 1),), ((0, 2),), ((1, 0),), ((1, 1),), ((1, 2),)]
    assert mons[7] == ((0, 0), (1, 0))   # X0 X1 first among weight-2
    assert mons[-1] == ((0, 2), (1, 2))  # Z0 Z1 last


def test_unsupported_weight_cap():
    with pytest.raises(ValueError):
        enumerate_monomials(3, 3)
    with pytest.raises(ValueError):
        enumerate_monomials(0, 2)


def test_multiply_examples():
    x0, y0 = ((0, 0),), ((0, 1),)
    assert multiply(x0, y0) == (1j, ((0, 2),))          # X*Y = iZ
    xx = ((0, 0), (1, 0))
    assert multiply(xx, xx) == (1 + 0j, ())             # involution
    y1 = ((1, 1),)
    assert multiply(x0, y1) == (1 + 0j, ((0, 0), (1, 1)))  # disjoint supports


@pytest.mark.parametrize("n", [1, 2, 3])
def test_multiply_matches_matrix_product(n):
    mons = enumerate_monomials(n, 2 if n > 1 else 1)
    mats = {m: monomial_matrix(m, n) for m in mons}
    for a, b in itertools.product(mons, repeat=2):
        phase, prod = multiply(a, b)
        expected = mats[a] @ mats[b]
        assert np.allclose(phase * monomial_matrix(prod, n), expected, atol=1e-12), (
            f"{format_monomial(a)} * {format_monomial(b)}"
        )


@pytest.mark.parametrize("n", [2, 3])
def test_phase_symmetry_counts_anticommuting_sites(n):
    """ab = +/- ba with sign set by the parity of anticommuting sites."""
    mons = enumerate_monomials(n, 2)
    for a, b in itertools.product(mons, repeat=2):
        sa, sb = dict(a), dict(b)
        odd = sum(1 for q in set(sa) & set(sb) if sa[q] != sb[q])
        pab, mab = multiply(a, b)
        pba, mba = multiply(b, a)
        assert mab == mba
        assert pab / pba == (1 if odd % 2 == 0 else -1)


def test_classes_partition_all_pairs():
    mons = enumerate_monomials(3, 2)
    cls = constraint_classes(mons)
    dim = len(mons)
    counted = len(cls.identity_pairs) + len(cls.zero_pairs)
    seen = set(cls.identity_pairs) | set(cls.zero_pairs)
    for members in cls.classes.values():
        counted += len(members)
        seen |= {(r, c) for (r, c, _) in members}
    assert counted == dim * (dim + 1) // 2
    assert len(seen) == counted


def test_identity_class_is_diagonal():
    _, cls = cached_classes(2)
    assert all(r == c for (r, c) in cls.identity_pairs)
    assert len(cls.identity_pairs) == cls.dim


def test_zero_class_examples():
    mons = enumerate_monomials(2, 2)
    cls = constraint_classes(mons)
    ix, iy = mons.index(((0, 0),)), mons.index(((0, 1),))
    assert (min(ix, iy), max(ix, iy)) in cls.zero_pairs  # X0 * Y0 = i Z0


def test_shared_class_example():
    mons = enumerate_monomials(2, 2)
    cls = constraint_classes(mons)
    key = ((0, 0), (1, 0))  # X0 X1
    members = {(r, c): s for (r, c, s) in cls.classes[key]}
    i_id, i_xx = mons.index(()), mons.index(key)
    i_x0, i_x1 = mons.index(((0, 0),)), mons.index(((1, 0),))
    assert members[(i_id, i_xx)] == 1
    assert members[(i_x0, i_x1)] == 1


def test_relative_signs_representative_is_least_pair():
    mons = enumerate_monomials(3, 2)
    cls = constraint_classes(mons)
    for key, members in cls.classes.items():
        pairs = [(r, c) for (r, c, _) in members]
        assert members[0][:2] == min(pairs)
        rel = cls.relative_signs(key)
        assert rel[0][2] == 1


@pytest.mark.parametrize("n", [2, 3])
def test_class_consistency_against_matrices(n):
    """Any two member pairs of a class have identical matrix products up to
    the stored relative sign; zero pairs are exactly the non-Hermitian ones."""
    mons = enumerate_monomials(n, 2)
    cls = constraint_classes(mons)
    mats = [monomial_matrix(m, n) for m in mons]
    for key, members in cls.classes.items():
        r0, c0, s0 = members[0]
        ref = s0 * (mats[r0] @ mats[c0])
        for (r, c, s) in members[1:]:
            assert np.allclose(s * (mats[r] @ mats[c]), ref, atol=1e-12)
    for (r, c) in cls.zero_pairs:
        prod = mats[r] @ mats[c]
        assert not np.allclose(prod, prod.conj().T, atol=1e-12)
    for key, members in cls.classes.items():
        for (r, c, _) in members:
            prod = mats[r] @ mats[c]
            assert np.allclose(prod, prod.conj().T, atol=1e-12)


@given(st.integers(min_value=1, max_value=7))
def test_enumeration_size_formula(n):
    assert len(enumerate_monomials(n, 2)) == 1 + 3 * n + 9 * n * (n - 1) // 2
    assert len(enumerate_monomials(n, 1)) == 1 + 3 * n


def test_format_monomial():
    assert format_monomial(()) == "1"
    assert format_monomial(((0, 0), (2, 2))) == "X0Z2"
