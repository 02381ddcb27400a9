"""Pauli monomial algebra with exact phase tracking.

A monomial is a tensor product of single-qubit Paulis, stored as a tuple of
(qubit, axis) pairs with strictly ascending qubits and axis in {0, 1, 2} for
X, Y, Z. The empty tuple is the identity. Products of two monomials carry a
phase in {1, i, -1, -i}, tracked as an integer power of i so that constraint
generation for the moment-matrix SDP is exact.

The enumeration order of weight <= 2 monomials is frozen: identity first,
then weight-1 sorted by (vertex, axis), then weight-2 sorted by
(i, j, axis_i, axis_j). The SDP solution matrix is indexed by this order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

Monomial = tuple[tuple[int, int], ...]

AXIS_LABELS = "XYZ"
PHASES = (1 + 0j, 1j, -1 + 0j, -1j)  # i**k for k = 0..3

# single-qubit products: _AXIS_PRODUCT[a][b] = (phase power of i, resulting axis or None)
_AXIS_PRODUCT = {
    (0, 0): (0, None), (1, 1): (0, None), (2, 2): (0, None),
    (0, 1): (1, 2), (1, 2): (1, 0), (2, 0): (1, 1),
    (1, 0): (3, 2), (2, 1): (3, 0), (0, 2): (3, 1),
}


class SignedMonomial(NamedTuple):
    phase: complex  # one of PHASES, exact
    mono: Monomial


def identity() -> Monomial:
    return ()


def weight(m: Monomial) -> int:
    return len(m)


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    return "".join(f"{AXIS_LABELS[a]}{q}" for (q, a) in m)


def enumerate_monomials(n: int, d: int = 2) -> list[Monomial]:
    """All Pauli monomials on n qubits with weight <= d, in the frozen order."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    if d not in (1, 2):
        raise ValueError(f"weight cap d={d} unsupported; only d in {{1, 2}}")
    mons: list[Monomial] = [()]
    for q in range(n):
        for a in range(3):
            mons.append(((q, a),))
    if d == 2:
        for i, j in itertools.combinations(range(n), 2):
            for a in range(3):
                for b in range(3):
                    mons.append(((i, a), (j, b)))
    return mons


def _multiply_power(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """Product a*b as (power k of i, canonical monomial). Hot path, ints only."""
    k = 0
    out = []
    ia, ib = 0, 0
    la, lb = len(a), len(b)
    while ia < la and ib < lb:
        qa, xa = a[ia]
        qb, xb = b[ib]
        if qa < qb:
            out.append((qa, xa)); ia += 1
        elif qb < qa:
            out.append((qb, xb)); ib += 1
        else:
            kk, axis = _AXIS_PRODUCT[(xa, xb)]
            k = (k + kk) & 3
            if axis is not None:
                out.append((qa, axis))
            ia += 1; ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return k, tuple(out)


def multiply(a: Monomial, b: Monomial) -> SignedMonomial:
    """Product of two monomials under Pauli multiplication, phase included.

    Monomials are Hermitian, so this also computes adjoint(a) * b.
    """
    k, mono = _multiply_power(a, b)
    return SignedMonomial(PHASES[k], mono)


def commutes(a: Monomial, b: Monomial) -> bool:
    """True iff a and b commute (anticommute on an even number of qubits)."""
    k1, _ = _multiply_power(a, b)
    k2, _ = _multiply_power(b, a)
    return k1 == k2


@dataclass(frozen=True)
class ConstraintClasses:
    """Partition of upper-triangle index pairs of the moment matrix.

    Every pair (r, c) with r <= c falls in exactly one bucket:
      * identity_pairs: product is the identity (the diagonal), pinned to 1;
      * classes[key]: product is +/- key (a canonical monomial); members are
        (r, c, sign) where sign is the product's phase relative to +key.
        The first member is the lexicographically least pair and serves as
        the class representative;
      * zero_pairs: product phase is +/- i (non-Hermitian), pinned to 0.
    """

    dim: int
    identity_pairs: tuple[tuple[int, int], ...]
    classes: dict[Monomial, list[tuple[int, int, int]]]
    zero_pairs: tuple[tuple[int, int], ...]

    def relative_signs(self, key: Monomial) -> list[tuple[int, int, int]]:
        """Members with signs rescaled so the representative pair has sign +1."""
        members = self.classes[key]
        s0 = members[0][2]
        return [(r, c, s * s0) for (r, c, s) in members]


def constraint_classes(monomials: list[Monomial]) -> ConstraintClasses:
    """Group all index pairs by their canonical product monomial."""
    dim = len(monomials)
    identity_pairs = []
    classes: dict[Monomial, list[tuple[int, int, int]]] = {}
    zero_pairs = []
    for r in range(dim):
        mr = monomials[r]
        for c in range(r, dim):
            k, prod = _multiply_power(mr, monomials[c])
            if k & 1:
                zero_pairs.append((r, c))
            elif not prod:
                identity_pairs.append((r, c))
            else:
                sign = 1 if k == 0 else -1
                classes.setdefault(prod, []).append((r, c, sign))
    return ConstraintClasses(
        dim=dim,
        identity_pairs=tuple(identity_pairs),
        classes=classes,
        zero_pairs=tuple(zero_pairs),
    )


@lru_cache(maxsize=32)
def cached_classes(n: int) -> tuple[list[Monomial], ConstraintClasses]:
    """Monomials and constraint classes for weight <= 2 on n qubits.

    The partition depends only on n, not on the graph, so it is cached.
    """
    mons = enumerate_monomials(n, d=2)
    return mons, constraint_classes(mons)
