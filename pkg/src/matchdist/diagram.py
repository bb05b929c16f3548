"""Persistence diagrams of one-parameter specializations of a presentation.

Given a presentation P and one real (rational) key per row and per column,
the standard column reduction pairs each nonzero reduced column with its
pivot row: births are row keys, finite deaths are column keys, rows that
never become a pivot are essential classes dying at +infinity.  Pairs with
birth == death carry no persistence and are dropped.

``rank_oracle`` computes the rank of the structure map between two
parameters directly from the definition with independent Gaussian
elimination; it exists as a cross-check on the reduction and is kept free
of any code shared with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .numeric import INF, ExtendedRational, Rational, is_inf
from .presentation import Grade, Presentation


class ReductionInputError(Exception):
    """Keys passed to the reduction are inconsistent with the presentation."""


@dataclass(frozen=True)
class DiagramPoint:
    """One bar: (birth, death) with the 2-d grades that produced the keys.

    death_grade is None for essential points (death == INF); both grade
    tags are None for diagrams loaded from plain text.
    """

    birth: Rational
    death: ExtendedRational
    birth_grade: Optional[Grade] = None
    death_grade: Optional[Grade] = None


Diagram = Tuple[DiagramPoint, ...]


def _check_keys(pres: Presentation, row_keys, col_keys):
    if len(row_keys) != pres.generators or len(col_keys) != pres.relations:
        raise ReductionInputError(
            f"expected {pres.generators} row keys and {pres.relations} column keys, "
            f"got {len(row_keys)} and {len(col_keys)}"
        )
    for j, col in enumerate(pres.columns):
        for i, _ in col:
            if not row_keys[i] <= col_keys[j]:
                raise ReductionInputError(
                    f"key condition violated at entry ({i}, {j}): "
                    f"row key {row_keys[i]} > column key {col_keys[j]}"
                )


def reduce(pres: Presentation, row_keys: Sequence[Rational],
           col_keys: Sequence[Rational], validate: bool = True) -> Diagram:
    """Diagram of the one-parameter specialization with the given keys.

    Rows and columns are ordered by (key, original index); the stable
    tie-break makes the output deterministic, and permuting equal-key rows
    or columns never changes the (birth, death) multiset.
    """
    if validate:
        _check_keys(pres, row_keys, col_keys)
    k = pres.generators
    row_order = sorted(range(k), key=lambda i: (row_keys[i], i))
    pos_of_row = [0] * k
    for pos, i in enumerate(row_order):
        pos_of_row[i] = pos
    col_order = sorted(range(pres.relations), key=lambda j: (col_keys[j], j))

    p = pres.field
    pairs = []  # (original row, column) in processing order
    if p == 2:
        pivot_mask = {}
        for j in col_order:
            vec = 0
            for i, _ in pres.columns[j]:
                vec |= 1 << pos_of_row[i]
            while vec:
                piv = vec.bit_length() - 1
                owner = pivot_mask.get(piv)
                if owner is None:
                    pivot_mask[piv] = vec
                    pairs.append((row_order[piv], j))
                    break
                vec ^= owner
    else:
        pivot_vec = {}
        for j in col_order:
            vec = {pos_of_row[i]: c for i, c in pres.columns[j]}
            while vec:
                piv = max(vec)
                owner = pivot_vec.get(piv)
                if owner is None:
                    pivot_vec[piv] = vec
                    pairs.append((row_order[piv], j))
                    break
                factor = vec[piv] * pow(owner[piv], -1, p) % p
                for pos, c in owner.items():
                    nv = (vec.get(pos, 0) - factor * c) % p
                    if nv:
                        vec[pos] = nv
                    elif pos in vec:
                        del vec[pos]

    points = []
    paired_rows = set()
    for i, j in pairs:
        paired_rows.add(i)
        birth, death = row_keys[i], col_keys[j]
        if birth != death:
            points.append(DiagramPoint(birth, death,
                                       pres.row_grades[i], pres.col_grades[j]))
    for i in range(k):
        if i not in paired_rows:
            points.append(DiagramPoint(row_keys[i], INF, pres.row_grades[i], None))
    return tuple(points)


def essential_count(pres: Presentation) -> int:
    """Number of infinite bars: generators minus matrix rank over GF(p).

    This does not depend on the keys, hence not on the slice.
    """
    vectors = []
    for col in pres.columns:
        v = [0] * pres.generators
        for i, c in col:
            v[i] = c
        vectors.append(v)
    return pres.generators - _rank(vectors, pres.field, pres.generators)


def count_spanning(diagram: Diagram, a, b) -> int:
    """Number of bars with birth <= a and death > b (a < b)."""
    n = 0
    for pt in diagram:
        if pt.birth <= a and (is_inf(pt.death) or b < pt.death):
            n += 1
    return n


def rank_oracle(pres: Presentation, row_keys: Sequence[Rational],
                col_keys: Sequence[Rational], a, b) -> int:
    """Rank of the structure map from parameter a to parameter b, a <= b.

    Computed from the definition: the image of span(generators alive at a)
    in the quotient by span(relations at b).  Independent of `reduce`.
    """
    if not a <= b:
        raise ReductionInputError(f"need a <= b, got a={a}, b={b}")
    _check_keys(pres, row_keys, col_keys)
    k = pres.generators
    rel_b = []
    for j, col in enumerate(pres.columns):
        if col_keys[j] <= b:
            v = [0] * k
            for i, c in col:
                v[i] = c
            rel_b.append(v)
    gen_a = []
    for i in range(k):
        if row_keys[i] <= a:
            v = [0] * k
            v[i] = 1
            gen_a.append(v)
    return _rank(rel_b + gen_a, pres.field, k) - _rank(rel_b, pres.field, k)


def _rank(vectors, p: int, dim: int) -> int:
    """Rank over GF(p) by leading-entry elimination (first nonzero index)."""
    basis = {}
    for v in vectors:
        v = [x % p for x in v]
        while True:
            lead = None
            for i in range(dim):
                if v[i]:
                    lead = i
                    break
            if lead is None:
                break
            if lead not in basis:
                basis[lead] = v
                break
            b = basis[lead]
            factor = v[lead] * pow(b[lead], -1, p) % p
            v = [(x - factor * y) % p for x, y in zip(v, b)]
    return len(basis)
