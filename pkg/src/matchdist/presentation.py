"""Finitely presented two-parameter persistence modules over a prime field.

A presentation is a k x m sparse matrix over GF(p): rows are generators,
columns are relations, and every row/column carries a grade in Q^2.  A
nonzero entry at (i, j) forces grade(row i) <= grade(column j) in the
product partial order; this is validated at construction.

Text format (one presentation per file, `#` starts a comment):

    bpres 1
    field 2
    generators 1
    0 0
    relations 2
    1 0 ; 0:1
    0 1 ; 0:1

Grades are rationals written `a/b` or as bare integers; decimals are
rejected.  Each relation line is `<x> <y> ; <i>:<c> ...` where `i` is a
row index and `c` an integer coefficient, reduced mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Tuple

from gmpy2 import mpq

from .numeric import Rational, format_scalar, parse_scalar


class PresentationError(ValueError):
    """Invalid presentation data (validation or parse failure)."""


class ParseError(PresentationError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Grade:
    """A point of Q^2; `<=` is the product partial order, not a total one."""

    x: Rational
    y: Rational

    def __post_init__(self):
        object.__setattr__(self, "x", mpq(self.x))
        object.__setattr__(self, "y", mpq(self.y))

    def __le__(self, other: "Grade") -> bool:
        return self.x <= other.x and self.y <= other.y

    def __repr__(self):
        return f"Grade({format_scalar(self.x)}, {format_scalar(self.y)})"


Role = Literal["generator", "relation"]

# column entry: (row index, coefficient in 1..p-1), entries sorted by row
Column = Tuple[Tuple[int, int], ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Presentation:
    """Graded presentation of a two-parameter persistence module.

    Construction normalizes coefficients mod `field`, sorts each column's
    entries by row index, and validates the grade condition.
    """

    field: int
    row_grades: Tuple[Grade, ...]
    col_grades: Tuple[Grade, ...]
    columns: Tuple[Column, ...]

    def __post_init__(self):
        if not isinstance(self.field, int) or not _is_prime(self.field):
            raise PresentationError(f"field characteristic must be prime, got {self.field}")
        object.__setattr__(self, "row_grades", tuple(self.row_grades))
        object.__setattr__(self, "col_grades", tuple(self.col_grades))
        k = len(self.row_grades)
        if len(self.columns) != len(self.col_grades):
            raise PresentationError(
                f"{len(self.col_grades)} relation grades but {len(self.columns)} columns"
            )
        norm_cols = []
        for j, col in enumerate(self.columns):
            seen = set()
            entries = []
            for i, coeff in col:
                if not 0 <= i < k:
                    raise PresentationError(f"column {j}: row index {i} out of range")
                if i in seen:
                    raise PresentationError(f"column {j}: duplicate row index {i}")
                seen.add(i)
                c = coeff % self.field
                if c == 0:
                    raise PresentationError(
                        f"column {j}: coefficient {coeff} vanishes mod {self.field}"
                    )
                entries.append((i, c))
            entries.sort()
            norm_cols.append(tuple(entries))
        object.__setattr__(self, "columns", tuple(norm_cols))
        for j, col in enumerate(self.columns):
            for i, _ in col:
                if not self.row_grades[i] <= self.col_grades[j]:
                    raise PresentationError(
                        f"grade condition violated at entry ({i}, {j}): "
                        f"{self.row_grades[i]!r} is not <= {self.col_grades[j]!r}"
                    )

    @property
    def generators(self) -> int:
        return len(self.row_grades)

    @property
    def relations(self) -> int:
        return len(self.col_grades)


def grades(p: Presentation) -> Tuple[Tuple[Grade, Role], ...]:
    """Multiset of all grades of P with their generator/relation role."""
    out = [(g, "generator") for g in p.row_grades]
    out += [(g, "relation") for g in p.col_grades]
    return tuple(out)


# -- text format --------------------------------------------------------------


def parse_presentation(text: str) -> Presentation:
    lines = text.splitlines()
    # (line number, content) with comments stripped and blanks dropped
    items = []
    for n, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            items.append((n, body, raw))
    pos = 0

    def take(expected: str):
        nonlocal pos
        if pos >= len(items):
            raise ParseError(f"unexpected end of input, expected {expected}",
                             line=len(lines) + 1)
        item = items[pos]
        pos += 1
        return item

    def take_count(keyword: str) -> int:
        n, body, raw = take(f"'{keyword} <count>'")
        parts = body.split()
        if len(parts) != 2 or parts[0] != keyword:
            raise ParseError(f"expected '{keyword} <count>', got {body!r}", line=n)
        try:
            count = int(parts[1])
        except ValueError:
            raise ParseError(f"bad count {parts[1]!r}", line=n,
                             column=raw.find(parts[1]) + 1) from None
        if count < 0:
            raise ParseError(f"negative count {count}", line=n)
        return count

    def scalar_at(token: str, n: int, raw: str):
        try:
            return parse_scalar(token)
        except ValueError as e:
            raise ParseError(str(e), line=n, column=raw.find(token) + 1) from None

    n, body, _ = take("'bpres 1' header")
    if body.split() != ["bpres", "1"]:
        raise ParseError(f"expected 'bpres 1' header, got {body!r}", line=n)

    n, body, raw = take("'field <prime>'")
    parts = body.split()
    if len(parts) != 2 or parts[0] != "field":
        raise ParseError(f"expected 'field <prime>', got {body!r}", line=n)
    try:
        field = int(parts[1])
    except ValueError:
        raise ParseError(f"bad field characteristic {parts[1]!r}", line=n,
                         column=raw.find(parts[1]) + 1) from None
    if not _is_prime(field):
        raise ParseError(f"field characteristic must be prime, got {field}", line=n)

    gens = take_count("generators")
    row_grades = []
    for _ in range(gens):
        n, body, raw = take("generator grade '<x> <y>'")
        parts = body.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<x> <y>', got {body!r}", line=n)
        row_grades.append(Grade(scalar_at(parts[0], n, raw), scalar_at(parts[1], n, raw)))

    rels = take_count("relations")
    col_grades = []
    columns = []
    for _ in range(rels):
        n, body, raw = take("relation line '<x> <y> ; <i>:<c> ...'")
        if ";" not in body:
            raise ParseError(f"relation line missing ';': {body!r}", line=n)
        head, _, tail = body.partition(";")
        parts = head.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<x> <y>' before ';', got {head.strip()!r}", line=n)
        col_grades.append(Grade(scalar_at(parts[0], n, raw), scalar_at(parts[1], n, raw)))
        entries = []
        for token in tail.split():
            if ":" not in token:
                raise ParseError(f"bad entry {token!r}, expected '<i>:<c>'", line=n,
                                 column=raw.find(token) + 1)
            si, _, sc = token.partition(":")
            try:
                entries.append((int(si), int(sc)))
            except ValueError:
                raise ParseError(f"bad entry {token!r}, expected '<i>:<c>'", line=n,
                                 column=raw.find(token) + 1) from None
        columns.append(tuple(entries))

    if pos != len(items):
        n, body, _ = items[pos]
        raise ParseError(f"trailing content {body!r}", line=n)

    try:
        return Presentation(field, tuple(row_grades), tuple(col_grades), tuple(columns))
    except ParseError:
        raise
    except PresentationError as e:
        raise ParseError(str(e)) from None


def format_presentation(p: Presentation) -> str:
    out = ["bpres 1", f"field {p.field}", f"generators {p.generators}"]
    for g in p.row_grades:
        out.append(f"{format_scalar(g.x)} {format_scalar(g.y)}")
    out.append(f"relations {p.relations}")
    for g, col in zip(p.col_grades, p.columns):
        entries = " ".join(f"{i}:{c}" for i, c in col)
        line = f"{format_scalar(g.x)} {format_scalar(g.y)} ;"
        if entries:
            line += " " + entries
        out.append(line)
    return "\n".join(out) + "\n"


def load_presentation(path) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_presentation(fh.read())


# -- grade transformations (used by invariance checks and experiments) --------


def translate(p: Presentation, dx, dy) -> Presentation:
    dx, dy = mpq(dx), mpq(dy)
    move = lambda g: Grade(g.x + dx, g.y + dy)
    return Presentation(p.field, tuple(move(g) for g in p.row_grades),
                        tuple(move(g) for g in p.col_grades), p.columns)


def scale(p: Presentation, c) -> Presentation:
    c = mpq(c)
    if c <= 0:
        raise PresentationError(f"scale factor must be positive, got {format_scalar(c)}")
    mul = lambda g: Grade(c * g.x, c * g.y)
    return Presentation(p.field, tuple(mul(g) for g in p.row_grades),
                        tuple(mul(g) for g in p.col_grades), p.columns)


def swap_axes(p: Presentation) -> Presentation:
    flip = lambda g: Grade(g.y, g.x)
    return Presentation(p.field, tuple(flip(g) for g in p.row_grades),
                        tuple(flip(g) for g in p.col_grades), p.columns)
