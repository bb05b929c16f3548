"""Restriction of modules to positive-slope lines and the slice-wise distance F.

A slice is the line y = s*x + t with s > 0.  A grade strictly below the
line is pushed vertically onto it, a grade on or above is pushed
horizontally.  Arc-length position along the line times the slice weight
w = 1/sqrt(1+s^2) (s >= 1) resp. 1/sqrt(1+1/s^2) (s < 1) collapses to a
closed rational form, the *scaled coordinate*:

    s >= 1:  x            below the line      s < 1:  s*x       below
             (y - t)/s    on or above                 y - t     on or above

All slice computations happen in scaled coordinates, so no square root is
ever materialized and the weighted bottleneck distance of the restrictions
equals the plain bottleneck distance of the scaled diagrams.  eval_F
returns that distance together with the pair of 2-d grades realizing it
(weight c = 1 for a cross-module pair, 1/2 within one module).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from gmpy2 import mpq

from . import bottleneck as _bn
from .diagram import Diagram, essential_count, reduce as _reduce
from .numeric import INF, ExtendedRational, Rational, is_inf
from .presentation import Grade, Presentation


class SliceError(ValueError):
    """Slope/offset pair not defining a valid slice (needs s > 0)."""


@dataclass(frozen=True)
class Slice:
    s: Rational
    t: Rational

    def __post_init__(self):
        object.__setattr__(self, "s", mpq(self.s))
        object.__setattr__(self, "t", mpq(self.t))
        if self.s <= 0:
            raise SliceError(f"slice slope must be positive, got {self.s}")


class PairPosition(Enum):
    """Position of an ordered grade pair relative to a slice.

    "above" means on or above the line; only the mixed cases depend on
    which point is which.
    """

    BOTH_ABOVE = "both_above"
    BOTH_BELOW = "both_below"
    FIRST_ABOVE = "first_above"
    SECOND_ABOVE = "second_above"


@dataclass(frozen=True)
class DeltaDescriptor:
    """Grade pair (p, q) with combinatorial weight c in {1/2, 1}."""

    p: Grade
    q: Grade
    c: Rational

    def __post_init__(self):
        c = mpq(self.c)
        if c != 1 and c != mpq(1, 2):
            raise ValueError(f"descriptor weight must be 1 or 1/2, got {c}")
        object.__setattr__(self, "c", c)


def is_above(g: Grade, sl: Slice) -> bool:
    """True if g lies on or above the slice line."""
    return g.y >= sl.s * g.x + sl.t


def push(g: Grade, sl: Slice) -> Grade:
    """Closest point of the slice that dominates g (product order)."""
    if is_above(g, sl):
        return Grade((g.y - sl.t) / sl.s, g.y)
    return Grade(g.x, sl.s * g.x + sl.t)


def scaled_coordinate(g: Grade, sl: Slice) -> Rational:
    if sl.s >= 1:
        if is_above(g, sl):
            return (g.y - sl.t) / sl.s
        return g.x
    if is_above(g, sl):
        return g.y - sl.t
    return sl.s * g.x


def classify(p: Grade, q: Grade, sl: Slice) -> PairPosition:
    pa = is_above(p, sl)
    qa = is_above(q, sl)
    if pa and qa:
        return PairPosition.BOTH_ABOVE
    if pa:
        return PairPosition.FIRST_ABOVE
    if qa:
        return PairPosition.SECOND_ABOVE
    return PairPosition.BOTH_BELOW


def scaled_delta(d: DeltaDescriptor, sl: Slice) -> Rational:
    """Weighted scaled distance c * |coord(p) - coord(q)| along the slice."""
    return d.c * abs(scaled_coordinate(d.p, sl) - scaled_coordinate(d.q, sl))


def _scaled_keys(pres: Presentation, s, t):
    ge1 = s >= 1
    keys = []
    for grades in (pres.row_grades, pres.col_grades):
        ks = []
        for g in grades:
            if g.y >= s * g.x + t:
                ks.append((g.y - t) / s if ge1 else g.y - t)
            else:
                ks.append(g.x if ge1 else s * g.x)
        keys.append(ks)
    return keys


def slice_diagram(pres: Presentation, sl: Slice) -> Diagram:
    """Diagram of the restriction to sl, in scaled coordinates, tags kept."""
    row_keys, col_keys = _scaled_keys(pres, sl.s, sl.t)
    # pushing is monotone, so the key condition must transfer; keep it checked
    return _reduce(pres, row_keys, col_keys, validate=True)


@dataclass(frozen=True)
class FValue:
    """Slice-wise distance with its realizing descriptor.

    value is +inf iff the two restrictions have different numbers of
    infinite bars; pair/position are None exactly when the value is +inf
    or both diagrams are empty (value 0).
    """

    value: ExtendedRational
    pair: Optional[DeltaDescriptor]
    position: Optional[PairPosition]


def _descriptor(wit: _bn.BottleneckWitness) -> DeltaDescriptor:
    if wit.kind == "matchedBirth":
        return DeltaDescriptor(wit.point_a.birth_grade, wit.point_b.birth_grade, mpq(1))
    if wit.kind == "matchedDeath":
        return DeltaDescriptor(wit.point_a.death_grade, wit.point_b.death_grade, mpq(1))
    pt = wit.point_a if wit.point_a is not None else wit.point_b
    return DeltaDescriptor(pt.birth_grade, pt.death_grade, mpq(1, 2))


def eval_F(pm: Presentation, pn: Presentation, sl: Slice) -> FValue:
    """Weighted bottleneck distance of the two restrictions at sl."""
    dm = slice_diagram(pm, sl)
    dn = slice_diagram(pn, sl)
    value, wit = _bn.bottleneck(dm, dn)
    if is_inf(value) or wit is None:
        return FValue(value, None, None)
    pair = _descriptor(wit)
    return FValue(value, pair, classify(pair.p, pair.q, sl))


class SliceEvaluator:
    """Repeated evaluation of F for a fixed pair of presentations.

    value_if_exceeds answers "is F(slice) > threshold, and if so what is
    it" with a single feasibility matching in the common case; the full
    candidate search runs only on improvement.  Values agree with eval_F.
    """

    def __init__(self, pm: Presentation, pn: Presentation):
        self.pm = pm
        self.pn = pn
        # the number of infinite bars does not depend on the slice
        self.forced_inf = essential_count(pm) != essential_count(pn)

    def value_if_exceeds(self, s, t, threshold) -> Optional[ExtendedRational]:
        """F(s, t) when it exceeds threshold, else None."""
        if self.forced_inf:
            return INF
        rm, cm = _scaled_keys(self.pm, s, t)
        dm = _reduce(self.pm, rm, cm, validate=False)
        rn, cn = _scaled_keys(self.pn, s, t)
        dn = _reduce(self.pn, rn, cn, validate=False)
        if _bn._matching(dm, dn, threshold) is not None:
            return None
        cand = [c for c in _bn.candidates(dm, dn) if not is_inf(c) and c > threshold]
        lo, hi = 0, len(cand) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if _bn._matching(dm, dn, cand[mid]) is not None:
                hi = mid
            else:
                lo = mid + 1
        if lo > hi or _bn._matching(dm, dn, cand[lo]) is None:
            raise AssertionError("no feasible candidate above an infeasible threshold")
        return cand[lo]

    def full(self, s, t) -> FValue:
        return eval_F(self.pm, self.pn, Slice(s, t))


def unscale_factor_float(sl: Slice) -> float:
    """1/w as a float: multiply scaled coordinates by this for display only."""
    s = float(sl.s)
    if s >= 1.0:
        return (1.0 + s * s) ** 0.5
    return (1.0 + 1.0 / (s * s)) ** 0.5
