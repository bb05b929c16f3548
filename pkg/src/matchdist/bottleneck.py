"""Bottleneck distance between persistence diagrams, exact over the rationals.

cost(matching) = max over matched pairs of max(|birth diff|, |death diff|)
and over unmatched points of half their persistence, with inf - inf = 0.
The optimum is always attained at one of finitely many candidate values
(coordinate differences and half-persistences), so the distance is found
by binary search over candidates with a feasibility matching per probe.

Feasibility at eps uses the classical diagonal-augmented bipartite graph:
every point gets a diagonal partner usable iff its half-persistence is
<= eps, diagonal-diagonal edges are free, and eps is feasible iff the
augmented graph has a perfect matching.  This correctly allows a point
with half-persistence > eps to match a point with small persistence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from gmpy2 import mpq

from .diagram import DiagramPoint
from .numeric import (INF, ExtendedRational, PlusInfinity, abs_diff, half,
                      is_inf, scalar_lt)


@dataclass(frozen=True)
class BottleneckWitness:
    """Matching element realizing the distance.

    kind "matchedBirth"/"matchedDeath": point_a (first diagram) is matched
    to point_b (second diagram) and the birth resp. death difference attains
    the cost.  kind "unmatched": the single non-None point is unmatched and
    pays half its persistence.
    """

    kind: str
    point_a: Optional[DiagramPoint] = None
    point_b: Optional[DiagramPoint] = None


def match_cost(u: DiagramPoint, v: DiagramPoint) -> ExtendedRational:
    db = abs(u.birth - v.birth)
    dd = abs_diff(u.death, v.death)
    return dd if scalar_lt(db, dd) else db


def witness_cost(w: BottleneckWitness) -> ExtendedRational:
    if w.kind == "unmatched":
        pt = w.point_a if w.point_a is not None else w.point_b
        return half(INF if is_inf(pt.death) else pt.death - pt.birth)
    return match_cost(w.point_a, w.point_b)


def candidates(d1: Sequence[DiagramPoint], d2: Sequence[DiagramPoint]) -> list:
    """Ascending candidate values for the distance; INF last when present."""
    finite = {mpq(0)}
    has_inf = False
    for pt in list(d1) + list(d2):
        if is_inf(pt.death):
            has_inf = True
        else:
            finite.add((pt.death - pt.birth) / 2)
    for u in d1:
        for v in d2:
            finite.add(abs(u.birth - v.birth))
            dd = abs_diff(u.death, v.death)
            if is_inf(dd):
                has_inf = True
            else:
                finite.add(dd)
    out = sorted(finite)
    if has_inf:
        out.append(INF)
    return out


def _cost_le(u: DiagramPoint, v: DiagramPoint, eps) -> bool:
    d = u.birth - v.birth
    if (d if d >= 0 else -d) > eps:
        return False
    ud, vd = u.death, v.death
    ui = isinstance(ud, PlusInfinity)
    vi = isinstance(vd, PlusInfinity)
    if ui or vi:
        return ui and vi
    d = ud - vd
    return (d if d >= 0 else -d) <= eps


def _matching(d1, d2, eps) -> Optional[list]:
    """Perfect matching of the diagonal-augmented graph at eps, or None.

    Left vertices: d1 points, then diagonal partners of d2 points.
    Right vertices: d2 points, then diagonal partners of d1 points.
    Returns matchR (right vertex -> left vertex) when perfect.
    """
    n1, n2 = len(d1), len(d2)
    two_eps = 2 * eps
    ok1 = [not is_inf(u.death) and u.death - u.birth <= two_eps for u in d1]
    ok2 = [not is_inf(v.death) and v.death - v.birth <= two_eps for v in d2]
    total = n1 + n2
    match_r = [-1] * total

    def neighbors(u):
        if u < n1:
            pu = d1[u]
            for j in range(n2):
                if _cost_le(pu, d2[j], eps):
                    yield j
            if ok1[u]:
                yield n2 + u
        else:
            j0 = u - n1
            if ok2[j0]:
                yield j0
            for i in range(n1):
                yield n2 + i

    def try_augment(u, visited) -> bool:
        for v in neighbors(u):
            if v in visited:
                continue
            visited.add(v)
            if match_r[v] == -1 or try_augment(match_r[v], visited):
                match_r[v] = u
                return True
        return False

    for u in range(total):
        if not try_augment(u, set()):
            return None
    return match_r


def feasible(d1: Sequence[DiagramPoint], d2: Sequence[DiagramPoint], eps) -> bool:
    """True iff some partial matching of cost <= eps exists (see module doc)."""
    if is_inf(eps):
        return True
    return _matching(tuple(d1), tuple(d2), mpq(eps)) is not None


def bottleneck(d1: Sequence[DiagramPoint], d2: Sequence[DiagramPoint]
               ) -> Tuple[ExtendedRational, Optional[BottleneckWitness]]:
    """Distance and a realizing witness (None only when both diagrams are empty).

    The distance is +infinity iff the diagrams have different numbers of
    infinite-death points.
    """
    d1, d2 = tuple(d1), tuple(d2)
    inf1 = [u for u in d1 if is_inf(u.death)]
    inf2 = [v for v in d2 if is_inf(v.death)]
    if len(inf1) != len(inf2):
        if len(inf1) > len(inf2):
            wit = BottleneckWitness("unmatched", point_a=inf1[0])
        else:
            wit = BottleneckWitness("unmatched", point_b=inf2[0])
        return INF, wit
    if not d1 and not d2:
        return mpq(0), None

    cand = candidates(d1, d2)
    if is_inf(cand[-1]):
        cand.pop()
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _matching(d1, d2, cand[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    eps = cand[lo]
    match_r = _matching(d1, d2, eps)
    if match_r is None:
        raise AssertionError("no feasible matching at the largest candidate")
    return eps, _extract_witness(d1, d2, match_r, eps)


def _extract_witness(d1, d2, match_r, eps) -> BottleneckWitness:
    n1, n2 = len(d1), len(d2)
    match_l = {}
    for r, l in enumerate(match_r):
        match_l[l] = r
    # first element (in d1 order, then remaining d2 points) whose cost is eps
    for i, u in enumerate(d1):
        r = match_l[i]
        if r < n2:
            v = d2[r]
            db = abs(u.birth - v.birth)
            dd = abs_diff(u.death, v.death)
            if scalar_lt(db, dd):
                if dd == eps:
                    return BottleneckWitness("matchedDeath", point_a=u, point_b=v)
            elif db == eps:
                return BottleneckWitness("matchedBirth", point_a=u, point_b=v)
        elif half(u.death - u.birth) == eps:
            return BottleneckWitness("unmatched", point_a=u)
    for j, v in enumerate(d2):
        if match_r[j] >= n1 and half(v.death - v.birth) == eps:
            return BottleneckWitness("unmatched", point_b=v)
    raise AssertionError("optimal matching contains no element of maximal cost")
