"""Interval, circular-arc, and fuzzy circular-arc intersection models.

Coordinates are integers.  Arc computations run in *doubled* coordinates
(every endpoint multiplied by two) so that midpoints between endpoints are
exact integers; this makes one-point intersection, containment, and circle
coverage exactly decidable with no floating point anywhere.  Points exposed
through the public API (equivalence points, cut points) are Fractions whose
denominator divides two.

An arc (s, t) on a circle of circumference C is the closed set of points
traversed clockwise (increasing coordinates, wrapping at C) from s to t.
Single-point arcs and full-circle arcs are not representable and rejected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, InternalError

# ---------------------------------------------------------------------------
# model types


@dataclass(frozen=True)
class Interval:
    id: int
    l: int
    r: int

    def __post_init__(self):
        if self.l >= self.r:
            raise InputError(f"interval {self.id}: need l < r, got [{self.l},{self.r}]")


class IntervalModel:
    """Closed intervals on a line; item ids are exactly 0..n-1."""

    __slots__ = ("items",)

    def __init__(self, items):
        items = sorted(items, key=lambda it: it.id)
        if [it.id for it in items] != list(range(len(items))):
            raise InputError("interval ids must be exactly 0..n-1")
        object.__setattr__(self, "items", tuple(items))

    def __len__(self):
        return len(self.items)

    def __repr__(self):
        return f"IntervalModel(n={len(self.items)})"


@dataclass(frozen=True)
class Arc:
    id: int
    s: int
    t: int


class ArcModel:
    """Closed arcs on a circle of integer circumference; ids exactly 0..n-1."""

    __slots__ = ("arcs", "circumference")

    def __init__(self, arcs, circumference: int):
        if circumference <= 0:
            raise InputError(f"circumference must be positive, got {circumference}")
        arcs = sorted(arcs, key=lambda a: a.id)
        if [a.id for a in arcs] != list(range(len(arcs))):
            raise InputError("arc ids must be exactly 0..n-1")
        for a in arcs:
            if not (0 <= a.s < circumference and 0 <= a.t < circumference):
                raise InputError(
                    f"arc {a.id}: endpoints must lie in [0,{circumference}), "
                    f"got ({a.s},{a.t})"
                )
            if a.s == a.t:
                raise InputError(
                    f"arc {a.id}: single-point and full-circle arcs are not allowed"
                )
        object.__setattr__(self, "arcs", tuple(arcs))
        object.__setattr__(self, "circumference", circumference)

    def __len__(self):
        return len(self.arcs)

    def __repr__(self):
        return f"ArcModel(n={len(self.arcs)}, C={self.circumference})"


@dataclass(frozen=True)
class FuzzyArcModel:
    """Arcs plus an explicit edge/non-edge resolution for one-point pairs.

    The resolutions mapping must cover exactly the pairs of arcs whose
    intersection is a single point (True = edge); anything missing or
    extraneous is rejected so modeling errors cannot hide behind defaults.
    """

    arcs: ArcModel
    resolutions: dict = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for (i, j), bit in self.resolutions.items():
            if i == j:
                raise InputError(f"fuzzy resolution for pair ({i},{j}) with i = j")
            key = (min(i, j), max(i, j))
            if key in norm and norm[key] != bool(bit):
                raise InputError(f"conflicting resolutions for pair {key}")
            norm[key] = bool(bit)
        object.__setattr__(self, "resolutions", norm)
        n = len(self.arcs)
        expected = {
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if intersection_kind(self.arcs, i, j) == "single-point"
        }
        missing = expected - set(norm)
        extra = set(norm) - expected
        if missing:
            pair = min(missing)
            raise InputError(
                f"missing fuzzy resolution for one-point pair {pair}"
            )
        if extra:
            pair = min(extra)
            raise InputError(
                f"resolution given for pair {pair} whose arcs do not intersect "
                f"in exactly one point"
            )


@dataclass(frozen=True)
class ModelReport:
    proper: bool
    strict: bool
    almost_proper: bool
    almost_strict: bool
    long: bool
    covers_circle: bool


@dataclass(frozen=True)
class CutResult:
    """Outcome of cutting a circle open at a point.

    ``intervals`` holds the surviving arcs unrolled onto a line with the cut
    point as origin, renumbered 0..m-1 in ascending original-id order;
    ``kept_ids[i]`` is the original arc id of interval i.  Interval
    coordinates are in the doubled scale (twice the circular distance from
    the cut point), which is harmless for intersection structure.
    """

    intervals: IntervalModel
    kept_ids: tuple[int, ...]
    removed_ids: tuple[int, ...]


# ---------------------------------------------------------------------------
# exact cyclic segment machinery (doubled coordinates)


def _arc_segments(s2: int, t2: int, c2: int) -> tuple[tuple[int, int], ...]:
    """Closed arc clockwise s->t as non-wrapping segments within [0, c2]."""
    if s2 < t2:
        return ((s2, t2),)
    if t2 == 0:
        return ((s2, c2),)
    return ((s2, c2), (0, t2))


def _segments_of(model: ArcModel, i: int) -> tuple[tuple[int, int], ...]:
    a = model.arcs[i]
    return _arc_segments(2 * a.s, 2 * a.t, 2 * model.circumference)


def _canon_cyclic(pieces, c2: int) -> tuple[tuple[int, int], ...]:
    """Canonical form of a union of closed pieces of the circle.

    Input pieces are (lo, hi) with 0 <= lo <= hi <= c2 (degenerate points
    allowed).  Returns () for the empty set, ((0, c2),) for the full circle,
    otherwise maximally merged pieces sorted by start; a piece crossing the
    origin is represented with hi > c2.  Two unions are equal as point sets
    iff their canonical forms are equal.
    """
    norm = []
    for lo, hi in pieces:
        if lo == hi:
            p = lo % c2
            norm.append((p, p))
        else:
            norm.append((lo, hi))
    if not norm:
        return ()
    norm.sort()
    merged = [list(norm[0])]
    for lo, hi in norm[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if len(merged) >= 2 and merged[0][0] == 0 and merged[-1][1] == c2:
        first = merged.pop(0)
        merged[-1][1] = c2 + first[1]
    if len(merged) == 1 and merged[0][1] - merged[0][0] >= c2:
        return ((0, c2),)
    return tuple((lo, hi) for lo, hi in merged)


_FULL = "full"


def _union_canon(model: ArcModel, ids) -> tuple:
    pieces = []
    for i in ids:
        pieces.extend(_segments_of(model, i))
    return _canon_cyclic(pieces, 2 * model.circumference)


def _intersection_pieces(segs_a, segs_b, c2):
    # intersect on two unrolled copies of the circle so that touches across
    # the 0 == c2 seam are not missed, then fold back into [0, c2]
    ext_a = list(segs_a) + [(lo + c2, hi + c2) for lo, hi in segs_a]
    ext_b = list(segs_b) + [(lo + c2, hi + c2) for lo, hi in segs_b]
    out = []
    for alo, ahi in ext_a:
        for blo, bhi in ext_b:
            lo, hi = max(alo, blo), min(ahi, bhi)
            if lo <= hi:
                if lo >= c2:
                    lo, hi = lo - c2, hi - c2
                if hi > c2:
                    out.append((lo, c2))
                    out.append((0, hi - c2))
                else:
                    out.append((lo, hi))
    return out


def intersection_kind(model: ArcModel, i: int, j: int) -> str:
    """Classify the intersection of two arcs: empty, single-point, or multi."""
    c2 = 2 * model.circumference
    canon = _canon_cyclic(
        _intersection_pieces(_segments_of(model, i), _segments_of(model, j), c2), c2
    )
    if not canon:
        return "empty"
    if len(canon) == 1 and canon[0][0] == canon[0][1]:
        return "single-point"
    return "multi"


def arc_contains(model: ArcModel, i: int, j: int) -> bool:
    """Point-set containment: arc j a subset of arc i."""
    c2 = 2 * model.circumference
    inter = _canon_cyclic(
        _intersection_pieces(_segments_of(model, i), _segments_of(model, j), c2), c2
    )
    return inter == _canon_cyclic(list(_segments_of(model, j)), c2)


def covers_circle(model: ArcModel, ids=None) -> bool:
    ids = range(len(model.arcs)) if ids is None else ids
    return _union_canon(model, ids) == ((0, 2 * model.circumference),)


def point_in_arc(model: ArcModel, i: int, p2: int) -> bool:
    """Membership of the doubled-coordinate point p2 in closed arc i."""
    c2 = 2 * model.circumference
    p2 %= c2
    for lo, hi in _segments_of(model, i):
        if lo <= p2 <= hi:
            return True
        if hi == c2 and p2 == 0:
            return True
    return False


# ---------------------------------------------------------------------------
# realization


def _interval_edge(a: Interval, b: Interval) -> bool:
    return max(a.l, b.l) <= min(a.r, b.r)


def realize(model) -> "Graph":
    """Intersection graph of a model; vertex v is the item with id v.

    For fuzzy models, one-point intersections become edges exactly when the
    resolution says so.
    """
    from .graphs import Graph

    if isinstance(model, IntervalModel):
        n = len(model)
        es = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if _interval_edge(model.items[i], model.items[j])
        ]
        return Graph(n, es)
    if isinstance(model, ArcModel):
        n = len(model)
        es = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if intersection_kind(model, i, j) != "empty"
        ]
        return Graph(n, es)
    if isinstance(model, FuzzyArcModel):
        n = len(model.arcs)
        es = []
        for i in range(n):
            for j in range(i + 1, n):
                kind = intersection_kind(model.arcs, i, j)
                if kind == "multi":
                    es.append((i, j))
                elif kind == "single-point" and model.resolutions[(i, j)]:
                    es.append((i, j))
        return Graph(n, es)
    raise InputError(f"cannot realize {type(model).__name__}")


# ---------------------------------------------------------------------------
# validation


def validate_interval_model(model: IntervalModel) -> ModelReport:
    """Interval models live on a line: long holds and coverage fails by convention."""
    items = model.items
    proper = True
    almost_proper = True
    for a, b in itertools.permutations(items, 2):
        if a.l <= b.l and b.r <= a.r:  # b inside a
            proper = False
            if (a.l, a.r) != (b.l, b.r):
                almost_proper = False
    endpoints = [(it.l, it.id) for it in items] + [(it.r, it.id) for it in items]
    values: dict[int, set[int]] = {}
    for v, owner in endpoints:
        values.setdefault(v, set()).add(owner)
    strict = all(
        len([1 for w, _ in endpoints if w == v]) == 1 for v in values
    )
    groups: dict[tuple[int, int], list[int]] = {}
    for it in items:
        groups.setdefault((it.l, it.r), []).append(it.id)
    almost_strict = True
    for (l, r), ids in groups.items():
        if len(ids) < 2:
            continue
        outside_l = values.get(l, set()) - set(ids)
        outside_r = values.get(r, set()) - set(ids)
        if outside_l and outside_r:
            almost_strict = False
    return ModelReport(
        proper=proper,
        strict=strict,
        almost_proper=almost_proper,
        almost_strict=almost_strict,
        long=True,
        covers_circle=False,
    )


def validate_arc_model(model: ArcModel) -> ModelReport:
    n = len(model.arcs)
    proper = True
    almost_proper = True
    for i in range(n):
        for j in range(n):
            if i != j and arc_contains(model, i, j):
                proper = False
                a, b = model.arcs[i], model.arcs[j]
                if (a.s, a.t) != (b.s, b.t):
                    almost_proper = False
    endpoint_owners: dict[int, set[int]] = {}
    total_slots: dict[int, int] = {}
    for a in model.arcs:
        for v in (a.s, a.t):
            endpoint_owners.setdefault(v, set()).add(a.id)
            total_slots[v] = total_slots.get(v, 0) + 1
    strict = all(c == 1 for c in total_slots.values())
    groups: dict[tuple[int, int], list[int]] = {}
    for a in model.arcs:
        groups.setdefault((a.s, a.t), []).append(a.id)
    almost_strict = True
    for (s, t), ids in groups.items():
        if len(ids) < 2:
            continue
        outside_s = endpoint_owners.get(s, set()) - set(ids)
        outside_t = endpoint_owners.get(t, set()) - set(ids)
        if outside_s and outside_t:
            almost_strict = False
    long = True
    for pair in itertools.combinations(range(n), 2):
        if covers_circle(model, pair):
            long = False
    if long:
        for triple in itertools.combinations(range(n), 3):
            if covers_circle(model, triple):
                long = False
                break
    return ModelReport(
        proper=proper,
        strict=strict,
        almost_proper=almost_proper,
        almost_strict=almost_strict,
        long=long,
        covers_circle=covers_circle(model),
    )


def validate_model(model) -> ModelReport:
    if isinstance(model, IntervalModel):
        return validate_interval_model(model)
    if isinstance(model, ArcModel):
        return validate_arc_model(model)
    if isinstance(model, FuzzyArcModel):
        return validate_arc_model(model.arcs)
    raise InputError(f"cannot validate {type(model).__name__}")


# ---------------------------------------------------------------------------
# equivalence points and cutting


def equivalence_points_doubled(model: ArcModel) -> list[int]:
    """Representative points in doubled coordinates, sorted ascending.

    All arc endpoints plus the midpoint of every gap between circularly
    consecutive distinct endpoint values; any point of the circle has the
    same arc-containment set as one of these.  Empty model: the origin.
    """
    c2 = 2 * model.circumference
    endpoints = sorted({2 * a.s for a in model.arcs} | {2 * a.t for a in model.arcs})
    if not endpoints:
        return [0]
    points = set(endpoints)
    for a, b in zip(endpoints, endpoints[1:]):
        points.add((a + b) // 2)
    points.add((endpoints[-1] + endpoints[0] + c2) // 2 % c2)
    return sorted(points)


def equivalence_points(model: ArcModel) -> list[Fraction]:
    return [Fraction(p, 2) for p in equivalence_points_doubled(model)]


def _point_to_doubled(p, circumference: int) -> int:
    p2 = Fraction(p) * 2
    if p2.denominator != 1:
        raise InputError(
            f"cut point {p} must be an integer or half-integer"
        )
    return int(p2) % (2 * circumference)


def cut_at_point(model: ArcModel, p) -> CutResult:
    """Remove arcs containing p and unroll the rest onto a line at origin p.

    Surviving arcs cannot wrap past p, so each becomes a single interval
    [(s-p) mod C, (t-p) mod C] in doubled coordinates.
    """
    p2 = _point_to_doubled(p, model.circumference)
    c2 = 2 * model.circumference
    removed = []
    kept = []
    for a in model.arcs:
        if point_in_arc(model, a.id, p2):
            removed.append(a.id)
        else:
            kept.append(a)
    intervals = []
    for new_id, a in enumerate(kept):
        l = (2 * a.s - p2) % c2
        r = (2 * a.t - p2) % c2
        if not (0 < l < r < c2):
            raise InternalError(
                f"arc {a.id} wraps past cut point {p} despite not containing it"
            )
        intervals.append(Interval(new_id, l, r))
    return CutResult(
        intervals=IntervalModel(intervals),
        kept_ids=tuple(a.id for a in kept),
        removed_ids=tuple(removed),
    )
