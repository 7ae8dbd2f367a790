"""Finite truncations of the product space: points, the metric, standard sets.

A point prefix of depth d stands for the cylinder of all its infinite
extensions; every set operation downstream is over finite unions of such
cylinders.  Distances take the value 2^(1-n) or 2^-n at the first differing
coordinate n depending on adjacency there, so equal prefixes report distance
zero only in the sense of "below truncation resolution".
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .schedule import Schedule
from .search import BudgetExhausted, bits, is_independent

__all__ = [
    "PointPrefix",
    "Cylinder",
    "StandardSet",
    "WholeSpace",
    "rho",
    "diameter",
    "standard_hull",
    "verify_metric_axioms",
    "MetricReport",
    "enumerate_standard_sets",
    "standard_set_contains",
]


@dataclass(frozen=True, eq=False)
class PointPrefix:
    schedule: Schedule
    coords: tuple[int, ...]

    def __post_init__(self):
        s = self.schedule
        if len(self.coords) > s.materialized_depth:
            raise ValueError("point prefix deeper than materialized levels")
        for n, c in enumerate(self.coords):
            if not 0 <= c < s.level_graph(n).vertex_count:
                raise ValueError(f"coordinate {n} out of range")

    def __eq__(self, other):
        return (
            isinstance(other, PointPrefix)
            and self.schedule is other.schedule
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.schedule), self.coords))

    @property
    def depth(self):
        return len(self.coords)


@dataclass(frozen=True, eq=False)
class Cylinder:
    prefix: PointPrefix

    def __eq__(self, other):
        return isinstance(other, Cylinder) and self.prefix == other.prefix

    def __hash__(self):
        return hash(("cyl", self.prefix))

    @property
    def depth(self):
        return self.prefix.depth


@dataclass(frozen=True, eq=False)
class StandardSet:
    """Coordinates below `rank` pinned, an independent set at `rank`, free above."""

    rank: int
    prefix: PointPrefix
    level_set: frozenset

    def __post_init__(self):
        if self.prefix.depth != self.rank:
            raise ValueError("prefix length must equal the rank")
        if not self.level_set:
            raise ValueError("level set must be nonempty")
        g = self.prefix.schedule.level_graph(self.rank)
        mask = 0
        for v in self.level_set:
            if not 0 <= v < g.vertex_count:
                raise ValueError("level-set vertex out of range")
            mask |= 1 << v
        if not is_independent(g.adj, mask):
            raise ValueError("level set must be independent")

    def __eq__(self, other):
        return (
            isinstance(other, StandardSet)
            and self.rank == other.rank
            and self.prefix == other.prefix
            and self.level_set == other.level_set
        )

    def __hash__(self):
        return hash((self.rank, self.prefix, self.level_set))


@dataclass(frozen=True)
class WholeSpace:
    """Marker for sets of diameter 2, which admit no standard superset."""

    schedule: Schedule
    flag: str = "diameter-2 set: no standard superset exists"


def _check_same_space(x: PointPrefix, y: PointPrefix):
    if x.schedule is not y.schedule:
        raise ValueError("points live on different schedules")
    if x.depth != y.depth:
        raise ValueError("points must share a truncation depth")


def rho(x: PointPrefix, y: PointPrefix) -> Fraction:
    """First-difference metric: 2^(1-n) when adjacent at n, else 2^-n."""
    _check_same_space(x, y)
    for n, (a, b) in enumerate(zip(x.coords, y.coords)):
        if a != b:
            g = x.schedule.level_graph(n)
            if g.has_edge(a, b):
                return Fraction(2, 2**n)
            return Fraction(1, 2**n)
    return Fraction(0)  # below truncation resolution


def _cylinder_diameter(schedule, depth):
    n = depth
    while n < schedule.materialized_depth:
        g = schedule.level_graph(n)
        if g.edges:
            return Fraction(2, 2**n)
        if g.vertex_count >= 2:
            return Fraction(1, 2**n)
        n += 1  # single-vertex level pins the coordinate; look deeper
    raise ValueError("cannot bound cylinder diameter: levels not materialized")


def diameter(obj) -> Fraction:
    """Exact diameter of a standard set, cylinder, or finite point set."""
    if isinstance(obj, StandardSet):
        return Fraction(1, 2**obj.rank)
    if isinstance(obj, Cylinder):
        return _cylinder_diameter(obj.prefix.schedule, obj.depth)
    if isinstance(obj, WholeSpace):
        return _cylinder_diameter(obj.schedule, 0)
    points = list(obj)
    best = Fraction(0)
    for a, b in itertools.combinations(points, 2):
        best = max(best, rho(a, b))
    return best


def standard_hull(points):
    """A standard set containing the given points, with the same diameter.

    At the first non-constant coordinate j: pairwise non-adjacent values give
    the rank-j set over those values; an adjacent pair forces rank j-1 with
    the common previous coordinate as a singleton.  Sets of diameter 2
    (adjacent already at coordinate 0) have no standard superset and return
    the flagged whole-space marker.
    """
    points = list(points)
    if len(set(points)) < 2:
        raise ValueError("standard hulls need at least two distinct points")
    first = points[0]
    for p in points[1:]:
        _check_same_space(first, p)
    schedule = first.schedule
    j = None
    for n in range(first.depth):
        values = {p.coords[n] for p in points}
        if len(values) > 1:
            j = n
            break
    if j is None:
        raise ValueError("points identical at truncation resolution")
    values = sorted({p.coords[j] for p in points})
    g = schedule.level_graph(j)
    adjacent_pair = any(
        g.has_edge(a, b) for a, b in itertools.combinations(values, 2)
    )
    if not adjacent_pair:
        return StandardSet(
            j, PointPrefix(schedule, first.coords[:j]), frozenset(values)
        )
    if j == 0:
        return WholeSpace(schedule)
    return StandardSet(
        j - 1,
        PointPrefix(schedule, first.coords[: j - 1]),
        frozenset({first.coords[j - 1]}),
    )


# ---------------------------------------------------------------------------
# Metric-axiom verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricReport:
    depth: int
    point_count: int
    triples_checked: int
    sampled: bool
    passed: bool
    violation: str | None


def verify_metric_axioms(schedule, depth, triple_cap=4_000_000, seed=0):
    """Exhaustive (or flagged sampled) check of the metric axioms at a depth.

    Distances are precomputed as integers scaled by 2^depth so the triangle
    inequality is pure integer arithmetic.
    """
    ranges = [range(schedule.level_graph(n).vertex_count) for n in range(depth)]
    points = list(itertools.product(*ranges))
    count = len(points)
    scale = 2**depth

    graphs = [schedule.level_graph(n) for n in range(depth)]

    def dist_scaled(p, q):
        for n in range(depth):
            if p[n] != q[n]:
                base = scale >> n
                return base * 2 if graphs[n].has_edge(p[n], q[n]) else base
        return 0

    table = [[0] * count for _ in range(count)]
    for i in range(count):
        for k in range(i + 1, count):
            d = dist_scaled(points[i], points[k])
            table[i][k] = d
            table[k][i] = d

    # identity and positivity
    for i in range(count):
        if table[i][i] != 0:
            return MetricReport(depth, count, 0, False, False, "rho(x,x) != 0")
        for k in range(count):
            if i != k and table[i][k] == 0:
                return MetricReport(
                    depth, count, 0, False, False, "distinct points at distance 0"
                )
            if table[i][k] != table[k][i]:
                return MetricReport(depth, count, 0, False, False, "asymmetry")

    total = count**3
    sampled = total > triple_cap
    if sampled:
        rng = random.Random(seed)
        triples = (
            (rng.randrange(count), rng.randrange(count), rng.randrange(count))
            for _ in range(triple_cap)
        )
        checked = triple_cap
    else:
        triples = itertools.product(range(count), repeat=3)
        checked = total
    for i, j, k in triples:
        if table[i][k] > table[i][j] + table[j][k]:
            return MetricReport(
                depth,
                count,
                checked,
                sampled,
                False,
                f"triangle violation at {points[i]}, {points[j]}, {points[k]}",
            )
    return MetricReport(depth, count, checked, sampled, True, None)


# ---------------------------------------------------------------------------
# Standard-set enumeration
# ---------------------------------------------------------------------------


def _independent_subsets(g, cap):
    """All nonempty independent vertex subsets, lexicographic by sorted tuple."""
    out = []

    def extend(chosen, chosen_mask, start):
        for v in range(start, g.vertex_count):
            if g.adj[v] & chosen_mask:
                continue
            tup = chosen + (v,)
            out.append(tup)
            if len(out) > cap:
                raise BudgetExhausted(len(out))
            extend(tup, chosen_mask | (1 << v), v + 1)

    extend((), 0, 0)
    out.sort()
    return out


def _compatible(prefix_coords, filter_coords):
    overlap = min(len(prefix_coords), len(filter_coords))
    return prefix_coords[:overlap] == filter_coords[:overlap]


def enumerate_standard_sets(schedule, rank_range, prefix_filter=None, set_cap=1_000_000):
    """Deterministic stream of standard sets over the given ranks.

    Prefixes iterate lexicographically, level sets in lexicographic order of
    their sorted vertex tuples; a prefix filter keeps only prefixes
    compatible with it on the shared length.
    """
    filt = tuple(prefix_filter) if prefix_filter is not None else None
    for j in rank_range:
        g = schedule.level_graph(j)
        level_sets = _independent_subsets(g, set_cap)
        ranges = [range(schedule.level_graph(n).vertex_count) for n in range(j)]
        for prefix_coords in itertools.product(*ranges):
            if filt is not None and not _compatible(prefix_coords, filt):
                continue
            prefix = PointPrefix(schedule, prefix_coords)
            for tup in level_sets:
                yield StandardSet(j, prefix, frozenset(tup))


def standard_set_contains(s: StandardSet, point: PointPrefix) -> bool:
    """Membership of a point prefix deep enough to decide it."""
    if point.depth <= s.rank:
        raise ValueError("point prefix too shallow to decide membership")
    return (
        point.coords[: s.rank] == s.prefix.coords
        and point.coords[s.rank] in s.level_set
    )
