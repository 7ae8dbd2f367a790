"""Exact optimal standard-set covers and measure-zero witnesses.

The cost of a standard cover is the gauge of its piece diameters summed
exactly.  Restricting the infimum to standard sets is lossless because every
cover piece embeds in a standard hull of equal diameter and the gauge is
nondecreasing; pieces of rank m are admissible only when their diameter
2^-m is at most delta.  The optimum over the finite cylinder tree is a
dynamic program; on faithful schedules, descending a level multiplies the
cost of covering a full cylinder by (2N+1)/(2*chi) >= 1, so covering at the
current rank is optimal and deep recursion is pruned exactly.  Toy schedules
get the exhaustive subset search up to the rank cap, with an upper-bound
flag whenever the cap truncated a possibly-cheaper descent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .schedule import GaugeDepthError, Schedule, gauge_eval_ex
from .search import CoverSearcher, bits
from .space import PointPrefix, StandardSet
from .graphs import check_cover_family

__all__ = [
    "TargetSet",
    "CoverSolution",
    "NullWitness",
    "WitnessGroup",
    "full_space_target",
    "optimal_cover_cost",
    "null_witness_check",
    "refine_witness",
    "bset_vertical_bound",
    "bset_horizontal_bound",
    "infinity_evidence",
    "InfinityRow",
]

SUBSET_ENUM_CAP = 22
PIECE_CAP = 20_000


@dataclass(frozen=True, eq=False)
class TargetSet:
    """A finite antichain of cylinders at one common depth."""

    schedule: Schedule
    depth: int
    prefixes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.depth > self.schedule.materialized_depth:
            raise ValueError("target depth beyond materialized levels")
        seen = set()
        for p in self.prefixes:
            if len(p) != self.depth:
                raise ValueError("target cylinders must share a depth")
            if p in seen:
                raise ValueError(f"duplicate cylinder {p}")
            seen.add(p)
            PointPrefix(self.schedule, p)  # validates coordinate ranges
        object.__setattr__(self, "prefixes", tuple(sorted(self.prefixes)))

    def __eq__(self, other):
        return (
            isinstance(other, TargetSet)
            and self.schedule is other.schedule
            and self.depth == other.depth
            and self.prefixes == other.prefixes
        )

    def __hash__(self):
        return hash((id(self.schedule), self.depth, self.prefixes))


def full_space_target(schedule):
    return TargetSet(schedule, 0, ((),))


@dataclass(frozen=True)
class CoverSolution:
    value: Fraction
    pieces: tuple[StandardSet, ...] | None  # None when elided past the piece cap
    piece_count: int
    optimality: str  # "exact" | "upper-bound"
    rank_cap: int
    rank_cap_hit: bool
    shortcut_used: bool
    whole_space_used: bool = False
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class WitnessGroup:
    """One tail index: either explicit pieces or a generated-family descriptor.

    A generated group stands for the standard sets (p, level_set) over every
    prefix p of the given rank; `count` is the exact number of pieces and
    `weight` their exact total gauge weight.
    """

    index: int
    rank: int
    level_set: frozenset
    pieces: tuple[StandardSet, ...] | None
    count: int
    weight: Fraction


@dataclass(frozen=True)
class NullWitness:
    schedule: Schedule
    semantics: str  # "plain" | "tail"
    epsilon: Fraction
    pieces: tuple[StandardSet, ...] = ()
    groups: tuple[WitnessGroup, ...] = ()
    start_index: int | None = None

    def total_weight(self):
        w = sum(
            (piece_weight(self.schedule, p) for p in self.pieces), Fraction(0)
        )
        w += sum((g.weight for g in self.groups), Fraction(0))
        return w


def piece_weight(schedule, piece: StandardSet) -> Fraction:
    return schedule.exact_gauge(piece.rank)


# ---------------------------------------------------------------------------
# Optimal cover dynamic program
# ---------------------------------------------------------------------------


class _DP:
    def __init__(self, target, min_rank, rank_cap, shortcut):
        self.s = target.schedule
        self.target = target
        self.min_rank = min_rank
        self.rank_cap = rank_cap
        self.shortcut = shortcut
        self.searchers = {}
        self.chi_cache = {}
        self.full_memo = {}
        self.rank_cap_hit = False
        self.shortcut_used = False

    def searcher(self, m):
        if m not in self.searchers:
            self.searchers[m] = CoverSearcher(self.s.level_graph(m).adj)
        return self.searchers[m]

    def chi(self, m, mask):
        key = (m, mask)
        if key not in self.chi_cache:
            self.chi_cache[key] = self.searcher(m).min_cover(mask)
        return self.chi_cache[key]

    def gauge(self, m):
        return self.s.exact_gauge(m)

    def full_cost(self, m):
        """Cost of covering one full depth-m cylinder with ranks in [m, cap]."""
        if m in self.full_memo:
            return self.full_memo[m]
        if m > self.rank_cap or m >= self.s.materialized_depth:
            return None
        g = self.s.level_graph(m)
        here = None
        if m >= self.min_rank:
            chi, _ = self.chi(m, g.full_mask)
            here = chi * self.gauge(m)
        if self.s.mode == "faithful" and here is not None:
            # Descending always costs at least (2N+1)/(2 chi) times more.
            best = here
        else:
            deeper = self.full_cost(m + 1)
            if deeper is None and m + 1 <= self.rank_cap and m + 1 >= self.s.materialized_depth:
                pass  # truncation boundary of the space itself: exact for the truncation
            elif deeper is None and m + 1 > self.rank_cap and m + 1 < self.s.materialized_depth:
                self.rank_cap_hit = True
            options = []
            if here is not None:
                options.append(here)
            if deeper is not None:
                n_m = g.vertex_count
                if here is None:
                    options.append(n_m * deeper)
                elif n_m <= SUBSET_ENUM_CAP and not self.shortcut:
                    for f_mask in range(1 << n_m):
                        chi_f, _ = self.chi(m, f_mask)
                        rest = n_m - f_mask.bit_count()
                        options.append(chi_f * self.gauge(m) + rest * deeper)
                else:
                    if here is not None and n_m > 1:
                        self.shortcut_used = True
                    options.append(n_m * deeper)
            best = min(options) if options else None
        self.full_memo[m] = best
        return best

    def full_pieces(self, prefix, m):
        """Reconstruct pieces realizing full_cost(m) at the given prefix."""
        cost = self.full_cost(m)
        if cost is None:
            raise AssertionError("reconstructing an infeasible node")
        g = self.s.level_graph(m)
        if m >= self.min_rank:
            chi, masks = self.chi(m, g.full_mask)
            if chi * self.gauge(m) == cost:
                pp = PointPrefix(self.s, prefix)
                return [
                    StandardSet(m, pp, frozenset(bits(mask))) for mask in masks
                ]
        deeper = self.full_cost(m + 1)
        n_m = g.vertex_count
        if deeper is not None:
            if n_m * deeper == cost:
                out = []
                for a in range(n_m):
                    out.extend(self.full_pieces(prefix + (a,), m + 1))
                return out
            if m >= self.min_rank and n_m <= SUBSET_ENUM_CAP and not self.shortcut:
                for f_mask in range(1 << n_m):
                    chi_f, masks = self.chi(m, f_mask)
                    rest = n_m - f_mask.bit_count()
                    if chi_f * self.gauge(m) + rest * deeper == cost:
                        pp = PointPrefix(self.s, prefix)
                        out = [
                            StandardSet(m, pp, frozenset(bits(mask)))
                            for mask in masks
                        ]
                        for a in range(n_m):
                            if not f_mask >> a & 1:
                                out.extend(self.full_pieces(prefix + (a,), m + 1))
                        return out
        raise AssertionError("no option reproduces the memoized cost")

    def partial_cost(self, prefix, m, demanded):
        """Cover the demanded children of a partial node; returns (cost, plan).

        plan = (f_mask, child_plans) where f_mask children are covered by
        rank-m pieces here and the rest recurse.
        """
        children = sorted(demanded)
        k = len(children)
        if k > SUBSET_ENUM_CAP:
            raise ValueError(
                f"demanded-subset enumeration over {k} children exceeds the cap"
            )
        child_costs = []
        child_plans = []
        for a in children:
            c, plan = self.node_cost(prefix + (a,), m + 1)
            child_costs.append(c)
            child_plans.append(plan)
        best = None
        best_plan = None
        here_ok = m >= self.min_rank
        for f_bits in range(1 << k):
            f_vertex_mask = 0
            cost = Fraction(0)
            feasible = True
            for i in range(k):
                if f_bits >> i & 1:
                    f_vertex_mask |= 1 << children[i]
                else:
                    if child_costs[i] is None:
                        feasible = False
                        break
                    cost += child_costs[i]
            if not feasible:
                continue
            if f_vertex_mask:
                if not here_ok:
                    continue
                chi_f, _ = self.chi(m, f_vertex_mask)
                cost += chi_f * self.gauge(m)
            if best is None or cost < best:
                best = cost
                best_plan = (f_bits, tuple(child_plans))
        return best, ("partial", tuple(children), best_plan)

    def node_cost(self, prefix, depth):
        """A demanded node: a target cylinder (full) or an ancestor (partial)."""
        if depth == self.target.depth:
            return self.full_cost(depth), ("full",)
        demanded = {
            p[depth] for p in self.target.prefixes if p[:depth] == prefix
        }
        return self.partial_cost(prefix, depth, demanded)

    def realize(self, prefix, depth, plan):
        if plan[0] == "full":
            return self.full_pieces(prefix, depth)
        _, children, best_plan = plan
        f_bits, child_plans = best_plan
        out = []
        f_vertex_mask = 0
        for i, a in enumerate(children):
            if f_bits >> i & 1:
                f_vertex_mask |= 1 << a
        if f_vertex_mask:
            chi_f, masks = self.chi(depth, f_vertex_mask)
            pp = PointPrefix(self.s, prefix)
            out.extend(StandardSet(depth, pp, frozenset(bits(m))) for m in masks)
        for i, a in enumerate(children):
            if not f_bits >> i & 1:
                out.extend(self.realize(prefix + (a,), depth + 1, child_plans[i]))
        return out


def _min_rank_of_delta(delta):
    if delta is None:
        return 0
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    num, den = delta.numerator, delta.denominator
    if num & (num - 1) or den & (den - 1):
        raise ValueError(f"delta must be a power of two, got {delta}")
    if delta >= 1:
        return 0
    return den.bit_length() - 1  # delta = 2^-j


def optimal_cover_cost(
    target: TargetSet,
    delta,
    rank_cap,
    shortcut=None,
    piece_cap=PIECE_CAP,
) -> CoverSolution:
    """Exact minimal gauge-weight of a standard cover of the target.

    delta is a power of two or None for no diameter restriction; rank_cap
    bounds the piece ranks explored (it must stay within materialized
    levels).  shortcut=None picks the mode default: faithful schedules prune
    descents by the certified cost-growth bound, toy schedules enumerate all
    demanded subsets exhaustively.
    """
    s = target.schedule
    min_rank = _min_rank_of_delta(delta)
    if rank_cap < min_rank:
        raise ValueError("rank_cap below the minimum admissible rank for delta")
    if rank_cap >= s.materialized_depth and s.mode != "faithful":
        rank_cap = s.materialized_depth - 1
    if shortcut is None:
        shortcut = s.mode == "faithful"
    if not target.prefixes:
        return CoverSolution(Fraction(0), (), 0, "exact", rank_cap, False, False)

    whole_space_cost = None
    flags = []
    if delta is None:
        value, extended = gauge_eval_ex(s, Fraction(2))
        whole_space_cost = value
        if extended:
            flags.append("gauge constant extension used above 1")

    dp = _DP(target, min_rank, rank_cap, shortcut)
    cost, plan = dp.node_cost((), 0)

    whole_space_used = False
    if cost is None or (whole_space_cost is not None and whole_space_cost < cost):
        if whole_space_cost is None:
            raise ValueError("target not coverable within the rank cap")
        # spec restricts the whole-space marker to delta = infinity
        cost = whole_space_cost
        whole_space_used = True
        pieces = None
        count = 1
    else:
        pieces_list = dp.realize((), 0, plan)
        count = len(pieces_list)
        pieces = tuple(pieces_list) if count <= piece_cap else None
        if pieces is not None:
            covered_weight = sum(
                (piece_weight(s, p) for p in pieces_list), Fraction(0)
            )
            if covered_weight != cost:
                raise AssertionError("piece reconstruction does not match value")

    if s.mode == "faithful":
        optimality = "exact"
    else:
        optimality = "upper-bound" if dp.rank_cap_hit else "exact"
    return CoverSolution(
        cost,
        pieces,
        count,
        optimality,
        rank_cap,
        dp.rank_cap_hit,
        dp.shortcut_used,
        whole_space_used,
        tuple(flags),
    )


# ---------------------------------------------------------------------------
# Witness checking and refinement
# ---------------------------------------------------------------------------


def _piece_engulfs(piece: StandardSet, prefix):
    j = piece.rank
    return (
        len(prefix) > j
        and prefix[:j] == piece.prefix.coords
        and prefix[j] in piece.level_set
    )


def _cylinder_covered(schedule, prefix, pieces, depth_limit):
    for piece in pieces:
        if _piece_engulfs(piece, prefix):
            return True
    inner = [
        p
        for p in pieces
        if p.rank >= len(prefix) and p.prefix.coords[: len(prefix)] == prefix
    ]
    if not inner:
        return False
    if len(prefix) >= depth_limit:
        return False
    g = schedule.level_graph(len(prefix))
    return all(
        _cylinder_covered(schedule, prefix + (a,), inner, depth_limit)
        for a in range(g.vertex_count)
    )


def null_witness_check(witness: NullWitness, target: TargetSet | None = None):
    """Verify coverage cylinder-by-cylinder and the exact weight budget.

    Returns (passed, report).  For tail witnesses, each group must cover its
    declared coordinate slice; explicit groups are checked by enumeration,
    generated groups structurally (the pieces are, by definition, the slice).
    """
    s = witness.schedule
    report = {"weight": witness.total_weight(), "epsilon": witness.epsilon}
    if report["weight"] > witness.epsilon:
        report["failure"] = "total weight exceeds the budget"
        return False, report

    if witness.semantics == "plain":
        if target is not None:
            max_rank = max((p.rank for p in witness.pieces), default=0)
            limit = min(s.materialized_depth, max_rank + 1)
            for prefix in target.prefixes:
                if not _cylinder_covered(s, prefix, witness.pieces, limit):
                    report["failure"] = f"uncovered cylinder {prefix}"
                    return False, report
        return True, report

    # tail semantics: groups indexed by n cover the slice {x : x(n) in H_n}
    checked = []
    for group in witness.groups:
        n = group.index
        if group.pieces is None:
            checked.append((n, "structural"))
            continue
        g = s.level_graph(n)
        ranges = [range(s.level_graph(l).vertex_count) for l in range(n)]
        for p in itertools.product(*ranges):
            for a in group.level_set:
                prefix = p + (a,)
                if not _cylinder_covered(
                    s, prefix, group.pieces, s.materialized_depth
                ):
                    report["failure"] = f"group {n}: uncovered slice cylinder {prefix}"
                    return False, report
        checked.append((n, "enumerated"))
    report["groups"] = tuple(checked)
    if target is not None:
        all_pieces = [p for g in witness.groups if g.pieces for p in g.pieces]
        max_rank = max((p.rank for p in all_pieces), default=0)
        limit = min(s.materialized_depth, max_rank + 1)
        for prefix in target.prefixes:
            if not _cylinder_covered(s, prefix, all_pieces, limit):
                report["failure"] = f"uncovered cylinder {prefix}"
                return False, report
    return True, report


def refine_witness(witness: NullWitness, delta):
    """Split every piece of diameter above delta into rank-j pieces.

    j = -log2(delta).  A rank-r piece splits, per level-r value and per
    prefix extension through the intermediate levels, into a minimum
    independent cover of the level-j graph.  Returns the new witness and the
    exact weight-inflation factor.
    """
    if witness.semantics != "plain":
        raise ValueError("refinement applies to plain witnesses")
    s = witness.schedule
    j = _min_rank_of_delta(delta)
    if j >= s.materialized_depth:
        raise GaugeDepthError("refinement target below materialized levels")
    searcher = CoverSearcher(s.level_graph(j).adj)
    chi, masks = searcher.min_cover(s.level_graph(j).full_mask)
    new_pieces = []
    for piece in witness.pieces:
        if piece.rank >= j:
            new_pieces.append(piece)
            continue
        base = piece.prefix.coords
        mid_ranges = [
            range(s.level_graph(l).vertex_count) for l in range(piece.rank + 1, j)
        ]
        for a in sorted(piece.level_set):
            for mid in itertools.product(*mid_ranges):
                prefix = PointPrefix(s, base + (a,) + mid)
                for mask in masks:
                    new_pieces.append(StandardSet(j, prefix, frozenset(bits(mask))))
    old = witness.total_weight()
    refined = NullWitness(s, "plain", witness.epsilon, tuple(new_pieces))
    new = refined.total_weight()
    inflation = new / old if old else Fraction(1)
    return refined, inflation


# ---------------------------------------------------------------------------
# The two Borel-set bounds
# ---------------------------------------------------------------------------


def _checked_families(s, families, depth):
    if len(families) < depth:
        raise ValueError("need a certified cover family per level")
    for n in range(depth):
        res = check_cover_family(s.level_graph(n), families[n])
        if not res.passed:
            raise ValueError(f"level {n} cover family fails: {res.violation}")


def bset_vertical_bound(s, families, x: PointPrefix, n0, horizon, piece_cap=PIECE_CAP):
    """Tail cover of {y : y(n) in H(x(n)) for some n >= n0}, with exact weight.

    Group n consists of the rank-n standard sets (p, H(x(n))) over every
    length-n prefix p; the group weight is N_0..N_{n-1}/(M_0..M_n) and the
    infinite tail sums to 2^(1-n0)/M_0 under the schedule recursion.
    """
    if x.depth < horizon:
        raise ValueError("base point shorter than the horizon")
    if not n0 <= horizon:
        raise ValueError("n0 must be at most the horizon")
    _checked_families(s, families, horizon)
    groups = []
    total = Fraction(0)
    for n in range(n0, horizon):
        level_set = frozenset(families[n].sets[x.coords[n]])
        count = 1
        for l in range(n):
            count *= s.level_graph(l).vertex_count
        weight = count * s.exact_gauge(n)
        total += weight
        if count <= piece_cap:
            ranges = [range(s.level_graph(l).vertex_count) for l in range(n)]
            pieces = tuple(
                StandardSet(n, PointPrefix(s, p), level_set)
                for p in itertools.product(*ranges)
            )
        else:
            pieces = None
        groups.append(WitnessGroup(n, n, level_set, pieces, count, weight))
    m0 = s.levels[0].m.exact()
    closed_form_tail = Fraction(2, 2**n0) / m0
    witness = NullWitness(
        s, "tail", closed_form_tail, (), tuple(groups), start_index=n0
    )
    return total, closed_form_tail, witness


def bset_horizontal_bound(s, families, y: PointPrefix, depth):
    """Exact product of per-level escape fractions, each certified <= 3/4."""
    if y.depth < depth:
        raise ValueError("base point shorter than the requested depth")
    _checked_families(s, families, depth)
    factors = []
    product = Fraction(1)
    for n in range(depth):
        g = s.level_graph(n)
        misses = sum(1 for a in range(g.vertex_count) if y.coords[n] not in families[n].sets[a])
        factor = Fraction(misses, g.vertex_count)
        if factor > Fraction(3, 4):
            raise AssertionError(
                f"level {n}: escape fraction {factor} exceeds 3/4 for a certified family"
            )
        factors.append(factor)
        product *= factor
    return product, tuple(factors)


# ---------------------------------------------------------------------------
# Measure-infinity evidence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InfinityRow:
    j: int
    kind: str  # "exact" | "lower-bound" | "unavailable"
    value: Fraction | None
    description: str


def infinity_evidence(s: Schedule, j_max):
    """Table of optimal cover costs of the whole space at delta = 2^-j.

    Exact DP values where level j is materialized; for symbolic levels the
    certified lower bound N_0..N_{j-1} (M_j + 1) / (M_0..M_j), exact as a
    Fraction while the sizes are exactly representable.
    """
    rows = []
    omega = full_space_target(s)
    prev_value = None
    monotone = True
    for j in range(j_max + 1):
        if j < s.materialized_depth:
            sol = optimal_cover_cost(omega, Fraction(1, 2**j), rank_cap=j)
            rows.append(InfinityRow(j, "exact", sol.value, f"{sol.value}"))
            value = sol.value
        elif j < s.horizon and s.levels[j].m.is_exact() and all(
            s.levels[l].size.is_exact() for l in range(j)
        ):
            num = 1
            for l in range(j):
                num *= s.levels[l].size.exact()
            m_j = s.levels[j].m.exact()
            den = 1
            for l in range(j + 1):
                den *= s.levels[l].m.exact()
            value = Fraction(num * (m_j + 1), den)
            rows.append(InfinityRow(j, "lower-bound", value, f"{value}"))
        elif j < s.horizon:
            rows.append(
                InfinityRow(
                    j,
                    "lower-bound",
                    None,
                    "N_0..N_{j-1}(M_j+1)/(M_0..M_j) with "
                    f"M_j = {s.levels[j].m.describe()}",
                )
            )
            value = None
        else:
            rows.append(InfinityRow(j, "unavailable", None, "beyond horizon"))
            value = None
        if value is not None and prev_value is not None and value < prev_value:
            monotone = False
        if value is not None:
            prev_value = value
    return tuple(rows), monotone
