"""Finite-horizon slaloms, interval partitions, and the parameter recursion.

The capture relations are evaluated on explicit windows; no claim is made
beyond a window.  Interval partitions come in two modes: paper_literal takes
the single-level inequality M_{i_{n+1}} > 2^n H(n) N_0..N_{i_n - 1}, while
strengthened replaces the left side by the full product M_0..M_{i_{n+1}-1},
which is what the exact hull accounting of the capture sets needs (standard
hulls of depth-i cylinders weigh 1/(M_0..M_{i-1}), one level less than the
displayed denominator).  Both accountings are computed and reported.

Because M_{k+1} = 2 N_k, products of M's rewrite as powers of two times
products of N's; weights are kept in that factored form so astronomical
level sizes cancel before any comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .magnitude import Magnitude, UnknownOrder
from .schedule import Schedule
from .space import PointPrefix, StandardSet
from .hausdorff import NullWitness, WitnessGroup

__all__ = [
    "Slalom",
    "IntervalPartition",
    "ParamSchedule",
    "RelationResult",
    "relation_eval",
    "build_interval_partition",
    "PartitionReport",
    "vexists_morphism_check",
    "VexistsIndexReport",
    "cov_e_morphism_check",
    "km_recursion",
    "psi_member",
    "decode_entry",
    "encode_block",
    "HorizonExhausted",
]


class HorizonExhausted(Exception):
    pass


@dataclass(frozen=True)
class Slalom:
    """Per-index finite entry sets with a width bound."""

    alphabet: tuple  # c(n) per index
    width: tuple  # H(n) per index
    entries: tuple  # frozenset of ints per index

    def __post_init__(self):
        if not len(self.alphabet) == len(self.width) == len(self.entries):
            raise ValueError("alphabet, width and entries must share a horizon")
        for n, ent in enumerate(self.entries):
            if len(ent) > self.width[n]:
                raise ValueError(f"width bound violated at index {n}")
            for v in ent:
                if not 0 <= v < self.alphabet[n]:
                    raise ValueError(f"entry out of alphabet range at index {n}")

    @property
    def horizon(self):
        return len(self.entries)


@dataclass(frozen=True)
class IntervalPartition:
    """Cut points 0 = i_0 < i_1 < ...; I_n = [i_n, i_{n+1})."""

    cuts: tuple

    def __post_init__(self):
        if not self.cuts or self.cuts[0] != 0:
            raise ValueError("cut points start at 0")
        if any(a >= b for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError("cut points must strictly increase")

    def interval(self, n):
        return range(self.cuts[n], self.cuts[n + 1])

    @property
    def count(self):
        return len(self.cuts) - 1


@dataclass(frozen=True)
class RelationResult:
    value: bool
    kind: str
    window: tuple


def relation_eval(x, phi: Slalom, kind, window):
    """Windowed surrogate of the capture relations.

    eventual: membership at every index of the window; infinitely_often:
    membership somewhere in the window.  The window travels with the result.
    """
    n0, end = window
    if not 0 <= n0 <= end <= phi.horizon or end > len(x):
        raise ValueError("window out of range")
    hits = [x[n] in phi.entries[n] for n in range(n0, end)]
    if kind == "eventual":
        value = all(hits)
    elif kind == "infinitely_often":
        value = any(hits)
    else:
        raise ValueError(f"unknown relation kind {kind!r}")
    return RelationResult(value, kind, (n0, end))


# ---------------------------------------------------------------------------
# Interval partitions
# ---------------------------------------------------------------------------


def _prefix_products(s: Schedule, upto):
    """(P_M, P_N) with P_M[i] = M_0..M_{i-1}, P_N[i] = N_0..N_{i-1}."""
    pm = [Magnitude.from_int(1)]
    pn = [Magnitude.from_int(1)]
    for i in range(upto):
        pm.append(pm[-1].mul(s.levels[i].m))
        pn.append(pn[-1].mul(s.levels[i].size))
    return pm, pn


def _as_magnitude(x):
    return x if isinstance(x, Magnitude) else Magnitude.from_int(int(x))


def _next_cut(s, pm, pn, i_n, n, h_n: Magnitude, mode, enforce_capacity):
    rhs = Magnitude.from_int(2**n).mul(h_n).mul(pn[i_n])
    i = i_n + 1
    while i < s.horizon:
        lhs = s.levels[i].m if mode == "paper_literal" else pm[i]
        try:
            ok = lhs.cmp(rhs) > 0
            if ok and enforce_capacity:
                # product of N over [i_n, i) must exceed H(n)
                ok = pn[i].cmp(h_n.mul(pn[i_n])) > 0
        except UnknownOrder as exc:
            raise HorizonExhausted(
                f"cut {n}: order not certifiable at level {i}: {exc}"
            )
        if ok:
            return i
        i += 1
    raise HorizonExhausted(f"no admissible cut for index {n} within the horizon")


@dataclass(frozen=True)
class PartitionReport:
    mode: str
    cuts: tuple
    paper_literal_cuts: tuple | None
    strengthened_cuts: tuple | None
    capacity_enforced: bool


def build_interval_partition(
    s: Schedule, widths, mode="strengthened", n_count=4, enforce_capacity=False
):
    """Greedy minimal cut points satisfying the chosen inequality per index.

    widths is a sequence of H(n) values (ints or Magnitudes).  The report
    carries the cut points of both modes side by side.
    """
    if mode not in ("paper_literal", "strengthened"):
        raise ValueError("mode must be 'paper_literal' or 'strengthened'")
    pm, pn = _prefix_products(s, s.horizon)

    def build(which):
        cuts = [0]
        for n in range(n_count):
            h_n = _as_magnitude(widths[n])
            cuts.append(_next_cut(s, pm, pn, cuts[-1], n, h_n, which, enforce_capacity))
        return tuple(cuts)

    main = build(mode)
    other_mode = "paper_literal" if mode == "strengthened" else "strengthened"
    try:
        other = build(other_mode)
    except HorizonExhausted:
        other = None
    report = PartitionReport(
        mode,
        main,
        main if mode == "paper_literal" else other,
        main if mode == "strengthened" else other,
        enforce_capacity,
    )
    return IntervalPartition(main), report


# ---------------------------------------------------------------------------
# The vexists morphism check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VexistsIndexReport:
    index: int
    piece_rank: int
    piece_count_description: str
    hull_weight: Fraction | None
    hull_weight_description: str
    hull_within_budget: bool
    display_weight: Fraction | None
    display_within_budget: bool


def _weight_factored(s, count: Magnitude, i_n, i_top):
    """count * N_0..N_{i_n-1} / (M_0..M_{i_top-1}), cancelled.

    M_0..M_{i_top-1} = M_0 2^(i_top-1) N_0..N_{i_top-2}, so the ratio is
    count / (M_0 2^(i_top-1) N_{i_n}..N_{i_top-2}).  Returns (Fraction or
    None, description, numerator Magnitude, denominator Magnitude).
    """
    if i_top < max(i_n + 1, 1):
        raise ValueError("the top cut must exceed the bottom cut")
    m0 = s.levels[0].m.exact()
    num = count
    den = Magnitude.from_int(m0 * 2 ** (i_top - 1))
    for k in range(i_n, i_top - 1):
        den = den.mul(s.levels[k].size)
    if num.is_exact() and den.is_exact():
        val = Fraction(num.exact(), den.exact())
        return val, f"{val.numerator}/{val.denominator}", num, den
    return None, f"({num.describe()})/({den.describe()})", num, den


def _ratio_le_pow2(num: Magnitude, den: Magnitude, n):
    """num/den <= 2^-n, certified; False when the order cannot be certified."""
    lhs = num.mul(Magnitude.from_int(2**n))
    try:
        return lhs.cmp(den) <= 0
    except UnknownOrder:
        return False


def vexists_morphism_check(
    s: Schedule, part: IntervalPartition, slalom: Slalom, horizon, piece_cap=5000
):
    """Exact cover weights for the sets {x : x restricted to I_n is in S(n)}.

    The cover at index n uses one standard hull per length-i_n prefix and
    entry: the hull of a depth-i_{n+1} cylinder is the rank-(i_{n+1}-1) set
    with a singleton level set.  Per-index weights are compared against 2^-n
    in both accountings (exact hull gauge vs the displayed denominator with
    one extra level); materialized small groups carry explicit pieces and
    aggregate into a tail witness.
    """
    if horizon > part.count or horizon > slalom.horizon:
        raise ValueError("horizon beyond the partition or slalom")
    _, pn = _prefix_products(s, part.cuts[horizon])
    for n in range(horizon):
        expected = 1
        exact = True
        for k in part.interval(n):
            if s.levels[k].size.is_exact():
                expected *= s.levels[k].size.exact()
            else:
                exact = False
        if exact and slalom.alphabet[n] != expected:
            raise ValueError(
                f"alphabet mismatch at index {n}: c(n) must be the product of "
                f"level sizes over I_n ({expected})"
            )
    reports = []
    groups = []
    for n in range(horizon):
        i_n, i_top = part.cuts[n], part.cuts[n + 1]
        rank = i_top - 1
        count_entries = len(slalom.entries[n])
        if count_entries == 0:
            reports.append(
                VexistsIndexReport(n, rank, "0 pieces", Fraction(0), "0", True, Fraction(0), True)
            )
            continue
        hull_val, hull_desc, num, den = _weight_factored(
            s, Magnitude.from_int(count_entries), i_n, i_top
        )
        hull_ok = (
            hull_val <= Fraction(1, 2**n)
            if hull_val is not None
            else _ratio_le_pow2(num, den, n)
        )
        disp_val, _, dnum, dden = _weight_factored(
            s, _as_magnitude(slalom.width[n]), i_n, i_top + 1
        )
        disp_ok = (
            disp_val <= Fraction(1, 2**n)
            if disp_val is not None
            else _ratio_le_pow2(dnum, dden, n)
        )
        prefix_count = pn[i_n]
        count_desc = f"{prefix_count.describe()} prefixes x {count_entries} entries"
        if hull_val is not None:
            pieces = None
            if (
                prefix_count.is_exact()
                and rank < s.materialized_depth
                and prefix_count.exact() * count_entries <= piece_cap
            ):
                pieces = tuple(_explicit_pieces(s, part, n, slalom.entries[n]))
            groups.append(
                WitnessGroup(
                    n,
                    rank,
                    frozenset(),
                    pieces,
                    pieces and len(pieces) or prefix_count.exact() * count_entries
                    if prefix_count.is_exact()
                    else 0,
                    hull_val,
                )
            )
        reports.append(
            VexistsIndexReport(
                n, rank, count_desc, hull_val, hull_desc, hull_ok, disp_val, disp_ok
            )
        )
    epsilon = sum((Fraction(1, 2**n) for n in range(horizon)), Fraction(0))
    witness = NullWitness(s, "tail", epsilon, (), tuple(groups), start_index=0)
    return witness, tuple(reports)


def decode_entry(s: Schedule, part: IntervalPartition, n, entry):
    """Entry index -> coordinate tuple on I_n, mixed radix, first level most significant."""
    radices = [s.levels[k].size.exact() for k in part.interval(n)]
    coords = []
    rem = entry
    for r in reversed(radices):
        coords.append(rem % r)
        rem //= r
    if rem:
        raise ValueError("entry out of range for the interval alphabet")
    return tuple(reversed(coords))


def encode_block(s: Schedule, part: IntervalPartition, n, coords):
    radices = [s.levels[k].size.exact() for k in part.interval(n)]
    if len(coords) != len(radices):
        raise ValueError("coordinate block length mismatch")
    idx = 0
    for c, r in zip(coords, radices):
        idx = idx * r + c
    return idx


def _explicit_pieces(s, part, n, entries):
    i_n, i_top = part.cuts[n], part.cuts[n + 1]
    ranges = [range(s.level_graph(l).vertex_count) for l in range(i_n)]
    for prefix in itertools.product(*ranges):
        for entry in sorted(entries):
            block = decode_entry(s, part, n, entry)
            full = prefix + block
            yield StandardSet(
                i_top - 1,
                PointPrefix(s, full[: i_top - 1]),
                frozenset({full[i_top - 1]}),
            )


def psi_member(x, part: IntervalPartition, slalom: Slalom, s: Schedule, window):
    """Membership of a coordinate tuple in the windowed capture set."""
    n0, end = window
    for n in range(n0, end):
        i_n, i_top = part.cuts[n], part.cuts[n + 1]
        if i_top > len(x):
            break
        block = tuple(x[i_n:i_top])
        if encode_block(s, part, n, block) in slalom.entries[n]:
            return True
    return False


# ---------------------------------------------------------------------------
# The covE morphism check
# ---------------------------------------------------------------------------


def cov_e_morphism_check(a, e, slalom: Slalom, x, horizon, tol):
    """Partial products of e(n)/a(n) plus the definitional implication check.

    Returns the exact partial products, the first horizon at which they drop
    below tol, and the eventual-capture implication evaluated extensionally
    (a consistency test of the two evaluators; the morphism maps a point to
    itself and a slalom to its eventual-capture set).
    """
    if len(a) < horizon or len(e) < horizon:
        raise ValueError("sequences shorter than the horizon")
    for n in range(horizon):
        if not 0 < e[n] <= a[n]:
            raise ValueError(f"need 0 < e(n) <= a(n); violated at {n}")
    products = []
    prod = Fraction(1)
    first_below = None
    for n in range(horizon):
        prod *= Fraction(e[n], a[n])
        products.append(prod)
        if first_below is None and prod < tol:
            first_below = n + 1
    window = (0, min(horizon, slalom.horizon, len(x)))
    eventual = relation_eval(x, slalom, "eventual", window)
    member = all(x[n] in slalom.entries[n] for n in range(*window))
    return {
        "partial_products": tuple(products),
        "first_below_tol": first_below,
        "tolerance": tol,
        "window": window,
        "eventual_capture": eventual.value,
        "psi_membership": member,
        "implication_holds": (not eventual.value) or member,
        "condition_met": first_below is not None,
    }


# ---------------------------------------------------------------------------
# The parameter recursion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParamSchedule:
    """The five sequences, carried as powers of two via Magnitude exponents."""

    partition: IntervalPartition
    c: tuple
    h_exponents: tuple  # H(n) = 2^exponent
    d_exponents: tuple  # d(n) = 2^exponent
    e_exponents: tuple  # e(n) = 2^exponent
    a_exponents: tuple  # a(n) = 2^exponent
    diagnostics: tuple  # log_{d(n)} H(n) / d(n); equals n by construction
    truncated_at: int | None
    truncation_reason: str | None


def km_recursion(s: Schedule, n_max, mode="strengthened"):
    """The interleaved five-sequence recursion with its interval choices.

    d(0) = 2, e(0) = 1, H(n) = d(n)^(n d(n)), a(n) = 2 e(n), e(n+1) =
    2 prod 2^c(k), d(n+1) = prod a(k), with max I_n picked minimally under
    the partition inequality plus the capacity condition c(n) > H(n).
    Everything is a power of two, so exponents are Magnitudes: the
    hypothesis diagnostic log_{d(n)} H(n) / d(n) = n D(n) 2^D(n) / (D(n)
    2^D(n)) collapses to n exactly, at every index, regardless of tier.
    Overflow or an uncertifiable comparison truncates with a diagnostic.
    """
    pm, pn = _prefix_products(s, s.horizon)
    d_exp = [Magnitude.from_int(1)]  # d(0) = 2^1
    e_exp = [Magnitude.from_int(0)]  # e(0) = 2^0
    h_exp = []
    a_exp = []
    c_seq = []
    cuts = [0]
    truncated_at = None
    reason = None
    for n in range(n_max + 1):
        try:
            # H(n) = d(n)^(n d(n)) = 2^(n * D(n) * 2^D(n))
            h_exponent = Magnitude.from_int(n).mul(d_exp[n]).mul(d_exp[n].pow2())
            h_mag = h_exponent.pow2()
            cut = _next_cut(s, pm, pn, cuts[-1], n, h_mag, mode, True)
            c_n = Magnitude.from_int(1)
            for k in range(cuts[-1], cut):
                c_n = c_n.mul(s.levels[k].size)
            h_exp.append(h_exponent)
            cuts.append(cut)
            c_seq.append(c_n)
            a_exp.append(e_exp[n].add(Magnitude.from_int(1)))  # a(n) = 2 e(n)
            acc = Magnitude.from_int(1)
            for ck in c_seq:
                acc = acc.add(ck)
            e_exp.append(acc)  # e(n+1) = 2^(1 + sum c(k))
            dacc = a_exp[0]
            for ak in a_exp[1:]:
                dacc = dacc.add(ak)
            d_exp.append(dacc)  # d(n+1) = 2^(sum of a-exponents)
        except (HorizonExhausted, UnknownOrder) as exc:
            truncated_at = n
            reason = str(exc)
            break
    count = len(c_seq)
    return ParamSchedule(
        IntervalPartition(tuple(cuts)),
        tuple(c_seq),
        tuple(h_exp),
        tuple(d_exp[: count + 1]),
        tuple(e_exp[: count + 1]),
        tuple(a_exp),
        tuple(range(count)),
        truncated_at,
        reason,
    )
