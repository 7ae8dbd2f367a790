"""The growth schedule (M_n, G_n, N_n) and the piecewise-linear gauge h.

M_0 = 1 and M_{n+1} = 2 N_n in both modes; faithful mode additionally
requires every materialized level graph to carry a passing certificate for
n_target = M_n, while toy mode marks levels unverified so that downstream
cover optimization has small exhaustively-checkable instances.  Levels past
the last materialized graph are symbolic Kneser shapes K(3k, k) with k the
smallest value whose chromatic number k + 2 exceeds M_n; their sizes are
exact integers while storable and certified Magnitude intervals beyond.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import Graph, SymbolicGraph, certify, generate_kneser_graph
from .magnitude import Magnitude, UnknownOrder

__all__ = [
    "Level",
    "Schedule",
    "ScheduleBuildError",
    "GaugeDepthError",
    "build_schedule",
    "gauge_eval",
    "gauge_eval_ex",
    "ratio_diagnostics",
    "RatioDiagnostics",
]

DEFAULT_HORIZON = 16


class ScheduleBuildError(Exception):
    pass


class GaugeDepthError(Exception):
    """The gauge grid is not exactly representable at the requested depth."""


@dataclass(frozen=True)
class Level:
    index: int
    m: Magnitude
    size: Magnitude
    graph: Graph | None
    kneser_shape: tuple | None  # (3k, k) for symbolic tail levels
    certificate: object | None
    verified: bool


@dataclass(frozen=True)
class Schedule:
    mode: str
    levels: tuple[Level, ...]
    horizon: int
    gauge_grid: tuple[Fraction, ...]  # h(2^-n) for the exactly-representable prefix
    flags: tuple[str, ...] = ()

    @property
    def materialized_depth(self):
        d = 0
        for level in self.levels:
            if level.graph is None:
                break
            d += 1
        return d

    def level_graph(self, n):
        if n >= len(self.levels) or self.levels[n].graph is None:
            raise GaugeDepthError(f"level {n} is not materialized")
        return self.levels[n].graph

    def level_size(self, n):
        return self.levels[n].size

    def exact_gauge(self, n):
        """h(2^-n) as an exact Fraction, or error past the exact grid."""
        if n < len(self.gauge_grid):
            return self.gauge_grid[n]
        raise GaugeDepthError(
            f"gauge grid exact only to depth {len(self.gauge_grid) - 1}; "
            f"requested {n} (increase the materialized horizon)"
        )

    def m_value(self, n):
        return self.levels[n].m


def _smallest_kneser_k(m_value: Magnitude) -> Magnitude:
    """Smallest k with chromatic number k + 2 exceeding M, i.e. k = M - 1."""
    if m_value.is_exact():
        return Magnitude.from_int(max(m_value.exact() - 1, 1))
    return m_value.sub_one()


def build_schedule(mode, level_specs, horizon=DEFAULT_HORIZON, seed=0, budget=None):
    """Assemble a schedule from materialized graphs plus a symbolic tail.

    level_specs is a sequence of Graph or SymbolicGraph values; faithful mode
    certifies each materialized graph against n_target = M_n and rejects the
    schedule naming the level and failing clause otherwise.
    """
    if mode not in ("faithful", "toy"):
        raise ValueError("mode must be 'faithful' or 'toy'")
    total = max(len(level_specs), horizon)
    levels = []
    m = Magnitude.from_int(1)
    flags = []
    if mode == "toy":
        flags.append("unverified lemma properties")
    for n in range(total):
        spec = level_specs[n] if n < len(level_specs) else None
        cert = None
        verified = False
        if isinstance(spec, Graph):
            size = Magnitude.from_int(spec.vertex_count)
            graph = spec
            shape = None
            if mode == "faithful":
                if not m.is_exact():
                    raise ScheduleBuildError(
                        f"level {n}: materialized graph under a symbolic target"
                    )
                cert = certify(graph, m.exact(), seed=seed)
                if not cert.passing:
                    clause = _failing_clause(cert)
                    raise ScheduleBuildError(
                        f"level {n}: certificate for n_target={m.exact()} "
                        f"failed ({clause})"
                    )
                verified = True
        elif isinstance(spec, SymbolicGraph):
            size = spec.size
            graph = None
            shape = None
        elif spec is None:
            k = _smallest_kneser_k(m)
            size = k.binom_3k_k()
            graph = None
            shape = (k.times_int(3), k)
        else:
            raise TypeError(f"bad level spec at {n}: {spec!r}")
        levels.append(Level(n, m, size, graph, shape, cert, verified))
        m = size.times_int(2)

    grid = []
    prod = 1
    for level in levels:
        if not level.m.is_exact():
            break
        prod *= level.m.exact()
        grid.append(Fraction(1, prod))
    sched = Schedule(mode, tuple(levels), total, tuple(grid), tuple(flags))
    _check_gauge_monotone(sched)
    return sched


def _failing_clause(cert):
    for name, check in (
        ("partition", cert.partition),
        ("weight", cert.weight),
        ("cover", cert.cover),
    ):
        if check.status != "pass":
            return f"{name}: {check.status}"
    return "unknown"


def _check_gauge_monotone(s):
    for a, b in zip(s.gauge_grid, s.gauge_grid[1:]):
        if not b < a:
            raise ScheduleBuildError("gauge grid is not strictly decreasing")


# ---------------------------------------------------------------------------
# Gauge evaluation
# ---------------------------------------------------------------------------


def gauge_eval_ex(s: Schedule, t: Fraction):
    """h(t) with the extension flag; exact piecewise-linear evaluation.

    h(0) = 0, h(2^-n) = 1/(M_0...M_n), linear in between, and constant
    h(t) = h(1) for t >= 1 (the construction leaves h above 1 undefined;
    the constant extension preserves monotonicity and is flagged).
    """
    t = Fraction(t)
    if t < 0:
        raise ValueError("gauge arguments are nonnegative")
    if t == 0:
        return Fraction(0), False
    if t >= 1:
        return s.exact_gauge(0), t > 1
    # Find n >= 0 with 2^-(n+1) <= t < 2^-n.
    n = 0
    while Fraction(1, 2 ** (n + 1)) > t:
        n += 1
    lo_x = Fraction(1, 2 ** (n + 1))
    hi_x = Fraction(1, 2**n)
    if t == hi_x:
        return s.exact_gauge(n), False
    lo_y = s.exact_gauge(n + 1)
    hi_y = s.exact_gauge(n)
    value = lo_y + (t - lo_x) / (hi_x - lo_x) * (hi_y - lo_y)
    return value, False


def gauge_eval(s: Schedule, t: Fraction) -> Fraction:
    return gauge_eval_ex(s, t)[0]


# ---------------------------------------------------------------------------
# Ratio diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioDiagnostics:
    r1: tuple[Fraction, ...]
    r2_exact: tuple[Fraction | None, ...]
    r2_described: tuple[str, ...]
    r2_strictly_increasing: tuple[bool, ...]
    notes: tuple[str, ...] = ()


def ratio_diagnostics(s: Schedule, n_max):
    """r1(n) = N_0..N_{n-1}/(M_0..M_n) and r2(n) = N_0..N_n/(M_0..M_n).

    Because M_{k+1} = 2 N_k by construction, r1(n) collapses to 2^-n / M_0
    exactly, at any symbolic depth.  r2(n) = r1(n) N_n is exact while N_n is,
    and a certified Magnitude description beyond; strict growth r2(n) >
    r2(n-1) is equivalent to N_n > M_n and is certified per level.
    """
    if n_max >= s.horizon:
        raise ValueError(f"n_max {n_max} beyond horizon {s.horizon}")
    m0 = s.levels[0].m.exact()
    r1 = tuple(Fraction(1, (2**n) * m0) for n in range(n_max + 1))
    r2_exact = []
    r2_desc = []
    increasing = []
    notes = []
    for n in range(n_max + 1):
        size = s.levels[n].size
        if size.is_exact():
            val = r1[n] * size.exact()
            r2_exact.append(val)
            r2_desc.append(f"{val.numerator}/{val.denominator}")
        else:
            r2_exact.append(None)
            r2_desc.append(f"(2^-{n}/{m0}) * {size.describe()}")
        if n == 0:
            increasing.append(True)
        else:
            try:
                increasing.append(size.cmp(s.levels[n].m) > 0)
            except UnknownOrder:
                increasing.append(False)
                notes.append(f"level {n}: N vs M order not certified")
    return RatioDiagnostics(r1, tuple(r2_exact), tuple(r2_desc), tuple(increasing), tuple(notes))
