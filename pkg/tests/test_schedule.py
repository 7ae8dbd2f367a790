import math
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drlab.graphs import cycle_graph, generate_kneser_graph, single_edge
from drlab.schedule import (
    GaugeDepthError,
    ScheduleBuildError,
    build_schedule,
    gauge_eval,
    gauge_eval_ex,
    ratio_diagnostics,
)


@lru_cache(maxsize=None)
def faithful_small(horizon=8):
    return build_schedule(
        "faithful", [single_edge(), generate_kneser_graph(9, 3)], horizon=horizon
    )


@lru_cache(maxsize=None)
def toy_c5(horizon=2):
    return build_schedule("toy", [cycle_graph(5), cycle_graph(5)], horizon=horizon)


def test_faithful_small_m_and_n():
    s = faithful_small()
    # M = (1, 4, 168), N = (2, 84) by the recursion M_{n+1} = 2 N_n
    assert [lvl.m.exact() for lvl in s.levels[:3]] == [1, 4, 168]
    assert [lvl.size.exact() for lvl in s.levels[:2]] == [2, 84]
    assert s.levels[2].size.exact() == math.comb(501, 167)
    assert s.mode == "faithful"
    assert all(lvl.verified for lvl in s.levels[:2])


def test_toy_recursion():
    s = toy_c5()
    assert [lvl.m.exact() for lvl in s.levels] == [1, 10]
    assert [lvl.size.exact() for lvl in s.levels] == [5, 5]
    assert "unverified lemma properties" in s.flags


def test_symbolic_third_level_is_kneser_501_167():
    s = faithful_small()
    lvl = s.levels[2]
    assert lvl.graph is None
    three_k, k = lvl.kneser_shape
    assert k.exact() == 167
    assert three_k.exact() == 501


def test_faithful_rejects_failing_level():
    # K2 at level 1 has target M_1 = 4 but is 2-partitionable
    with pytest.raises(ScheduleBuildError, match="level 1"):
        build_schedule("faithful", [single_edge(), single_edge()], horizon=2)


def test_gauge_grid_values():
    s = faithful_small()
    assert s.gauge_grid[0] == 1
    assert s.gauge_grid[1] == Fraction(1, 4)
    assert s.gauge_grid[2] == Fraction(1, 672)
    assert s.exact_gauge(3) == Fraction(1, 672 * 2 * math.comb(501, 167))


def test_gauge_eval_examples():
    # grid M = (1, 4): h(0) = 0, h(1/2) = 1/4, h(3/4) = 5/8 by interpolation
    s = faithful_small()
    assert gauge_eval(s, Fraction(0)) == 0
    assert gauge_eval(s, Fraction(1, 2)) == Fraction(1, 4)
    assert gauge_eval(s, Fraction(3, 4)) == Fraction(5, 8)
    value, extended = gauge_eval_ex(s, Fraction(2))
    assert value == 1 and extended
    value, extended = gauge_eval_ex(s, Fraction(1))
    assert value == 1 and not extended


def test_gauge_eval_depth_error():
    s = faithful_small(horizon=8)
    with pytest.raises(GaugeDepthError):
        gauge_eval(s, Fraction(1, 2**7))


@settings(max_examples=60, deadline=None)
@given(num=st.integers(min_value=8, max_value=192))
def test_gauge_eval_nondecreasing(num):
    # steps of 1/64 across [1/8, 3]: inside the exact grid of faithful-small
    s = faithful_small()
    t1 = Fraction(num, 64)
    t2 = t1 + Fraction(1, 64)
    assert gauge_eval(s, t1) <= gauge_eval(s, t2)


def test_gauge_telescoping():
    # h(2^-(n+1)) * M_0 ... M_{n+1} = 1 exactly on the exact grid
    s = faithful_small()
    prod = 1
    for n, lvl in enumerate(s.levels):
        if not lvl.m.is_exact() or n >= len(s.gauge_grid):
            break
        prod *= lvl.m.exact()
        assert s.gauge_grid[n] * prod == 1


def test_ratio_identity_r1():
    s = faithful_small(horizon=16)
    diag = ratio_diagnostics(s, 15)
    for n, val in enumerate(diag.r1):
        assert val == Fraction(1, 2**n)
    # halving exactly at every step
    for a, b in zip(diag.r1, diag.r1[1:]):
        assert b / a == Fraction(1, 2)


def test_ratio_r2_values_and_growth():
    s = faithful_small(horizon=16)
    diag = ratio_diagnostics(s, 15)
    assert diag.r2_exact[0] == Fraction(2)
    assert diag.r2_exact[1] == Fraction(2 * 84, 4) == Fraction(42)
    assert diag.r2_exact[2] == Fraction(2 * 84 * math.comb(501, 167), 672)
    assert all(diag.r2_strictly_increasing)
    assert not diag.notes


def test_ratio_r2_toy():
    s = toy_c5()
    diag = ratio_diagnostics(s, 1)
    assert diag.r2_exact[0] == Fraction(5)
    assert diag.r2_exact[1] == Fraction(25, 10)
    # toy C5 levels have N_1 = 5 < M_1 = 10: not increasing, honestly reported
    assert diag.r2_strictly_increasing[1] is False


def test_r1_exact_at_symbolic_depth():
    s = faithful_small(horizon=16)
    diag = ratio_diagnostics(s, 15)
    assert len(diag.r1) == 16
    assert diag.r1[15] == Fraction(1, 2**15)
