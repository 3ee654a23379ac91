"""Metric space, grid, and serialization behavior."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowing.core import (FiniteMetricSpace, FiniteMetricSystem,
                            SpaceValidationError, discrete_space,
                            hausdorff_distance, line_space, omega_limit_set,
                            orbit_set, system_from_json, system_to_json,
                            threshold_grid, validate_space)
from shadowing.deciders import decide_shadowing
from shadowing.core import ThresholdPair
from shadowing.rationals import (RationalFormatError, format_rational,
                                 parse_rational)

from conftest import random_corpus


# ---------------------------------------------------------------------------
# rationals


def test_rational_round_trip():
    for q in (Fraction(3, 4), Fraction(-7, 2), Fraction(5), Fraction(0)):
        assert parse_rational(format_rational(q)) == q


def test_rational_rejects_noncanonical():
    for bad in ("3/-4", "1.5", "", "a/b", "1/0"):
        with pytest.raises(RationalFormatError):
            parse_rational(bad)


# ---------------------------------------------------------------------------
# space validation


def test_triangle_violation_listed():
    space = FiniteMetricSpace(
        ("a", "b", "c"),
        ((0, 1, 5), (1, 0, 1), (5, 1, 0)))
    problems = validate_space(space)
    assert any("triangle" in p for p in problems)


def test_valid_spaces_clean():
    for system in random_corpus(20, 5, seed=3):
        assert validate_space(system.space) == []


def test_json_round_trip():
    for system in random_corpus(10, 4, seed=4):
        blob = json.dumps(system_to_json(system))
        back = system_from_json(json.loads(blob), name=system.name)
        assert back.space.dist == system.space.dist
        assert back.fmap == system.fmap


def test_bad_json_raises():
    with pytest.raises(SpaceValidationError):
        system_from_json({"points": ["a"], "metric": [["0"], ["0"]],
                          "map": [0]})


# ---------------------------------------------------------------------------
# hausdorff metric axioms (property test over random subsets)


subset_strategy = st.integers(min_value=1, max_value=(1 << 5) - 1)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10 ** 6), a=subset_strategy, b=subset_strategy,
       c=subset_strategy)
def test_hausdorff_is_a_metric(seed, a, b, c):
    space = random_corpus(1, 5, seed=seed)[0].space
    full = (1 << space.n) - 1
    a, b, c = a & full or 1, b & full or 1, c & full or 1
    dab = hausdorff_distance(a, b, space)
    assert dab == hausdorff_distance(b, a, space)
    assert (dab == 0) == (a == b)
    assert hausdorff_distance(a, c, space) <= dab + hausdorff_distance(b, c, space)


# ---------------------------------------------------------------------------
# orbits


def test_omega_equals_orbit_after_transient(medium_random):
    for system in medium_random:
        for s in range(system.n):
            assert omega_limit_set(system, s) == \
                orbit_set(system, system.iterate(s, system.n))


# ---------------------------------------------------------------------------
# threshold grid


def test_one_point_grid():
    assert threshold_grid(line_space(1)).values == (Fraction(1),)


def test_grid_strictly_increasing_and_has_sentinel_midpoint():
    for system in random_corpus(15, 5, seed=9):
        g = threshold_grid(system.space).values
        assert all(x > 0 for x in g)
        assert all(x < y for x, y in zip(g, g[1:]))
        assert g[-1] > system.space.max_distance()


def test_verdicts_constant_between_grid_values():
    """Sample an eps strictly between consecutive grid values; the verdict
    must match the verdict at the midpoint the grid already contains."""
    for system in random_corpus(8, 4, seed=21):
        g = threshold_grid(system.space).values
        delta = g[0]
        for lo, hi in zip(g, g[1:]):
            probe = lo + (hi - lo) / 3  # not the midpoint the grid holds
            mid = (lo + hi) / 2
            v_probe = decide_shadowing(system, ThresholdPair(probe, delta))
            v_mid = decide_shadowing(system, ThresholdPair(mid, delta))
            assert v_probe.holds == v_mid.holds


def test_delta_graph_minimal_edges():
    from shadowing.deciders import delta_graph
    for system in random_corpus(10, 5, seed=14):
        m = system.space.min_positive_distance()
        dg = delta_graph(system, m)  # delta <= min distance: only exact edges
        for i in range(system.n):
            assert dg.succ[i] == (system.fmap[i],)
