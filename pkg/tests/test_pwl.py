"""Piecewise-linear engine: exact images, shadow-set runs, and the
generated counterexample families."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowing.pwl import (CUBIC_RESOLUTION, EXAMPLE_IDS,
                           ExampleParameterError, PLMap, RationalIntervalSet,
                           RotationSystem, cubic_interpolation_error,
                           cubic_tent_map, generate_example, open_ball_set,
                           pl_image, pl_inverse_increasing,
                           rotation_defect_search, rotation_limit_profile,
                           shadow_set_run, symmetric_shadow_run, tent_map,
                           tent_map_with_isolated, validate_pseudo_orbit_spec)

rationals = st.fractions(min_value=0, max_value=1)


# ---------------------------------------------------------------------------
# interval sets


@settings(max_examples=100, deadline=None)
@given(a=rationals, b=rationals, c=rationals, d=rationals, x=rationals)
def test_interval_set_boolean_algebra(a, b, c, d, x):
    s = RationalIntervalSet.interval(min(a, b), max(a, b), lo_open=True)
    t = RationalIntervalSet.interval(min(c, d), max(c, d), hi_open=True)
    u = s | t
    i = s & t
    assert u.contains(x) == (s.contains(x) or t.contains(x))
    assert i.contains(x) == (s.contains(x) and t.contains(x))
    assert i.is_subset_of(s) and i.is_subset_of(t)
    assert s.is_subset_of(u) and t.is_subset_of(u)
    # canonical form: equality of sets is equality of tuples
    assert (t | s) == u and (t & s) == i


def test_interval_set_merging():
    s = RationalIntervalSet.from_pieces([
        (0, 1, False, True), (1, 2, False, False), (3, 3, False, False)])
    assert s.intervals == ((Fraction(0), Fraction(2), False, False),
                           (Fraction(3), Fraction(3), False, False))


# ---------------------------------------------------------------------------
# pl_image exactness


def test_pl_image_documented_cases():
    f = tent_map()
    assert pl_image(f, RationalIntervalSet.interval(0, Fraction(1, 2))) == \
        RationalIntervalSet.interval(0, 1)
    assert pl_image(f, RationalIntervalSet.point(Fraction(1, 3))) == \
        RationalIntervalSet.point(Fraction(2, 3))
    assert pl_image(f, RationalIntervalSet.interval(Fraction(1, 4),
                                                    Fraction(3, 4))) == \
        RationalIntervalSet.interval(Fraction(1, 2), 1)


_MAPS = [tent_map(), cubic_tent_map(Fraction(1, 64)), tent_map_with_isolated()]


@settings(max_examples=120, deadline=None)
@given(x=rationals, seed=st.integers(0, 10 ** 6))
def test_pl_image_of_point_matches_evaluation(x, seed):
    rng = random.Random(seed)
    f = rng.choice(_MAPS)
    x = f.lo + x * (f.hi - f.lo)
    assert pl_image(f, RationalIntervalSet.point(x)) == \
        RationalIntervalSet.point(f.evaluate(x))


def test_pl_image_isolated_point():
    f = tent_map_with_isolated()
    assert pl_image(f, RationalIntervalSet.point(2)) == \
        RationalIntervalSet.point(1)


def test_pl_inverse_increasing():
    g = cubic_tent_map()
    y = Fraction(-1, 2)
    x = pl_inverse_increasing(g, y, g.lo, Fraction(0))
    assert g.evaluate(x) == y


def test_cubic_interpolation_error_bound():
    res = CUBIC_RESOLUTION
    bound = cubic_interpolation_error(res)
    assert bound == Fraction(3, 4) * res * res
    g = cubic_tent_map(res)
    # spot-check the bound against the true cubic at off-grid points
    for k in (5, 17, 123):
        x = Fraction(-1) + Fraction(2 * k + 1, 2) * res
        if x > 0:
            break
        assert abs(g.evaluate(x) - x ** 3) <= bound


# ---------------------------------------------------------------------------
# shadow-set runs


def _tent_noisy_orbit(rng, delta, length):
    f = tent_map()
    x = Fraction(rng.randint(0, 64), 64)
    orbit = [x]
    for _ in range(length):
        fx = f.evaluate(x)
        noise = Fraction(rng.randint(-3, 3), 1) * delta / 4
        x = min(max(fx + noise, Fraction(0)), Fraction(1))
        orbit.append(x)
    return orbit


def test_shadow_run_eps_monotone():
    rng = random.Random(4)
    f = tent_map()
    for _ in range(10):
        orbit = _tent_noisy_orbit(rng, Fraction(1, 16), 12)
        small = shadow_set_run(f, orbit, Fraction(1, 8))
        large = shadow_set_run(f, orbit, Fraction(1, 4))
        for s, l in zip(small, large):
            assert s.is_subset_of(l)


def test_tent_positive_control():
    """Single-point pseudo-orbits of the tent map with delta <= eps/4 stay
    shadowable over horizons up to 200 — the base map has shadowing."""
    rng = random.Random(7)
    eps = Fraction(1, 8)
    for _ in range(5):
        orbit = _tent_noisy_orbit(rng, eps / 4, 200)
        run = shadow_set_run(tent_map(), orbit, eps)
        assert not run[-1].is_empty()


def test_f3_negative_control():
    """tent-F3-shadowing at eps = 1/12 empties for every admissible delta
    tried, while a larger eps makes the same sequence shadowable."""
    eps = Fraction(1, 12)
    for delta in (Fraction(1, 24), Fraction(1, 48), Fraction(1, 100)):
        spec = generate_example("tent-F3-shadowing",
                                {"delta": delta, "horizon": 40})
        res = symmetric_shadow_run(tent_map(), spec.states, eps, 3)
        assert not res["shadowable"]
        assert res["certificate"]["kind"] == "symmetric-unshadowable"
    spec = generate_example("tent-F3-shadowing",
                            {"delta": Fraction(1, 24), "horizon": 8})
    res = symmetric_shadow_run(tent_map(), spec.states, Fraction(1, 2), 3)
    assert res["shadowable"]


def test_symmetric_run_n1_matches_point_run():
    rng = random.Random(9)
    orbit = _tent_noisy_orbit(rng, Fraction(1, 16), 10)
    eps = Fraction(1, 8)
    res = symmetric_shadow_run(tent_map(), [(x,) for x in orbit], eps, 1)
    run = shadow_set_run(tent_map(), orbit, eps)
    assert res["shadowable"] == (not run[-1].is_empty())


# ---------------------------------------------------------------------------
# generators


@pytest.mark.parametrize("example_id", EXAMPLE_IDS)
def test_generators_self_validate(example_id):
    spec = generate_example(example_id)
    ok, problems = validate_pseudo_orbit_spec(spec)
    assert ok, problems
    assert len(spec.defects) == max(len(spec.states) - 1, 0)
    assert all(d < b or (d == 0 and b == 0)
               for d, b in zip(spec.defects, spec.defect_bounds)) or \
        all(d <= b for d, b in zip(spec.defects, spec.defect_bounds))


def test_limit_generator_defects_shrink():
    spec = generate_example("tent-F3-limit", {"horizon": 200})
    bounds = spec.defect_bounds
    assert all(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:]))
    assert bounds[-1] < bounds[0] / 4  # strictly shrinking schedule


def test_generator_rejects_bad_parameters():
    with pytest.raises(ExampleParameterError):
        generate_example("tent-F3-shadowing", {"delta": Fraction(1, 2)})
    with pytest.raises(ValueError):
        generate_example("no-such-example")


# ---------------------------------------------------------------------------
# rotation searches


def test_rotation_defect_search_certifies():
    eps = Fraction(1, 21)
    spec = generate_example("rotation-hyper-orbital")
    res = rotation_defect_search(spec, eps, Fraction(1, 1000))
    assert res["certified"] and res["defect_lower_bound"] > eps


def test_rotation_defect_search_inconclusive_when_coarse():
    eps = Fraction(1, 21)
    spec = generate_example("rotation-hyper-orbital")
    res = rotation_defect_search(spec, eps, Fraction(1, 2))
    assert res["status"] == "inconclusive" and not res["certified"]


def test_rotation_limit_profile_mismatch():
    spec = generate_example("rotation-hyper-orbital-limit")
    prof = rotation_limit_profile(spec, warmup=len(spec.states) // 4)
    assert prof["profile_matched"] is False
    assert prof["mismatch_lower_bound"] > 0


def test_rotation_horizon_below_period():
    spec = generate_example("rotation-hyper-orbital")
    assert spec.params["horizon"] < spec.report["alpha_denominator"]
