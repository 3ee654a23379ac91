"""Factor-map lifting properties: theorem consistency, weakening order,
and lift certificates."""

import itertools
import random

import pytest

from shadowing.core import threshold_grid
from shadowing.induced import FactorMapSpec, validate_factor_map
from shadowing.lifting import (AlpThresholds, PROPERTY_TO_LIFTING,
                               decide_alap_family, decide_alp_fixed,
                               decide_ealp_oalp_soalp, decide_w1alp_fixed,
                               joint_grid, lift_walk, lifting_property,
                               verify_preservation)

from conftest import all_systems_up_to


def factor_map_family(max_maps=None, seed=0):
    """All valid factor maps between systems with at most 3 points (both
    metric families), optionally down-sampled reproducibly."""
    systems = all_systems_up_to(3)
    found = []
    for dom, cod in itertools.product(systems, repeat=2):
        if cod.n > dom.n:
            continue
        for phi in itertools.product(range(cod.n), repeat=dom.n):
            spec = FactorMapSpec(dom, cod, phi)
            if not validate_factor_map(spec):
                found.append(spec)
    if max_maps is not None and len(found) > max_maps:
        found = random.Random(seed).sample(found, max_maps)
    return found


@pytest.fixture(scope="module")
def map_family():
    return factor_map_family(max_maps=36, seed=1)


def test_family_is_nontrivial(map_family):
    assert len(map_family) == 36
    assert any(s.domain.n > s.codomain.n for s in map_family)


def test_theorem_consistency(map_family):
    for spec in map_family:
        for prop in PROPERTY_TO_LIFTING:
            rep = verify_preservation(spec, prop)
            assert rep["violations"] == [], (spec.domain.name,
                                             spec.codomain.name, prop, rep)


def test_weakening_order_fixed_thresholds(map_family):
    for spec in map_family[:12]:
        grid = joint_grid(spec).values
        for v_thr in grid[::2]:
            for d_thr in grid[::2]:
                for w_thr in grid[::2]:
                    th = AlpThresholds(v_thr, d_thr, w_thr)
                    if not decide_alp_fixed(spec, th).holds:
                        continue
                    assert decide_ealp_oalp_soalp(spec, th, "eALP").holds
                    assert decide_ealp_oalp_soalp(spec, th, "oALP").holds
                    assert decide_w1alp_fixed(spec, th).holds


def test_alaep_implies_alap(map_family):
    for spec in map_family[:15]:
        if decide_alap_family(spec, "ALAeP").holds:
            assert decide_alap_family(spec, "ALAP").holds


def test_soalp_never_unqualified_true(map_family):
    for spec in map_family[:8]:
        grid = joint_grid(spec).values
        th = AlpThresholds(grid[0], grid[0], grid[0])
        assert decide_ealp_oalp_soalp(spec, th, "soALP").holds is not True


def test_lift_walk_certificates(map_family):
    """Wherever ALP holds at fixed thresholds, every short downstairs walk
    must lift; lift_walk verifies the lift by direct simulation before
    returning it."""
    from shadowing.deciders import delta_graph
    rng = random.Random(5)
    for spec in map_family[:12]:
        grid = joint_grid(spec).values
        th = AlpThresholds(grid[-1], grid[-1], grid[0])
        if not decide_alp_fixed(spec, th).holds:
            continue
        wg = delta_graph(spec.codomain, th.W)
        walk = [rng.randrange(spec.codomain.n)]
        for _ in range(6):
            walk.append(rng.choice(wg.succ[walk[-1]]))
        xs = lift_walk(spec, th, walk)
        assert xs is not None and len(xs) == len(walk)


def test_alap_oalap_true_on_valid_maps(map_family):
    for spec in map_family:
        assert decide_alap_family(spec, "ALAP").holds is True
        assert decide_alap_family(spec, "oALAP").holds is True
