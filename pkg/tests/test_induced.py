"""Induced-system constructors: embeddings, products, and towers."""

import itertools

import pytest

from shadowing.core import (FiniteMetricSystem, discrete_space,
                            hausdorff_distance, line_space, mask_of)
from shadowing.induced import (CapExceeded, FactorMapError, FactorMapSpec,
                               check_mittag_leffler, hyperspace_system,
                               product_system, standard_inverse_limit,
                               symmetric_product, tower_limit,
                               validate_factor_map)

from conftest import all_systems_up_to, random_corpus


def _pairs_family():
    """All maps on <=3 points plus random systems up to 6 points."""
    return all_systems_up_to(3) + random_corpus(25, 6, seed=5)


def test_f2_embeds_in_hyperspace_isometrically():
    for system in _pairs_family():
        f2 = symmetric_product(system, 2, cap=64)
        hyp = hyperspace_system(system, cap=64)
        # match F_2 points to hyperspace points by their subset label
        index = {lab: i for i, lab in enumerate(hyp.space.point_labels)}
        emb = [index[lab] for lab in f2.space.point_labels]
        for a in range(f2.n):
            for b in range(f2.n):
                assert f2.space.dist[a][b] == hyp.space.dist[emb[a]][emb[b]]
            assert emb[f2.fmap[a]] == hyp.fmap[emb[a]]


def test_singleton_embedding_is_isometric_conjugacy():
    for system in random_corpus(15, 5, seed=6):
        f3 = symmetric_product(system, 3, cap=512)
        index = {lab: i for i, lab in enumerate(f3.space.point_labels)}
        sing = [index["{%s}" % system.space.point_labels[i]]
                for i in range(system.n)]
        for i in range(system.n):
            for j in range(system.n):
                assert system.space.dist[i][j] == \
                    f3.space.dist[sing[i]][sing[j]]
            assert sing[system.fmap[i]] == f3.fmap[sing[i]]


def test_hyperspace_metric_is_hausdorff_and_map_is_image():
    for system in random_corpus(10, 4, seed=7):
        hyp = hyperspace_system(system, cap=16)
        masks = []
        for lab in hyp.space.point_labels:
            names = lab.strip("{}").split(",")
            idx = [system.space.point_labels.index(s) for s in names]
            masks.append(mask_of(idx))
        for a, am in enumerate(masks):
            for b, bm in enumerate(masks):
                assert hyp.space.dist[a][b] == \
                    hausdorff_distance(am, bm, system.space)
            assert masks[hyp.fmap[a]] == system.image_mask(am)


def test_product_associativity_up_to_relabeling():
    rng_systems = random_corpus(9, 3, seed=8)
    for k in range(0, 9, 3):
        a, b, c = rng_systems[k:k + 3]
        left = product_system([product_system([a, b]), c])
        right = product_system([a, product_system([b, c])])
        flat = product_system([a, b, c])
        # canonical ordering is lexicographic in all three, so the distance
        # matrices and maps coincide positionally
        assert left.space.dist == right.space.dist == flat.space.dist
        assert left.fmap == right.fmap == flat.fmap


def test_tower_identity_bonds_conjugate_to_level_zero():
    for system in random_corpus(10, 4, seed=10):
        tower = standard_inverse_limit(system, 1)  # single level, no bonds
        lim1 = tower_limit(tower)
        assert lim1.fmap == system.fmap
        assert lim1.space.dist == system.space.dist


def test_standard_tower_threads_and_mittag_leffler():
    for system in random_corpus(10, 4, seed=12):
        tower = standard_inverse_limit(system, 3)
        lim = tower_limit(tower)
        ml = check_mittag_leffler(tower)
        if system.is_surjective():
            assert all(ml)
            assert lim is not None and lim.n == system.n
        if lim is not None:
            # threads satisfy the bond equations: x_j = f(x_{j+1})
            for lab in lim.space.point_labels:
                names = lab.strip("()").split(",")
                idx = [system.space.point_labels.index(s) for s in names]
                for j in range(len(idx) - 1):
                    assert system.fmap[idx[j + 1]] == idx[j]


def test_caps_fail_loudly():
    system = FiniteMetricSystem(line_space(6), (0, 1, 2, 3, 4, 5))
    with pytest.raises(CapExceeded):
        hyperspace_system(system, cap=5)
    with pytest.raises(CapExceeded):
        product_system([system, system], cap=10)


def test_factor_map_validation():
    base = FiniteMetricSystem(line_space(2), (0, 1), name="base")
    prod = product_system([base, base])
    good = FactorMapSpec(prod, base, (0, 0, 1, 1))
    assert validate_factor_map(good) == []
    not_onto = FactorMapSpec(prod, base, (0, 0, 0, 0))
    assert any("not in the image" in p for p in validate_factor_map(not_onto))
    shift = FiniteMetricSystem(line_space(2), (1, 0), name="shift")
    broken = FactorMapSpec(product_system([shift, shift]), base, (0, 0, 1, 1))
    assert any("semiconjugacy" in p or "commute" in p
               for p in validate_factor_map(broken))
