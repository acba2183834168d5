"""Tests for the regular-realization layer.

Parabolic orders and intersection orders are cross-checked against a direct
walk of the subgroup's element set, which never touches the quotient or
orbit-stabilizer machinery under test.
"""

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polycert.coset import EnumerationLimits
from polycert.errors import InvalidGeneratorError
from polycert.families import family_a, family_k, tight_quotient_presentation
from polycert.realize import RealizedGroup, parabolic_intersection_order, realize
from polycert.words import Word, commutator, generator, pair, power

ORACLE_PRESENTATIONS = [
    tight_quotient_presentation((4, 4)),
    family_a(3, 1, (2, 2)),
    family_k(4, (2, 2, 2)),
]


def span_elements(rg, subset):
    """Element ids of the subgroup spanned by a generator subset.

    Walks the orbit of the identity under right multiplication, so it is
    independent of the quotient partitions used by ``parabolic_order``.
    """
    rights = [rg.right[g] for g in subset]
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for arr in rights:
            v = int(arr[u])
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def all_subsets(rank):
    gens = range(rank)
    return [s for r in range(rank + 1) for s in itertools.combinations(gens, r)]


def test_parabolic_orders_tight44(tight44):
    _, rg, _ = tight44
    assert rg.order == 32
    assert rg.parabolic_order(()) == 1
    assert rg.parabolic_order((0,)) == 2
    assert rg.parabolic_order((1,)) == 2
    assert rg.parabolic_order((2,)) == 2
    assert rg.parabolic_order((0, 1)) == 8
    assert rg.parabolic_order((1, 2)) == 8
    assert rg.parabolic_order((0, 2)) == 4
    assert rg.parabolic_order((0, 1, 2)) == 32


def test_intersection_orders_tight44(tight44):
    _, rg, _ = tight44
    assert rg.intersection_order((0, 1), (1, 2)) == 2
    assert rg.intersection_order((1, 2), (0, 1)) == 2
    # nested subsets short-circuit to the smaller parabolic
    assert rg.intersection_order((0,), (0, 1)) == 2
    assert rg.intersection_order((0, 1, 2), (0, 2)) == 4
    assert rg.intersection_order((0,), (2,)) == 1
    assert rg.intersection_order((), (0, 1)) == 1


def test_parabolic_orders_match_direct_span():
    for p in ORACLE_PRESENTATIONS:
        rg = RealizedGroup(p)
        for subset in all_subsets(rg.rank):
            assert rg.parabolic_order(subset) == len(span_elements(rg, subset))
        assert rg.stats["enumerations"] == 1


def test_intersection_orders_match_element_sets():
    for p in ORACLE_PRESENTATIONS:
        rg = RealizedGroup(p)
        subsets = all_subsets(rg.rank)
        spans = {s: span_elements(rg, s) for s in subsets}
        for sa in subsets:
            for sb in subsets:
                expected = len(spans[sa] & spans[sb])
                assert rg.intersection_order(sa, sb) == expected
        assert rg.stats["enumerations"] == 1


def test_left_arrays_commute_with_right_action():
    for p in ORACLE_PRESENTATIONS:
        rg = RealizedGroup(p)
        for x in range(rg.rank):
            lam = rg.left_array(x)
            assert int(lam[0]) == rg.element_of(generator(x))
            assert sorted(lam.tolist()) == list(range(rg.order))
            for g in range(rg.rank):
                rho = rg.right[g]
                # x * (e * g) == (x * e) * g
                assert np.array_equal(lam[rho], rho[lam])


def test_left_word_array_composition(tight44):
    _, rg, _ = tight44
    u = pair(0, 1)
    v = pair(1, 2)
    lam_u = rg.left_word_array(u)
    lam_v = rg.left_word_array(v)
    assert np.array_equal(rg.left_word_array(u * v), lam_u[lam_v])
    assert int(rg.left_word_array(u * v)[0]) == rg.element_of(u * v)
    assert np.array_equal(rg.left_word_array(Word([])), np.arange(rg.order))
    assert np.array_equal(rg.left_word_array(~u)[lam_u], np.arange(rg.order))


def test_quotient_partition_consistency():
    rg = RealizedGroup(family_k(4, (2, 2, 2)))
    for subset in [(0,), (0, 1), (1, 2, 3), (0, 2)]:
        q = rg.quotient(subset)
        block = rg.parabolic_order(subset)
        assert q.size * block == rg.order
        assert int(q.phi[0]) == 0
        reps = [int(r) for r in q.reps]
        assert reps == sorted(reps)
        for cid, rep in enumerate(reps):
            assert int(q.phi[rep]) == cid
        sizes = np.bincount(q.phi, minlength=q.size)
        assert set(sizes.tolist()) == {block}


def test_quotient_action_well_defined():
    rg = RealizedGroup(family_a(3, 1, (2, 2)))
    q = rg.quotient((1, 2))
    for g in range(rg.rank):
        act = q.action(g)
        lam = rg.left_array(g)
        # the left action on elements descends to the coset space
        assert np.array_equal(act[q.phi], q.phi[lam])
        assert sorted(act.tolist()) == list(range(q.size))


def test_realize_returns_shared_instances():
    p = tight_quotient_presentation((4, 8))
    a = realize(p)
    assert realize(p) is a
    assert realize(p, EnumerationLimits(), "hlt") is a
    f = realize(p, strategy="felsch")
    assert f is not a
    assert f.table.table == a.table.table


def test_element_of_and_element_order(tight44):
    _, rg, _ = tight44
    assert rg.element_of(Word([])) == 0
    assert rg.element_order(Word([])) == 1
    assert rg.element_order(generator(0)) == 2
    assert rg.element_order(pair(0, 1)) == 4
    assert rg.element_order(pair(1, 2)) == 4
    assert rg.element_order(pair(0, 2)) == 2
    assert rg.element_order(power(pair(0, 1), 2)) == 2
    assert rg.element_order(commutator(generator(0), generator(2))) == 1


def test_strategies_realize_identically():
    p = family_k(4, (3, 2, 2))
    h = RealizedGroup(p, strategy="hlt")
    f = RealizedGroup(p, strategy="felsch")
    assert h.order == f.order == 256
    assert h.table.table == f.table.table


def test_regular_permutation_group():
    rg = RealizedGroup(family_a(3, 1, (2, 2)))
    g = rg.regular_permutation_group()
    assert g.order() == rg.order == 32
    assert g.orbit(0) == tuple(range(32))


def test_bad_generator_subsets(tight44):
    _, rg, _ = tight44
    with pytest.raises(InvalidGeneratorError):
        rg.parabolic_order((0, 5))
    with pytest.raises(InvalidGeneratorError):
        rg.intersection_order((0,), (-1,))
    with pytest.raises(InvalidGeneratorError):
        rg.left_array(3)
    with pytest.raises(InvalidGeneratorError):
        rg.quotient((7,))


def test_parabolic_intersection_order_helper():
    p = tight_quotient_presentation((4, 4))
    assert parabolic_intersection_order(p, (0, 1), (1, 2)) == 2
    assert parabolic_intersection_order(p, (0,), (0, 2)) == 2


rank3_letters = st.tuples(st.integers(0, 2), st.sampled_from((1, -1)))
rank3_words = st.lists(rank3_letters, max_size=12).map(Word)


@given(w=rank3_words)
def test_left_word_action_matches_element_ids(tight44, w):
    _, rg, _ = tight44
    lam = rg.left_word_array(w)
    assert int(lam[0]) == rg.element_of(w)
    assert rg.order % rg.element_order(w) == 0
