import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opfield.errors import BoundTooSmall, InputError
from opfield.growth import (
    FreeAlphabet,
    RelationFamily,
    enumerate_reduced,
    free_reduce,
    growth_function,
    left_mul,
    word_classes,
)

A2 = FreeAlphabet.standard(2)


def test_enumeration_sizes():
    assert enumerate_reduced(A2, 0) == [()]
    assert len(enumerate_reduced(A2, 1)) == 5
    assert len(enumerate_reduced(A2, 2)) == 17
    words = enumerate_reduced(A2, 4)
    assert all(free_reduce(w) == w for w in words)
    assert len(set(words)) == len(words)


def test_inverse_is_an_involution():
    for l in A2.letters:
        assert A2.inverse(A2.inverse(l)) == l != A2.inverse(l)
    assert left_mul(-1, (1, 2)) == (2,)
    assert A2.format((1, -2)) == "s1 s2^-1"


def test_free_growth():
    rep = growth_function(A2, RelationFamily(), 6)
    assert rep.shells[:3] == (4, 12, 36)
    assert all(rep.shells[i + 1] == 3 * rep.shells[i] for i in range(len(rep.shells) - 1))
    assert rep.classes == tuple(2 * 3**r - 1 for r in range(7))
    assert "transcendence" in rep.note


def test_constrained_family():
    fam = RelationFamily.fixed_along_powers(1, 2)
    rep = growth_function(A2, fam, 6, bound=8)
    assert rep.classes == tuple(2 * r + 1 for r in range(7))


def test_parsed_family_matches_builtin():
    fam = RelationFamily.parse(["s1 s2^l = s2^l"], A2)
    assert fam == RelationFamily.fixed_along_powers(1, 2)


def test_single_relation_hand_oracle():
    # Theta_1 = {e, s1, s1^-1, s2, s2^-1}; s1 ~ e and its translate s1^-1 ~ e
    fam = RelationFamily.parse(["s1 = 1"], A2)
    rep = growth_function(A2, fam, 1)
    assert rep.classes == (1, 3)
    part = rep.partition
    assert part[()] == part[(1,)] == part[(-1,)]
    assert len({part[(2,)], part[(-2,)], part[()]}) == 3


def test_bound_errors():
    fam = RelationFamily.fixed_along_powers()
    with pytest.raises(BoundTooSmall):
        growth_function(A2, fam, 4, bound=2)
    with pytest.raises(BoundTooSmall):
        growth_function(A2, fam, 2)
    with pytest.raises(InputError):
        RelationFamily.parse(["s1 s3 = 1"], A2)
    with pytest.raises(InputError):
        RelationFamily.parse(["s1 s2"], A2)


def test_counts_stable_under_larger_bound():
    fam = RelationFamily.fixed_along_powers()
    a = growth_function(A2, fam, 5, bound=6).classes
    b = growth_function(A2, fam, 5, bound=9).classes
    assert a == b


reduced_pairs = st.lists(
    st.tuples(
        st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3).map(free_reduce),
        st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3).map(free_reduce),
    ),
    max_size=3,
)


@settings(max_examples=40, deadline=None)
@given(reduced_pairs, reduced_pairs)
def test_more_relations_never_increase_counts(base, extra):
    r = 3
    words, index, find = word_classes(A2, base, r + 2)
    words2, index2, find2 = word_classes(A2, base + extra, r + 2)
    for rho in range(r + 1):
        c1 = len({find(index[w]) for w in words if len(w) <= rho})
        c2 = len({find2(index2[w]) for w in words2 if len(w) <= rho})
        assert c2 <= c1 <= sum(1 for w in words if len(w) <= rho)


@settings(max_examples=40, deadline=None)
@given(reduced_pairs)
def test_partition_is_left_closed(pairs):
    R = 4
    words, index, find = word_classes(A2, pairs, R)
    classes = {}
    for w in words:
        classes.setdefault(find(index[w]), []).append(w)
    for members in classes.values():
        u = members[0]
        for v in members[1:]:
            for l in A2.letters:
                lu, lv = left_mul(l, u), left_mul(l, v)
                if len(lu) <= R and len(lv) <= R and (len(u) < R and len(v) < R):
                    assert find(index[lu]) == find(index[lv])


def test_report_is_monotone():
    rng = random.Random(5)
    for _ in range(5):
        fam = RelationFamily.parse([f"s{rng.randint(1, 2)} s{rng.randint(1, 2)} = s{rng.randint(1, 2)}"], A2)
        rep = growth_function(A2, fam, 4)
        assert all(c <= s for c, s in zip(rep.classes, rep.sizes))
        assert list(rep.classes) == sorted(rep.classes)


@pytest.mark.parametrize("specs", [["s1 s2^l = s2^l"], ["s1 = 1"], ["s1 s2 = s2 s1"]])
def test_report_partition_is_left_closed(specs):
    fam = RelationFamily.parse(specs, A2)
    r = 4
    rep = growth_function(A2, fam, r, bound=6 if fam.parametric else None)
    part = rep.partition
    for u in part:
        for v in part:
            if part[u] == part[v] and len(u) < r and len(v) < r:
                for l in A2.letters:
                    assert part[left_mul(l, u)] == part[left_mul(l, v)]
