import itertools

import pytest
from hypothesis import given, settings, strategies as st

from braidkex.braid import BraidContext, BraidError, Word, conjugate, equals, invert, multiply, to_normal_form
from braidkex.subgroups import (
    GeneratorRange,
    SubgroupSpec,
    SubgroupWord,
    bounded_membership_search,
    commute_elementwise,
    evaluate_at,
    parabolic_expression,
    parabolic_membership,
    parabolic_subgroup_word,
    permutation_of,
    shortlex_ball,
    standard_split,
    subgroup_word_eval,
)

B3, B4, B5 = BraidContext(3), BraidContext(4), BraidContext(5)


def W(*xs):
    return Word(tuple(xs))


def brute_force_search(g, spec, depth):
    """Unpruned shortlex enumeration of every entry sequence up to ``depth``."""
    letters = [(i, s) for i in range(1, len(spec) + 1) for s in (1, -1)]
    for length in range(depth + 1):
        for entries in itertools.product(letters, repeat=length):
            sw = SubgroupWord(entries)
            if equals(spec.ctx, subgroup_word_eval(spec, sw), g):
                return sw
    return None


def test_standard_split():
    A, B = standard_split(4, 2)
    assert A.generators == (W(1),) and B.generators == (W(3),)
    A, B = standard_split(6, 3)
    assert A.generators == (W(1), W(2)) and B.generators == (W(4), W(5))
    for bad in [(4, 3), (3, 1), (5, 1)]:
        with pytest.raises(BraidError):
            standard_split(*bad)


@pytest.mark.parametrize("n", range(4, 9))
def test_standard_split_always_commutes(n):
    for l in range(2, n - 1):
        assert commute_elementwise(*standard_split(n, l))


def test_commute_elementwise():
    assert commute_elementwise(*standard_split(5, 2))
    assert not commute_elementwise(SubgroupSpec.artin(B3, [1]), SubgroupSpec.artin(B3, [2]))
    assert commute_elementwise(SubgroupSpec.artin(B3, [1]), SubgroupSpec.artin(B3, [1]))
    with pytest.raises(BraidError):
        commute_elementwise(SubgroupSpec.artin(B3, [1]), SubgroupSpec.artin(B4, [3]))


def test_parabolic_membership_examples():
    assert parabolic_membership(B4, W(1, 1), GeneratorRange(1, 1))
    assert not parabolic_membership(B4, W(3), GeneratorRange(1, 1))
    assert parabolic_membership(B5, W(2, -2), GeneratorRange(3, 3))


def test_sigma3_outside_sigma1_subgroup():
    # permutation obstruction: σ3 moves strand 4, <σ1> never does
    assert permutation_of(B4, W(3)) == (1, 2, 4, 3)
    assert bounded_membership_search(W(3), SubgroupSpec.artin(B4, [1]), 8) is None


def test_parabolic_membership_pure_braid_non_member():
    # σ2² has trivial permutation, so only the normal form can rule it out
    r = GeneratorRange(1, 1)
    assert permutation_of(B4, W(2, 2)) == (1, 2, 3, 4)
    assert not parabolic_membership(B4, W(1, 2, 2, -1), r)
    assert not parabolic_membership(B4, W(-1, 2, 2, 1, 1), r)


def test_parabolic_range_detection():
    assert SubgroupSpec.artin(B5, [2, 3]).parabolic_range() == GeneratorRange(2, 3)
    assert SubgroupSpec.artin(B5, [1, 3]).parabolic_range() is None
    assert SubgroupSpec(B5, (W(1, 1),)).parabolic_range() is None


def test_bounded_membership_search_examples():
    S = SubgroupSpec.artin(B4, [1, 3])
    assert bounded_membership_search(W(), S, 0) == SubgroupWord()
    found = bounded_membership_search(W(1, 3), S, 2)
    assert found == SubgroupWord(((1, 1), (2, 1)))
    assert found == brute_force_search(W(1, 3), S, 2)
    assert bounded_membership_search(W(2), S, 6) is None
    assert brute_force_search(W(2), S, 3) is None


@pytest.mark.parametrize(
    "target, gens",
    [
        ((-1, 2, -1), [(1,), (2,)]),
        ((2, 1, 1, -2), [(1,), (2, 1)]),
        ((1, 2, 1, 2), [(1, 2), (2,)]),
        ((-3, -3), [(1,), (3,)]),
    ],
)
def test_bounded_search_matches_unpruned_oracle(target, gens):
    ctx = B4
    S = SubgroupSpec(ctx, tuple(Word(g) for g in gens))
    assert bounded_membership_search(Word(target), S, 4) == brute_force_search(Word(target), S, 4)


def test_shortlex_ball_distinct_and_ordered():
    S = SubgroupSpec.artin(B3, [1, 2])
    ball = list(shortlex_ball(S, 3))
    keys = [e.key for e in ball]
    assert len(keys) == len(set(keys))
    lengths = [len(e.word) for e in ball]
    assert lengths == sorted(lengths)
    for e in ball:
        assert equals(B3, subgroup_word_eval(S, e.word), e.plain)
        assert to_normal_form(B3, e.plain) == e.nf
    # <σ1> ball is just σ1^k, |k| <= 3
    assert len(list(shortlex_ball(SubgroupSpec.artin(B3, [1]), 3))) == 7


def test_subgroup_word_eval():
    S = SubgroupSpec.artin(B3, [1, 2])
    assert subgroup_word_eval(S, SubgroupWord()) == W()
    assert subgroup_word_eval(S, SubgroupWord(((1, 1), (2, -1)))) == W(1, -2)
    with pytest.raises(BraidError):
        subgroup_word_eval(S, SubgroupWord(((3, 1),)))
    with pytest.raises(BraidError):
        SubgroupWord(((1, 2),))


def test_subgroup_json_round_trip():
    S = SubgroupSpec(B4, (W(1, -2), W(3)), ("p", "q"))
    assert SubgroupSpec.from_json(S.to_json()) == S
    sw = SubgroupWord(((2, -1), (1, 1)))
    assert SubgroupWord.from_json(sw.to_json()) == sw
    assert S.to_json() == {"n": 4, "generators": [[1, -2], [3]], "labels": ["p", "q"]}


# -- properties ---------------------------------------------------------------


@st.composite
def parabolic_cases(draw):
    n = draw(st.integers(4, 6))
    lo = draw(st.integers(1, n - 1))
    hi = draw(st.integers(lo, n - 1))
    inside = st.integers(lo, hi).flatmap(lambda i: st.sampled_from([i, -i]))
    u = Word(tuple(draw(st.lists(inside, max_size=8))))
    v = Word(tuple(draw(st.lists(inside, max_size=8))))
    return BraidContext(n), GeneratorRange(lo, hi), u, v


@settings(max_examples=200, deadline=None)
@given(parabolic_cases())
def test_words_in_range_are_members(case):
    ctx, r, u, _ = case
    expr = parabolic_expression(ctx, u, r)
    assert expr is not None
    assert equals(ctx, expr, u)
    assert all(r.lo <= abs(x) <= r.hi for x in expr.letters)


@settings(max_examples=200, deadline=None)
@given(parabolic_cases(), st.data())
def test_outside_generator_square_is_not_member(case, data):
    ctx, r, u, v = case
    outside = [k for k in range(1, ctx.n) if not r.lo <= k <= r.hi]
    if not outside:
        return
    k = data.draw(st.sampled_from(outside))
    e = data.draw(st.sampled_from([1, 2, -1, -2]))
    # u σ_k^e v lies in the parabolic iff σ_k^e does, which it does not
    g = multiply(u, Word((k,) * abs(e) if e > 0 else (-k,) * abs(e)), v)
    assert not parabolic_membership(ctx, g, r)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 6).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), max_size=8))))
def test_parabolic_agrees_with_search(case):
    n, letters = case
    ctx = BraidContext(n)
    g = Word(tuple(letters))
    S = SubgroupSpec.artin(ctx, [1, 2])
    found = bounded_membership_search(g, S, 3)
    if found is not None:
        assert parabolic_membership(ctx, g, GeneratorRange(1, 2))
        assert equals(ctx, subgroup_word_eval(S, found), g)
    sw = parabolic_subgroup_word(S, g)
    if sw is not None:
        assert equals(ctx, subgroup_word_eval(S, sw), g)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=6),
    st.lists(st.integers(1, 4).flatmap(lambda i: st.sampled_from([i, -i])), max_size=6),
)
def test_eval_at_conjugated_tuple_is_conjugate(entries, y_letters):
    S = SubgroupSpec(B5, (W(1, 2), W(-3), W(4, 1)))
    sw = SubgroupWord(tuple(entries))
    y = Word(tuple(y_letters))
    lhs = subgroup_word_eval(S.conjugated(y), sw)
    assert equals(B5, lhs, conjugate(subgroup_word_eval(S, sw), y))
    assert equals(B5, evaluate_at(S.conjugated(y).generators, sw), lhs)
