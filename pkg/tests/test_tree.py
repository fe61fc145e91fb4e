import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from selfsim.catalog import catalog_triple
from selfsim.similarity import random_element, random_subgroup_element
from selfsim.tree import (ExplicitAutomaton, Identity, IntransitiveError, Permutation, Verdict, act, agree_to_depth,
                          bisim_equal, compile, compose, format_portrait, format_word, invert, is_trivial_to_depth,
                          kernel_search, level1_transitive, level_orbits, portrait, reduced_words, section_at,
                          stabilizer_pair, state_closure)

AM = catalog_triple("adding-machine")
T = AM.generator("t")


def odometer(word, n=1):
    """Little-endian +n on letters 1..2."""
    k = len(word)
    value = sum((a - 1) << i for i, a in enumerate(word)) + n
    value %= 1 << k
    return tuple(((value >> i) & 1) + 1 for i in range(k))


def test_permutation_basics():
    p = Permutation((2, 3, 1))
    assert str(p) == "(1 2 3)"
    assert p.then(p.inverse()).is_identity
    assert str(Permutation.identity(3)) == "e"
    assert p.cycles() == [(1, 2, 3)]


def test_odometer_recursion():
    a = compile(AM, T)
    assert str(a.root_perm) == "(1 2)"
    assert section_at(a, (1,)).root_perm.is_identity
    assert section_at(a, (2,)) is a
    assert section_at(a, ()) is a
    assert is_trivial_to_depth(section_at(a, (1,)), 8)
    assert format_portrait(portrait(a, 2)) == "(1 2)[ e[], (1 2)[] ]"
    assert format_portrait(portrait(a, 0)) == "-"


def test_odometer_action():
    a = compile(AM, T)
    assert act(a, (2, 2, 2)) == (1, 1, 1)
    assert act(a, (1, 2, 1)) == (2, 2, 1)
    for k in range(1, 7):
        for w in itertools.product((1, 2), repeat=k):
            assert act(a, w) == odometer(w)
            assert act(compose(a, a), w) == odometer(w, 2)
            assert act(invert(a), w) == odometer(w, -1)
            assert act(compile(AM, T ** 5), w) == odometer(w, 5)


def test_act_rejects_bad_letters():
    with pytest.raises(ValueError):
        act(compile(AM, T), (3,))


def test_identity_compiles_to_identity(triple):
    a = compile(triple, triple.group.identity)
    assert portrait(a, 3).is_trivial
    w = tuple(random.Random(0).randint(1, triple.m) for _ in range(6))
    assert act(a, w) == w


def test_kernel_element_is_trivial():
    t = catalog_triple("zwrz-pair-2")
    b = t.generator("b")
    assert portrait(compile(t, b * b), 10).is_trivial


def test_compile_is_memoized():
    assert compile(AM, T ** 3) is compile(AM, T ** 3)


def test_homomorphism_on_portraits(triple):
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32))
    def check(seed):
        rng = random.Random(seed)
        g, h = random_element(triple.group, rng), random_element(triple.group, rng)
        left = compile(triple, g * h)
        assert portrait(left, 4) == portrait(compose(compile(triple, g), compile(triple, h)), 4)
        assert agree_to_depth(compile(triple, g.inverse()), invert(compile(triple, g)), 4)

    check()


def test_compose_applies_left_first():
    t = catalog_triple("lamplighter")
    b, tt = compile(t, t.generator("b")), compile(t, t.generator("t"))
    for w in itertools.product((1, 2), repeat=4):
        assert act(compose(b, tt), w) == act(tt, act(b, w))


def test_bisim_examples():
    a = compile(AM, T)
    e = Identity(2)
    assert bisim_equal(e, e).verdict is Verdict.EQUAL
    r = bisim_equal(a, e)
    assert r.verdict is Verdict.DISTINCT and str(r) == "DistinctAt([1])"
    r = bisim_equal(compile(AM, T ** 2), compose(a, a))
    assert r.verdict is Verdict.EQUAL and r.pairs == 2
    assert bisim_equal(compose(a, e), a).verdict is Verdict.EQUAL


def test_bisim_finds_deep_difference():
    a, b = compile(AM, T), compile(AM, T ** 3)
    r = bisim_equal(compose(a, invert(a)), compose(b, invert(b)))
    assert r.verdict is Verdict.EQUAL
    r = bisim_equal(compile(AM, T ** 2), compile(AM, T ** 6))
    assert r.verdict is Verdict.DISTINCT
    # they differ by +4, first visible on the third letter
    assert r.witness == (1, 1, 1)
    assert act(compile(AM, T ** 2), r.witness) != act(compile(AM, T ** 6), r.witness)
    assert agree_to_depth(compile(AM, T ** 2), compile(AM, T ** 6), 2)


def test_bisim_unknown_over_cap():
    a = compile(AM, T)
    # equality needs two section pairs
    assert bisim_equal(compile(AM, T ** 2), compose(a, a), cap=1).verdict is Verdict.UNKNOWN
    assert bisim_equal(compile(AM, T ** 2), compose(a, a), cap=2).verdict is Verdict.EQUAL


def test_state_closure_examples():
    c = state_closure([compile(AM, T)], names=["t"])
    assert c.closed and c.size == 2
    assert set(c.automaton.states) == {"e", "t"}
    assert not state_closure([compile(AM, T)], cap=1).closed
    lamp = catalog_triple("lamplighter")
    names = [n for n, _ in lamp.generators]
    c = state_closure([compile(lamp, g) for _, g in lamp.generators], names=names)
    assert c.closed and c.size <= 4
    dot = c.automaton.to_dot("lamplighter")
    assert dot.startswith('digraph "lamplighter"') and '"t" -> "t" [label="1|1"];' in dot


def test_explicit_automaton_matches_compiled():
    lamp = catalog_triple("lamplighter")
    gens = [compile(lamp, g) for _, g in lamp.generators]
    c = state_closure(gens, names=["b", "t"])
    for name, g in zip(c.generator_states, gens):
        assert bisim_equal(c.automaton.state(name), g).verdict is Verdict.EQUAL


def test_explicit_automaton_rejects_missing_states():
    with pytest.raises(ValueError):
        ExplicitAutomaton(2, {"a": (Permutation((2, 1)), ("a", "b"))})


def test_level_orbits():
    a = compile(AM, T)
    for level in range(1, 11):
        assert len(level_orbits([a], level)) == 1
    assert level_orbits([Identity(2)], 1) == [[(1,)], [(2,)]]
    t = catalog_triple("thm2-Z")
    assert level1_transitive([compile(t, x) for x in t.transversal])


def test_reduced_words_order():
    words = list(reduced_words(2, 2))
    assert words[:4] == [((0, 1),), ((0, -1),), ((1, 1),), ((1, -1),)]
    assert len(words) == 4 + 4 * 3
    assert format_word(((0, 1), (1, -1)), ["b", "t"]) == "b·t^-1"


def test_kernel_search_examples():
    assert kernel_search(AM, [T], 6, 10) == []
    t = catalog_triple("zwrz-pair-2")
    found = kernel_search(t, [t.generator("b"), t.generator("t")], 2, 10)
    assert "b·b" in [w.format(["b", "t"]) for w in found]


def test_stabilizer_examples():
    data = stabilizer_pair(AM, [T])
    assert data.index == 2
    assert data.words == [((0, 1), (0, 1))]
    assert data.sections == [T]
    assert data.verify(depth=8)
    empty = stabilizer_pair(AM, [AM.group.identity], require_transitive=False)
    assert empty.index == 1 and empty.words == [] and empty.sections == []
    with pytest.raises(IntransitiveError):
        stabilizer_pair(AM, [AM.group.identity])
    lamp = catalog_triple("lamplighter")
    data = stabilizer_pair(lamp, [g for _, g in lamp.generators])
    assert data.index == 2 and data.words
    assert data.verify(depth=8)


def test_subgroup_fixes_first_letter(triple):
    rng = random.Random(5)
    for _ in range(50):
        h = random_subgroup_element(triple, rng)
        assert compile(triple, h).root_perm(1) == 1
