import random

import pytest
from hypothesis import given, settings, strategies as st

from selfsim.abelian import AbelianDescriptor, AbelianElement
from selfsim.catalog import ENTRIES, catalog, catalog_triple, triple_names
from selfsim.similarity import (AbelianPair, InvalidTriple, NotInSubgroup, VirtualEndo, abelian_pair, apply_f,
                                coset_index, lift_pair, make_triple, module_generators, random_element,
                                random_subgroup_element, subgroup, theorem2_build, validate_triple)
from selfsim.wreath import GroupDescriptor, XDescriptor


def copies(G, x, values):
    return G.element([((x,), AbelianElement.make(G.base, [((j, 0), v) for j, v in enumerate(values)]))])


def test_catalog_contents():
    assert len(ENTRIES) == 5
    assert isinstance(catalog("adding-machine"), AbelianPair)
    assert catalog("adding-machine").index == 2
    for name in ("zwrz-pair-generic(4)", "zwrz-pair-generic:4", "zwrz-pair-generic-4"):
        assert catalog_triple(name).m == 4
    with pytest.raises(KeyError):
        catalog("grigorchuk")


@pytest.mark.parametrize("name", triple_names(generic_m=(3, 4, 5)))
def test_catalog_triples_validate(name):
    report = validate_triple(catalog_triple(name), samples=200)
    assert report.ok, report.text()


def test_catalog_indices():
    assert {n: catalog_triple(n).m for n in triple_names()} == {
        "adding-machine": 2, "lamplighter": 2, "thm2-Z": 4, "zwrz-pair-2": 2, "zwrz-pair-generic(4)": 4}


def test_corrupted_transversal_is_caught():
    t = catalog_triple("adding-machine")
    G = t.group
    bad = make_triple(t.subgroup, t.endo, [G.identity, G.top_element((2,))], t.generators)
    report = validate_triple(bad, samples=50)
    assert not report["transversal-distinct-cosets"].passed
    assert report["transversal-distinct-cosets"].witness
    assert not report["coset-coherence"].passed
    assert "no listed coset" in report["coset-coherence"].witness
    with pytest.raises(InvalidTriple):
        coset_index(bad, G.top_element((1,)))


def test_ill_defined_endomorphism_is_caught():
    G = GroupDescriptor(AbelianDescriptor.of(4), XDescriptor(1))
    sub = subgroup(G, [[1]], [((0,), 0)], [[2]])
    assert sub.index == 2
    tags = [tag for tag, _ in module_generators(sub)]
    assert tags == [("diff", (0,), 0, 0), ("s", 0)]
    # 2 * delta_0 has order 2, so it cannot go to delta_0 of order 4
    endo = VirtualEndo.build(sub, [[1]], [G.identity, G.delta((0,))])
    report = validate_triple(make_triple(sub, endo), samples=20)
    assert not report["endomorphism-well-defined"].passed


def test_adding_machine_cosets_and_f():
    t = catalog_triple("adding-machine")
    G = t.group
    assert coset_index(t, G.identity) == 1
    assert coset_index(t, G.top_element((1,))) == 2
    assert apply_f(t, G.top_element((6,))) == G.top_element((3,))
    assert apply_f(t, G.identity) == G.identity
    with pytest.raises(NotInSubgroup):
        apply_f(t, G.top_element((1,)))


def test_zwrz_pair_images():
    t = catalog_triple("zwrz-pair-2")
    G = t.group
    b, tt = t.generator("b"), t.generator("t")
    assert apply_f(t, tt ** 2) == tt
    assert apply_f(t, b) == b
    assert apply_f(t, b.shift((1,))) == G.identity
    for k in range(-5, 6):
        assert apply_f(t, b.shift((2 * k,))) == b.shift((k,))
    with pytest.raises(NotInSubgroup):
        apply_f(t, tt)


def test_lamplighter_images():
    t = catalog_triple("lamplighter")
    b, tt = t.generator("b"), t.generator("t")
    assert t.contains(tt) and not t.contains(b)
    assert apply_f(t, b * b.shift((1,))) == b
    assert apply_f(t, tt) == tt


def test_omega_triple_coset_index_is_lexicographic():
    t = catalog_triple("thm2-Z")
    rng = random.Random(3)
    for _ in range(200):
        g = random_element(t.group, rng)
        beta11 = dict(g.base).get((0,))
        s = beta11.get((0, 0)) % 2 if beta11 else 0
        assert coset_index(t, g) == 1 + 2 * s + g.top[0]


def test_omega_triple_formulas():
    t = catalog_triple("thm2-Z")
    G = t.group
    # second coordinate: swap the first two copies
    assert apply_f(t, copies(G, 1, [3, 4, 5])) == copies(G, 1, [4, 3, 5])
    # first coordinate: halve the first copy, add the second, drop it
    assert apply_f(t, copies(G, 0, [2, 5, 7])) == copies(G, 0, [6, 7])
    assert apply_f(t, copies(G, 0, [4, 0, 0, 0, 9])) == copies(G, 0, [2, 0, 0, 9])
    with pytest.raises(NotInSubgroup):
        apply_f(t, copies(G, 0, [1]))


def test_omega_triple_index_is_twice_pair_index():
    assert theorem2_build(catalog("adding-machine")).m == 4
    degenerate = theorem2_build(abelian_pair([3], [[1]], [[1]]))
    assert degenerate.m == 2
    assert validate_triple(degenerate, samples=50).ok
    wider = theorem2_build(abelian_pair([0], [[3]], [[1]]))
    assert wider.m == 6
    assert validate_triple(wider, samples=50).ok


def test_lift_pair_rank_two():
    pair = abelian_pair([0, 0], [[2, 0], [0, 1]], [[0, 1], [1, 0]])
    t = lift_pair(pair)
    assert t.m == 2
    assert [n for n, _ in t.generators] == ["t1", "t2"]
    assert validate_triple(t, samples=50).ok


def test_omega_base_needs_tails():
    G = GroupDescriptor(AbelianDescriptor.omega(AbelianDescriptor.of(0)), XDescriptor(0, (2,)))
    with pytest.raises(InvalidTriple):
        module_generators(subgroup(G))


def test_f_is_a_homomorphism(triple):
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 2**32))
    def check(s1, s2):
        h1 = random_subgroup_element(triple, random.Random(s1))
        h2 = random_subgroup_element(triple, random.Random(s2))
        assert triple.contains(h1) and triple.contains(h2)
        assert triple.apply_f(h1 * h2) == triple.apply_f(h1) * triple.apply_f(h2)
        assert triple.apply_f(h1.inverse()) == triple.apply_f(h1).inverse()

    check()


def test_cosets_are_right_cosets(triple):
    rng = random.Random(11)
    for _ in range(100):
        g = random_element(triple.group, rng)
        h = random_subgroup_element(triple, rng)
        i = coset_index(triple, g)
        assert coset_index(triple, h * g) == i
        x = triple.transversal[i - 1]
        assert triple.contains(g * x.inverse())
