import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from selfsim.abelian import (AbelianDescriptor, AbelianElement, AbelianHom, add, apply_hom, format_abelian,
                             hermite, hnf_reduce, member, transversal, xgcd)

Z = AbelianDescriptor.of(0)
Z2 = AbelianDescriptor.of(0, 0)


def vec(desc, *v):
    return AbelianElement.from_vector(desc, v)


# -- brute-force oracle ----------------------------------------------------------------

def closure_size(gens, moduli):
    """Size of the subgroup generated by ``gens`` in the finite group prod Z/moduli."""
    zero = tuple(0 for _ in moduli)
    seen, frontier = {zero}, [zero]
    gens = [tuple(g % n for g, n in zip(row, moduli)) for row in gens]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % n for a, b, n in zip(v, g, moduli))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen)


def brute_index(rows, d):
    """Index of the row lattice in Z^d, d <= 2, by counting residues modulo a full-rank multiple."""
    if d == 1:
        nonzero = [abs(r[0]) for r in rows if r[0]]
        if not nonzero:
            return math.inf
        D = nonzero[0]
        return D // closure_size(rows, (D,))
    dets = [abs(a[0] * b[1] - a[1] * b[0]) for a, b in itertools.combinations(rows, 2)]
    dets = [x for x in dets if x]
    if not dets:
        return math.inf
    D = dets[0]
    return D * D // closure_size(rows, (D, D))


# -- element arithmetic ---------------------------------------------------------------------

def test_add_identity_and_torsion():
    a = vec(AbelianDescriptor.of(0, 5), 3, 4)
    assert a + AbelianElement.zero(a.desc) == a
    k = AbelianDescriptor.of(2, 2)
    assert add(vec(k, 1, 1), vec(k, 1, 0)) == vec(k, 0, 1)


def test_unbounded_integers():
    assert (vec(Z, 2**64) + vec(Z, 2**64)).vector() == (2**65,)


def test_omega_elements_and_format():
    W = AbelianDescriptor.omega(AbelianDescriptor.of(0, 2))
    a = AbelianElement.make(W, [((0, 0), 2), ((3, 1), 1)])
    b = AbelianElement.make(W, [((3, 1), 1)])
    assert (a + b).coords == (((0, 0), 2),)
    assert format_abelian(a) == "{0:[2, 0], 3:[0, 1]}"
    assert str(W) == "omega(Z + Z/2)"
    assert W.exponent_divides(2) is False


def test_descriptor_strings():
    assert str(AbelianDescriptor()) == "1"
    assert str(AbelianDescriptor.of(0, 3)) == "Z + Z/3"
    assert AbelianDescriptor.of(2, 4).exponent_divides(4)
    assert not AbelianDescriptor.of(2, 4).exponent_divides(2)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert g == math.gcd(a, b)
    assert a * x + b * y == g


# -- lattices ---------------------------------------------------------------------------------

def test_index_examples():
    assert hnf_reduce([[2]], Z).index == 2
    assert hnf_reduce([[2, 0], [0, 3]], Z2).index == 6
    assert hnf_reduce([], Z).index == math.inf


def test_member_examples():
    two = hnf_reduce([[2]], Z)
    assert member(two, vec(Z, 4))
    assert not member(two, vec(Z, 3))
    assert not member(hnf_reduce([[2, 0], [0, 3]], Z2), vec(Z2, 1, 1))


def test_transversal_examples():
    assert [a.vector() for a in transversal(hnf_reduce([[2]], Z))] == [(0,), (1,)]
    reps = [a.vector() for a in transversal(hnf_reduce([[2, 0], [0, 3]], Z2))]
    assert reps == [(i, j) for i in range(2) for j in range(3)]
    assert [a.vector() for a in transversal(hnf_reduce([[1]], Z))] == [(0,)]


def test_infinite_index_has_no_transversal():
    with pytest.raises(ValueError):
        transversal(hnf_reduce([[1, 1]], Z2))


def test_hnf_index_matches_brute_force_rank_one():
    for n in range(1, 3):
        for rows in itertools.product(range(-4, 5), repeat=n):
            lat = hnf_reduce([[r] for r in rows], Z)
            assert lat.index == brute_index([[r] for r in rows], 1), rows


def test_hnf_index_matches_brute_force_rank_two():
    entries = range(-4, 5)
    for a in itertools.product(entries, repeat=2):
        assert hnf_reduce([a], Z2).index == math.inf
        for b in itertools.product(entries, repeat=2):
            lat = hnf_reduce([a, b], Z2)
            assert lat.index == brute_index([a, b], 2), (a, b)


@pytest.mark.parametrize("moduli,rows", [
    ((4, 6), [[2, 3]]),
    ((4, 6), [[1, 0], [0, 2]]),
    ((2, 2, 3), [[1, 1, 1]]),
    ((6,), [[4]]),
    ((12, 18), [[4, 6], [6, 9]]),
])
def test_finite_ambient_index(moduli, rows):
    desc = AbelianDescriptor.of(*moduli)
    lat = hnf_reduce(rows, desc)
    assert lat.index == math.prod(moduli) // closure_size(rows, moduli)
    reps = [lat.coset_rep(v) for v in itertools.product(*(range(n) for n in moduli))]
    assert len(set(reps)) == lat.index


def test_mixed_ambient_infinite():
    desc = AbelianDescriptor.of(6, 0)
    assert hnf_reduce([[2, 0]], desc).index == math.inf
    assert hnf_reduce([[2, 0], [0, 5]], desc).index == 10


rows2 = st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=3)


@given(rows2, st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
def test_coset_rep_is_canonical(rows, v):
    lat = hnf_reduce(rows, Z2)
    r = lat.coset_rep(v)
    assert lat.member([a - b for a, b in zip(v, r)])
    assert lat.coset_rep(r) == r
    # shifting by a basis row keeps the representative
    for row in rows:
        assert lat.coset_rep([a + b for a, b in zip(v, row)]) == r


@given(rows2, st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_express_recovers_members(rows, coeffs):
    lat = hnf_reduce(rows, Z2)
    v = [sum(c * row[j] for c, row in zip(coeffs, rows)) for j in range(2)]
    assert lat.member(v)
    got = lat.express(v)
    assert [sum(c * row[j] for c, row in zip(got, rows)) for j in range(2)] == v


@given(rows2)
def test_residues_are_distinct_cosets(rows):
    lat = hnf_reduce(rows, Z2)
    if not lat.finite:
        return
    reps = list(lat.residues())
    assert len(reps) == lat.index
    assert len({lat.coset_rep(r) for r in reps}) == lat.index


def test_hermite_transform_and_kernel():
    rows = [[2, 4], [1, 2], [3, 1]]
    hnf, transform, pivots, kernel = hermite(rows, 2)
    for h, u in zip(hnf, transform):
        assert [sum(c * r[j] for c, r in zip(u, rows)) for j in range(2)] == list(h)
    for k in kernel:
        assert [sum(c * r[j] for c, r in zip(k, rows)) for j in range(2)] == [0, 0]
    assert len(kernel) == 1


# -- homomorphisms -----------------------------------------------------------------------------

def test_halving_map():
    phi = AbelianHom(hnf_reduce([[2]], Z), Z, (vec(Z, 1),))
    assert apply_hom(phi, vec(Z, 6)) == vec(Z, 3)
    assert apply_hom(phi, vec(Z, 0)) == vec(Z, 0)
    with pytest.raises(ValueError):
        apply_hom(phi, vec(Z, 3))


def test_ill_defined_hom_rejected():
    Z4 = AbelianDescriptor.of(4)
    # generator of order 4 cannot go to an element of infinite order
    with pytest.raises(ValueError):
        AbelianHom(hnf_reduce([[1]], Z4), Z, (vec(Z, 1),))
    AbelianHom(hnf_reduce([[1]], Z4), AbelianDescriptor.of(2), (vec(AbelianDescriptor.of(2), 1),))


@settings(max_examples=50)
@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_hom_is_additive(a, b, c, d):
    dom = hnf_reduce([[2, 0], [1, 3]], Z2)
    h = AbelianHom(dom, Z2, (vec(Z2, 1, 0), vec(Z2, 5, -1)))
    u = [2 * a + b, 3 * b]
    w = [2 * c + d, 3 * d]
    s = [x + y for x, y in zip(u, w)]
    assert h.apply_vector(s) == h.apply_vector(u) + h.apply_vector(w)
