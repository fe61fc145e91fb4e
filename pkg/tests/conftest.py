import random

import pytest
from hypothesis import strategies as st

from selfsim.abelian import AbelianDescriptor, AbelianElement
from selfsim.catalog import catalog_triple, triple_names
from selfsim.similarity import random_element, random_subgroup_element
from selfsim.wreath import GroupDescriptor, XDescriptor

GROUPS = {
    "Z2 wr Z": GroupDescriptor(AbelianDescriptor.of(2), XDescriptor(1)),
    "Z wr Z": GroupDescriptor(AbelianDescriptor.of(0), XDescriptor(1)),
    "Z+Z3 wr Z2": GroupDescriptor(AbelianDescriptor.of(0, 3), XDescriptor(2)),
    "Z wr Z+Z3": GroupDescriptor(AbelianDescriptor.of(0), XDescriptor(1, (3,))),
    "omega(Z) wr C2": GroupDescriptor(AbelianDescriptor.omega(AbelianDescriptor.of(0)), XDescriptor(0, (2,))),
}


@st.composite
def elements(draw, group):
    """Wreath elements built directly from drawn coordinates."""
    base = group.base
    items = []
    for _ in range(draw(st.integers(0, 3))):
        x = tuple(draw(st.integers(-4, 4)) for _ in range(group.top.dim))
        if base.is_omega:
            keys = [(j, i) for j in range(3) for i in base.inner_keys()]
        else:
            keys = list(base.inner_keys())
        if not keys:
            continue
        coords = [(k, draw(st.integers(-5, 5))) for k in draw(st.lists(st.sampled_from(keys), max_size=2))]
        items.append((x, AbelianElement.make(base, coords)))
    top = tuple(draw(st.integers(-4, 4)) for _ in range(group.top.dim))
    return group.element(items, top)


def seeded_elements(group, **kw):
    return st.integers(0, 2**32).map(lambda s: random_element(group, random.Random(s), **kw))


def seeded_subgroup_elements(t):
    return st.integers(0, 2**32).map(lambda s: random_subgroup_element(t, random.Random(s)))


@pytest.fixture(params=triple_names(), scope="module")
def triple(request):
    return catalog_triple(request.param)
