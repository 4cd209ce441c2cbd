import json

import numpy as np
import pydot
import pytest
from hypothesis import given, settings, strategies as st

from moyal_nonlocal.bratteli import (
    BratteliDiagram, LeveledElement, check_homomorphism, dumps, embed, embed_to, identity_element,
    penrose_diagram, poset_algebra_diagram, pv_diagram, random_element, to_dot,
)
from moyal_nonlocal.contfrac import golden, sqrt2m1
from moyal_nonlocal.linalg import direct_sum, operator_norm

FAMILIES = {
    "penrose": lambda n: penrose_diagram(n),
    "poset": lambda n: poset_algebra_diagram(n),
    "pv-sqrt2": lambda n: pv_diagram(sqrt2m1(n), n),
}


def fib(n):
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def test_penrose_dims():
    d = penrose_diagram(5)
    assert d.levels == ((1, 1), (2, 1), (3, 2), (5, 3), (8, 5))
    assert all(v == 0 for row in d.dimension_defects() for v in row)
    d20 = penrose_diagram(20)
    assert [d20.dims(n)[0] for n in range(1, 21)] == [fib(n + 1) for n in range(1, 21)]


def test_pv_diagrams():
    assert pv_diagram(golden(4), 4).levels == ((1, 1), (2, 1), (3, 2), (5, 3))
    assert pv_diagram(golden(12), 12) == penrose_diagram(12)
    s = pv_diagram(sqrt2m1(3), 3)
    assert s.levels == ((2, 1), (5, 2), (12, 5))
    assert s.multiplicity(1) == ((2, 1), (1, 0))
    with pytest.raises(ValueError):
        pv_diagram(golden(3), 4)


def test_poset_algebra_dims():
    d = poset_algebra_diagram(4)
    assert d.levels == ((1, 1), (2, 1), (3, 1), (4, 1))
    assert {dims[1] for dims in d.levels} == {1}


def test_validation():
    with pytest.raises(ValueError, match="dimension identity"):
        BratteliDiagram(((1, 1), (3, 1)), (((1, 1), (1, 0)),), (("a", "b"), ("c", "d")))
    with pytest.raises(ValueError, match="zero row"):
        BratteliDiagram(((1, 1), (2, 1)), (((1, 1), (0, 0)),), (("a", "b"), ("c", "d")))
    with pytest.raises(ValueError, match="nonnegative"):
        BratteliDiagram(((1, 1), (1, 1)), (((2, -1), (1, 0)),), (("a", "b"), ("c", "d")))
    with pytest.raises(ValueError):
        penrose_diagram(0)


def test_level_lookup_errors():
    d = penrose_diagram(3)
    with pytest.raises(IndexError):
        d.dims(4)
    with pytest.raises(IndexError):
        d.multiplicity(3)


def test_penrose_embedding_layout(rng):
    d = penrose_diagram(4)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((1, 1)) + 0j
    up = embed(d, LeveledElement(2, (a, b)))
    assert up.level == 3
    assert np.array_equal(up.blocks[0], direct_sum(a, b))
    assert np.array_equal(up.blocks[1], a)


def test_poset_embedding_layout(rng):
    d = poset_algebra_diagram(5)
    lam = rng.standard_normal((3, 3)) + 0j
    up = embed(d, LeveledElement(3, (lam, np.array([[2.5]]))))
    assert np.array_equal(up.blocks[0], direct_sum(lam, [[2.5]]))
    assert np.array_equal(up.blocks[1], [[2.5]])


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_embedding_is_unital(name):
    d = FAMILIES[name](5)
    for level in range(1, 5):
        up = embed(d, identity_element(d, level))
        assert up.distance(identity_element(d, level + 1)) == 0.0


def test_embed_dimension_mismatch():
    d = penrose_diagram(3)
    with pytest.raises(ValueError):
        embed(d, LeveledElement(1, (np.eye(2), np.eye(1))))
    with pytest.raises(ValueError):
        embed_to(d, identity_element(d, 2), 1)


def test_homomorphism_examples(rng):
    assert check_homomorphism(penrose_diagram(5), 3, 20, rng) <= 1e-13
    assert check_homomorphism(poset_algebra_diagram(7), 5, 20, rng) <= 1e-13
    with pytest.raises(ValueError):
        check_homomorphism(penrose_diagram(3), 3, 1, rng)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_embedding_is_isometric(name, level, seed):
    d = FAMILIES[name](6)
    x = random_element(d, level, np.random.default_rng(seed))
    assert abs(embed(d, x).norm() - x.norm()) <= 1e-12 * max(1.0, x.norm())


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.integers(0, 2 ** 32 - 1))
def test_functoriality(name, seed):
    d = FAMILIES[name](6)
    x = random_element(d, 2, np.random.default_rng(seed))
    step = embed(d, embed(d, embed(d, x)))
    assert embed_to(d, x, 5).distance(step) <= 1e-12


def test_dot_single_level():
    graph = pydot.graph_from_dot_data(to_dot(penrose_diagram(1)))[0]
    names = {n.get_name().strip('"') for n in graph.get_nodes()} | {
        n.get_name().strip('"') for s in graph.get_subgraphs() for n in s.get_nodes()}
    assert names >= {"v1.0", "v1.1"}
    assert graph.get_edges() == []


def test_dot_penrose_counts():
    text = to_dot(penrose_diagram(3))
    graph = pydot.graph_from_dot_data(text)[0]
    edges = [(e.get_source().strip('"'), e.get_destination().strip('"')) for e in graph.get_edges()]
    assert len(edges) == 6
    assert sorted(edges[:3]) == [("v1.0", "v2.0"), ("v1.0", "v2.1"), ("v1.1", "v2.0")]
    assert text.count("rank=same") == 3
    assert '"v3.0" [label="v3.0:3"]' in text


def test_dot_counts_multiplicities():
    edges = pydot.graph_from_dot_data(to_dot(pv_diagram(sqrt2m1(3), 3)))[0].get_edges()
    assert len(edges) == 2 * 4


def test_json_dump():
    data = json.loads(dumps(penrose_diagram(3)))
    assert data == {
        "levels": [[1, 1], [2, 1], [3, 2]],
        "multiplicities": [[[1, 1], [1, 0]], [[1, 1], [1, 0]]],
        "labels": [["v1.0", "v1.1"], ["v2.0", "v2.1"], ["v3.0", "v3.1"]],
    }
