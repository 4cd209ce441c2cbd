import json

import pydot
import pytest
from hypothesis import given, strategies as st

from moyal_nonlocal.poset import (
    FinitePoset, OpenCover, chain, discrete, dumps, hasse_dot, induced_cover, is_discrete,
    is_hausdorff, is_t0, isomorphic, minimal_nonlocal_cover, quotient_from_cover,
    segment_cover, singleton_cover, two_point_ideal_poset,
)


def brute_force_quotient(cover):
    """Classes by membership pattern; u <= v when every set holding u holds v."""
    pats = {}
    for x in cover.points:
        pats.setdefault(frozenset(n for n, s in cover.sets if x in s), []).append(x)
    keys = list(pats)
    rel = {(a, b): all(name in b for name in a) for a in keys for b in keys}
    return pats, rel


def test_segment_cover_quotient():
    cover = segment_cover()
    p, mapping = quotient_from_cover(cover)
    assert len(p) == 3
    a, b, c = mapping[0], mapping[4], mapping[8]
    assert {mapping[x] for x in range(3)} == {a} and {mapping[x] for x in range(3, 6)} == {b}
    assert p.le(a, b) and p.le(c, b)
    assert not p.le(a, c) and not p.le(c, a) and not p.le(b, a)
    assert sorted(p.cover_relations()) == sorted([(a, b), (c, b)])


def test_segment_matches_brute_force():
    cover = segment_cover()
    p, mapping = quotient_from_cover(cover)
    pats, rel = brute_force_quotient(cover)
    assert len(pats) == len(p)
    for (u, v), expected in rel.items():
        assert p.le(mapping[pats[u][0]], mapping[pats[v][0]]) == expected


def test_disjoint_singletons_are_discrete():
    p, _ = quotient_from_cover(singleton_cover(4))
    assert len(p) == 4 and is_discrete(p) and is_hausdorff(p) and is_t0(p)


def test_single_set_gives_one_class():
    p, mapping = quotient_from_cover(OpenCover.of("abc", {"M": "abc"}))
    assert len(p) == 1 and set(mapping.values()) == {"{M}"}


def test_two_point_ideal_poset():
    p = two_point_ideal_poset()
    assert len(p) == 2
    assert p.le("I1", "I2") and not p.le("I2", "I1")
    assert (is_t0(p), is_hausdorff(p)) == (True, False)


def test_minimal_nonlocal_cover_matches_ideal_poset():
    q, _ = quotient_from_cover(minimal_nonlocal_cover())
    assert isomorphic(q, two_point_ideal_poset())


def test_t0_hausdorff_examples():
    assert (is_t0(discrete("abc")), is_hausdorff(discrete("abc"))) == (True, True)
    assert (is_t0(chain("ab")), is_hausdorff(chain("ab"))) == (True, False)


def test_cover_validation():
    with pytest.raises(ValueError, match="no sets"):
        OpenCover.of("ab", {})
    with pytest.raises(ValueError, match="cover"):
        OpenCover.of("abc", {"O": "ab"})
    with pytest.raises(ValueError, match="unknown"):
        OpenCover.of("ab", {"O": "abz"})


def test_poset_validation():
    with pytest.raises(ValueError, match="reflexive"):
        FinitePoset(("a",), ((False,),))
    with pytest.raises(ValueError, match="antisymmetric"):
        FinitePoset(("a", "b"), ((True, True), (True, True)))
    with pytest.raises(ValueError, match="transitive"):
        FinitePoset(("a", "b", "c"), ((True, True, False), (False, True, True), (False, False, True)))


def test_hasse_examples():
    assert discrete("xyz").cover_relations() == []
    c = chain("abc")
    assert sorted(c.cover_relations()) == [("a", "b"), ("b", "c")]
    graph = pydot.graph_from_dot_data(hasse_dot(c))[0]
    edges = sorted((e.get_source().strip('"'), e.get_destination().strip('"')) for e in graph.get_edges())
    assert edges == [("a", "b"), ("b", "c")]


def test_hasse_dot_quotes_odd_names():
    p, _ = quotient_from_cover(segment_cover())
    graph = pydot.graph_from_dot_data(hasse_dot(p))[0]
    assert len(graph.get_edges()) == 2


def test_json_dump():
    assert json.loads(dumps(chain("ab"))) == {"elements": ["a", "b"], "cover_relations": [["a", "b"]]}


def test_isomorphism_rejects_dual_shapes():
    vee = FinitePoset.from_relation("abc", [("a", "c"), ("b", "c")])
    wedge = FinitePoset.from_relation("abc", [("c", "a"), ("c", "b")])
    assert not isomorphic(vee, wedge)
    assert isomorphic(vee, FinitePoset.from_relation("xyz", [("y", "x"), ("z", "x")]))


@st.composite
def covers(draw):
    n = draw(st.integers(1, 7))
    pts = list(range(n))
    k = draw(st.integers(1, 4))
    sets = {f"O{i}": draw(st.sets(st.sampled_from(pts))) for i in range(k)}
    sets["O_all"] = set(draw(st.sets(st.sampled_from(pts)))) | (set(pts) - set().union(*sets.values()))
    return OpenCover.of(pts, sets)


@given(covers())
def test_quotient_is_t0_and_idempotent(cover):
    p, mapping = quotient_from_cover(cover)
    assert is_t0(p)
    again, _ = quotient_from_cover(induced_cover(p))
    assert isomorphic(p, again)
    pats, rel = brute_force_quotient(cover)
    assert len(pats) == len(p)
    for (u, v), expected in rel.items():
        assert p.le(mapping[pats[u][0]], mapping[pats[v][0]]) == expected


@given(covers())
def test_hausdorff_iff_discrete(cover):
    p, _ = quotient_from_cover(cover)
    assert is_hausdorff(p) == is_discrete(p)


@given(st.integers(1, 5), st.data())
def test_isomorphic_under_relabeling(n, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    pairs = [(a, b) for a, b in pairs if a < b]
    names = [str(i) for i in range(n)]
    p = FinitePoset.from_relation(names, [(names[a], names[b]) for a, b in pairs])
    perm = data.draw(st.permutations(names))
    ren = dict(zip(names, [f"x{s}" for s in perm]))
    r = FinitePoset.from_relation([ren[e] for e in names], [(ren[names[a]], ren[names[b]]) for a, b in pairs])
    assert isomorphic(p, r)
