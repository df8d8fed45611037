import json

import pytest

from latticehfi import builtin_family, classify, intersection_form, make_graph, parse_plumbing
from latticehfi.plumbing import PlumbingError, kernel_basis


def _cls(w, e=()):
    g = make_graph(w, e)
    return classify(intersection_form(g), g)


def test_parse_roundtrip():
    g = builtin_family("gamma_Nj", 2)
    assert parse_plumbing(g.to_json()) == g


@pytest.mark.parametrize("doc,msg", [
    ({"vertices": [{"id": "a", "weight": -1}, {"id": "a", "weight": -2}], "edges": []}, "duplicate"),
    ({"vertices": [{"id": "a", "weight": -1}], "edges": [["a", "b"]]}, "b"),
    ({"vertices": [{"id": "a", "weight": -1}], "edges": [["a", "a"]]}, "loop"),
    ({"vertices": [{"id": x, "weight": -2} for x in "abc"],
      "edges": [["a", "b"], ["b", "c"], ["c", "a"]]}, "cycle"),
])
def test_parse_rejects(doc, msg):
    with pytest.raises(PlumbingError, match=msg):
        parse_plumbing(json.dumps(doc))


def test_intersection_form():
    B = intersection_form(make_graph([-1, -2, -3], [(0, 1), (1, 2)]))
    assert B.rows() == [[-1, 1, 0], [1, -2, 1], [0, 1, -3]]


def test_classify_examples():
    c = _cls([-1])
    assert (c.definiteness, c.b1, c.supported) == ("negative_definite", 0, True)
    c = _cls([0])
    assert (c.definiteness, c.b1, c.h1_text(), c.supported) == ("negative_semidefinite_degenerate", 1, "Z", True)
    assert _cls([-5]).h1_text() == "Z/5"
    c = _cls([-1, -1, -2], [(0, 1), (1, 2)])
    assert not c.supported and "semidefinite" in c.reason
    c = _cls([0, 0])
    assert not c.supported and "b1 = 2" in c.reason


def test_two_bad_vertices_rejected():
    # two -1 nodes of degree 3 joined by an edge
    w = [-1, -1] + [-7] * 4
    e = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]
    c = _cls(w, e)
    assert len(c.bad_vertices) == 2 and not c.supported


def test_e8_one_bad_vertex():
    c = _cls([-2] * 8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)])
    assert c.supported and c.bad_vertices == ("v3",) and c.h1_text() == "0"


def test_family_kernels():
    assert kernel_basis(intersection_form(builtin_family("gamma_Nj", 1))) == [[14, 7, 2, 5, 1]]
    assert kernel_basis(intersection_form(builtin_family("gamma_prime_Nj", 1))) == \
        [[2, 4, 6, 8, 10, 12, 14, 9, 4, 3, 2, 1, 7]]


@pytest.mark.parametrize("j", [1, 2, 3])
def test_families_have_h1_z(j):
    for name in ("gamma_Nj", "gamma_prime_Nj"):
        g = builtin_family(name, j)
        c = classify(intersection_form(g), g)
        assert c.supported and c.b1 == 1 and c.h1_text() == "Z"


def test_family_shapes():
    g = builtin_family("gamma_prime_Nj", 2)
    assert g.s == 8 * 2 + 5
    assert g.weights[8 * 2] == -5
    assert builtin_family("gamma_Nj", 1).weights == [-1, -2, -7, -3, -5]
    with pytest.raises(ValueError):
        builtin_family("gamma_Nj", 0)
