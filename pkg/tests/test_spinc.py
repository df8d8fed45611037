import pytest

from latticehfi import builtin_family, intersection_form, make_graph
from latticehfi.obstruct import choose_class
from latticehfi.spinc import (is_characteristic, is_torsion, leaf_reps_star_search, same_orbit,
                              satisfies_star, square, star_leaf_levels,
                              torsion_selfconjugate_reps)


def test_nj_star_reps():
    g = builtin_family("gamma_Nj", 1)
    cls = choose_class(intersection_form(g))
    reps = [r for _, r in leaf_reps_star_search(g, cls)]
    assert reps == [(-1, 0, -1, 3, 1), (-1, 0, 1, 3, -3)]
    assert all(satisfies_star(r, g) for r in reps)
    assert star_leaf_levels(g, cls) == [-1, -1]


def test_reps_are_in_the_class():
    g = builtin_family("k1_surgery")
    B = intersection_form(g)
    cls = choose_class(B)
    for _, r in leaf_reps_star_search(g, cls):
        assert same_orbit(cls.representative, r, B)
        assert is_characteristic(r, B) and is_torsion(r, B)


def test_self_conjugate_witness():
    for name in ("gamma_Nj", "gamma_prime_Nj", "k1_surgery", "k1_surgery_reversed"):
        B = intersection_form(builtin_family(name, 1))
        (c,) = torsion_selfconjugate_reps(B)
        rows = B.rows()
        assert [sum(a * b for a, b in zip(r, c.l0)) for r in rows] == list(c.representative)


def test_lens_space_classes():
    B = intersection_form(make_graph([-2]))
    reps = torsion_selfconjugate_reps(B)
    assert len(reps) == 2
    assert sorted(square(c.representative, B) for c in reps) == [-2, 0]


def test_choose_class_rejects():
    B = intersection_form(make_graph([-2]))
    with pytest.raises(ValueError, match="characteristic"):
        choose_class(B, [1])
    B = intersection_form(make_graph([0]))
    with pytest.raises(ValueError, match="torsion"):
        choose_class(B, [2])
