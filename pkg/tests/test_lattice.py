import itertools

import pytest

from conftest import side
from latticehfi import WeightFunction, builtin_family, graded_root, intersection_form, make_graph, quotient_lattice
from latticehfi.lattice import (LatticeError, birth_plateaus, check_boundary_squares_zero, cube_complex,
                                enumerate_points, enumerate_sublevel, weak_local_minima)
from latticehfi.obstruct import choose_class


def _W(g):
    B = intersection_form(g)
    return WeightFunction(quotient_lattice(B), choose_class(B).representative)


def test_quotient_lattice_rank():
    lat = quotient_lattice(intersection_form(builtin_family("gamma_Nj", 1)))
    assert lat.sigma == 4
    for e in lat.kernel:
        assert lat.project(e) == (0,) * 4


def test_chi_lift_agrees_with_reduced():
    W = _W(builtin_family("k1_surgery"))
    lat = W.lattice
    for x in itertools.product(range(-1, 2), repeat=6):
        assert W.chi_lift(x) == W.chi(lat.project(x))


def test_chi_constant_along_kernel():
    W = _W(builtin_family("gamma_Nj", 1))
    kap = W.lattice.kernel[0]
    x = [1, 0, -1, 2, 0]
    assert W.chi_lift(x) == W.chi_lift([a + 3 * b for a, b in zip(x, kap)])


def test_weight_function_rejects():
    lat = quotient_lattice(intersection_form(make_graph([0])))
    with pytest.raises(LatticeError, match="torsion"):
        WeightFunction(lat, [2])
    with pytest.raises(LatticeError, match="characteristic"):
        WeightFunction(lat, [1])


def test_enumeration_matches_brute_force():
    g = make_graph([-2, -3, -2], [(0, 1), (1, 2)])
    W = _W(g)
    for n in range(0, 3):
        pts = enumerate_points(W, n)
        brute = {y for y in itertools.product(range(-6, 7), repeat=3) if W.chi(y) <= n}
        assert set(pts) == brute


def test_sublevel_components_nj():
    W = _W(builtin_family("gamma_Nj", 1))
    assert enumerate_sublevel(W, -1).n_components == 2
    assert enumerate_sublevel(W, 0).n_components == 1


def test_weak_minima_are_local():
    W = _W(builtin_family("gamma_Nj", 1))
    mins = weak_local_minima(W)
    for y, c in mins.items():
        assert W.chi(y) == c
        assert all(v >= c for _, v in W.neighbors(y, c))
    assert len(birth_plateaus(W, mins)) >= 2


@pytest.mark.parametrize("name", ["gamma_Nj", "k1_surgery"])
def test_backends_agree(name):
    W = _W(builtin_family(name, 1))
    trees = {m: graded_root(W, m).canonical() for m in ("flood", "flood-minima", "enumerate")}
    assert len(set(trees.values())) == 1


def test_level_cap():
    W = _W(builtin_family("gamma_Nj", 2))
    with pytest.raises(LatticeError, match="cap"):
        graded_root(W, "flood", max_level=-100)


def test_unknown_method():
    with pytest.raises(LatticeError):
        graded_root(_W(make_graph([-1])), "nope")


def test_cube_boundary():
    W = _W(builtin_family("gamma_Nj", 1))
    for n in (-1, 0, 1):
        cells, bnd = cube_complex(W, n)
        assert check_boundary_squares_zero(bnd)


def test_root_validates():
    for name in ("gamma_Nj", "gamma_prime_Nj", "k1_surgery"):
        side(name).root.validate()
