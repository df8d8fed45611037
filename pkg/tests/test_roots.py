from fractions import Fraction as F

import pytest

from conftest import side
from latticehfi import d_from_module, hf_assemble, make_graph
from latticehfi.obstruct import compute_side
from latticehfi.roots import RootError, parity_of, stabilization_exponent

H = F(1, 2)


def test_s3():
    s = compute_side(make_graph([-1]))
    assert s.odd.towers == [(0, "")] and s.odd.reduced == []


def test_poincare_sphere():
    # boundary of the negative E8 plumbing; the lattice side computes its reverse
    s = compute_side(make_graph([-2] * 8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]))
    assert d_from_module(s.odd) == -2


def test_lens_space():
    s = compute_side(make_graph([-2]))
    assert d_from_module(s.odd) == F(-1, 4)


def test_s1xs2():
    s = compute_side(make_graph([0]))
    assert s.odd.towers == [(H, "1/2")]
    hf = hf_assemble(s.odd, H)
    assert sorted(hf.towers) == [(-H, "-1/2"), (H, "1/2")]


def test_k1_reversed_root():
    s = side("k1_surgery_reversed")
    assert {s.root.grading(v) for v in s.root.leaves} == {F(-3, 2)}
    a, b = s.root.leaves
    assert s.involution.perm[a] == b


def test_k1_surgery_root():
    s = side("k1_surgery")
    assert {s.root.grading(v) for v in s.root.leaves} == {H}
    assert s.odd.reduced == [(H, 1)]


def test_prime_root_merges():
    s = side("gamma_prime_Nj", 2)
    assert len(s.root.leaves) == 2
    assert s.root.merge_depth() == 2
    assert s.involution.is_identity()


def test_partial_and_parity():
    odd = side("gamma_Nj", 1).odd
    assert hf_assemble(odd, None).partial
    with pytest.raises(RootError, match="parity"):
        hf_assemble(odd, F(-1, 2))


def test_assembled_nj():
    hf = hf_assemble(side("gamma_Nj", 1).odd, F(-3, 2))
    assert sorted(hf.towers) == [(H, "1/2"), (F(3, 2), "-1/2")]
    assert hf.reduced == [(H, 1)]


def test_parity_and_exponent():
    assert parity_of(H, 1) == "1/2"
    assert parity_of(F(-3, 2), 1) == "1/2"
    assert parity_of(F(-5, 2), 1) == "-1/2"
    assert parity_of(F(3, 2), 1) == "-1/2"
    assert parity_of(F(2), 0) == ""
    assert stabilization_exponent(F(0)) >= 1


def test_module_u_commutes_with_extension():
    hf = hf_assemble(side("gamma_Nj", 2).odd, F(-7, 2))
    M = hf.module
    for i in range(len(M)):
        for j in [x for x in range(len(M)) if M.U[i] >> x & 1]:
            assert M.grading[j] == M.grading[i] - 2
