from fractions import Fraction as F

import pytest

from conftest import k1, nj, side
from latticehfi import gf2, hf_assemble, hfi_hat_dims, involutive_d, iota_model, make_graph, mapping_cone
from latticehfi.involutive import PROVENANCE, InvolutiveError, IotaModel, hfi_hat_from_cone
from latticehfi.obstruct import compute_side

H = F(1, 2)


def test_s3():
    s = compute_side(make_graph([-1]))
    im = iota_model(s.odd, s.involution)
    inv = involutive_d(mapping_cone(im), 0, s.odd)
    assert (inv.dbar, inv.dlow, inv.d) == (0, 0, 0)
    assert hfi_hat_dims(im) == (1, 2)


def test_exact_triangle_dims():
    hf = nj(1).hf
    im = iota_model(hf, side("gamma_Nj", 1).involution)
    hfi = mapping_cone(im)
    M = hf.module
    for r in [g for g in M.gradings() if g <= M.ceiling - 2]:
        idx = M.at(r)
        one_plus = [im.matrix[i] ^ (1 << i) for i in idx]
        rank = gf2.rank(one_plus)
        below = M.at(r - 1)
        ker_below = len(below) - gf2.rank(im.matrix[i] ^ (1 << i) for i in below)
        assert len(hfi.module.at(r)) == ker_below + len(idx) - rank


def test_identity_involution_gives_equal_invariants():
    s = compute_side(make_graph([0]))
    hf = hf_assemble(s.odd, H)
    inv = involutive_d(mapping_cone(iota_model(hf, s.involution)), 1, hf)
    assert inv.quadruple() == (H, -H, H, -H)


def test_k1_hat_dims():
    # identity involution: 1+iota vanishes, so the hat rank doubles
    assert k1().inv_minus.hf_hat_dim == 4
    assert k1().inv_minus.hfi_hat_dim == 8
    assert k1().data["certificate"]["agrees"]


def test_nj_hfi_table():
    dims = nj(1).hfi.graded_dims(F(9, 2))
    assert dims[H] == 1
    assert all(dims[r] == 2 for r in (F(3, 2), F(5, 2), F(7, 2), F(9, 2)))


def test_higher_j_values():
    assert nj(3).inv_minus.quadruple() == (F(13, 2), F(11, 2), H, F(11, 2))


def test_iota_checks():
    hf = side("gamma_Nj", 1).odd
    n = len(hf.module)
    bad = [1 << i for i in range(n)]
    a, b = hf.vertex_index[0], hf.vertex_index[1]
    bad[a] = 1 << b
    with pytest.raises(InvolutiveError):
        IotaModel(hf, bad).check()


def test_partial_rejected():
    hf = hf_assemble(side("gamma_Nj", 1).odd, None)
    hfi = mapping_cone(iota_model(hf, side("gamma_Nj", 1).involution))
    with pytest.raises(InvolutiveError, match="partial"):
        involutive_d(hfi, 1, hf)


def test_provenance_and_certificate():
    hfi = nj(1).hfi
    assert PROVENANCE in hfi.notes
    assert hfi_hat_from_cone(hfi) == 6
