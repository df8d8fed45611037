"""Involutive Heegaard Floer data from an HF⁺ module with an exact
involution: the cone of Q(1+ι), involutive d-invariants and hat ranks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import gf2
from .roots import (GradedModule, HFModule, RootInvolution,
                    parity_of, stabilization_exponent)

PROVENANCE = ("strict model: HF+ taken with zero differential and an exactly "
              "involutive iota; HFI is the cone of Q(1+iota) at module level")


class InvolutiveError(ValueError):
    pass


@dataclass
class IotaModel:
    base: HFModule
    matrix: list[int]  # bitmask image of each basis element

    def check(self) -> None:
        M = self.base.module
        for i in range(len(M)):
            img = self.matrix[i]
            if gf2.apply(self.matrix, img) != 1 << i:
                raise InvolutiveError("iota does not square to the identity")
            for j in gf2.bits(img):
                if M.grading[j] != M.grading[i]:
                    raise InvolutiveError("iota does not preserve grading")
        if not M.commutes_check(self.matrix):
            raise InvolutiveError("iota does not commute with U")


def iota_model(hf: HFModule, j: RootInvolution | None) -> IotaModel:
    """The root involution on vertex generators, identity everywhere else
    (extended stem and even tower)."""
    n = len(hf.module)
    mat = [1 << i for i in range(n)]
    if j is not None:
        if len(j.perm) != len(hf.vertex_index):
            raise InvolutiveError("involution and module come from different roots")
        for v, w in enumerate(j.perm):
            mat[hf.vertex_index[v]] = 1 << hf.vertex_index[w]
    im = IotaModel(hf, mat)
    im.check()
    return im


@dataclass
class HFIModule:
    """HFI_r = ker(1+ι)_{r-1} ⊕ Q·coker(1+ι)_r as an explicit module.

    Basis elements tagged ``ker`` sit one grading above their HF
    representative; ``q`` elements sit at the HF grading.  ``Q`` maps a
    ``ker`` element to its class in the ``q`` part and kills ``q``.
    """
    module: GradedModule
    Q: list[int]
    b1: int
    span_top: Fraction
    span_bottom: Fraction
    partial: bool = False
    notes: list[str] = field(default_factory=lambda: [PROVENANCE])

    def graded_dims(self, upto: Fraction | None = None) -> dict[Fraction, int]:
        lim = self.module.ceiling if upto is None else upto
        out: dict[Fraction, int] = {}
        for g in self.module.grading:
            if g <= lim:
                out[g] = out.get(g, 0) + 1
        return dict(sorted(out.items()))

    def n_star(self) -> int:
        return stabilization_exponent(self.span_top - self.span_bottom)


def _pivot_coords(v: int, basis: dict[int, int], index: dict[int, int]) -> int:
    """Coordinates of v in a reduced echelon basis (pivot → row), as a
    bitmask over the target indices ``index[pivot]``."""
    out = 0
    check = 0
    for p, row in basis.items():
        if v >> p & 1:
            out |= 1 << index[p]
            check ^= row
    if check != v:
        raise InvolutiveError("vector is not in the span")
    return out


def mapping_cone(im: IotaModel) -> HFIModule:
    hf = im.base
    M = hf.module
    c = M.ceiling
    one_plus = [im.matrix[i] ^ (1 << i) for i in range(len(M))]
    out = GradedModule([], [], [], c)
    kers: dict[Fraction, tuple[dict, dict]] = {}
    cok: dict[Fraction, tuple[dict, dict]] = {}
    for r in M.gradings():
        idx = M.at(r)
        imgs = [one_plus[i] for i in idx]
        # kernel vectors come back over the local index list; lift to global bits
        local = gf2.kernel(imgs)
        vecs = []
        for tag in local:
            v = 0
            for b in gf2.bits(tag):
                v |= 1 << idx[b]
            vecs.append(v)
        kr = gf2.rref(vecs)
        kers[r] = (kr, {p: out.add(r + 1, 0, "ker") for p in sorted(kr)})
        ir = gf2.rref(imgs)
        cok[r] = (ir, {i: out.add(r, 0, "q") for i in idx if i not in ir})
    Q = [0] * len(out)
    for r, (kr, kpos) in kers.items():
        for p, row in kr.items():
            u = M.apply_U(row)
            if u:
                kb, kp = kers[r - 2]
                out.U[kpos[p]] = _pivot_coords(u, kb, kp)
            ir, qpos = cok[r]
            red = gf2.reduce_full(row, ir)
            Q[kpos[p]] = sum(1 << qpos[i] for i in gf2.bits(red))
    for r, (ir, qpos) in cok.items():
        for i, pos in qpos.items():
            u = M.U[i]
            if u:
                ir2, qpos2 = cok[r - 2]
                red = gf2.reduce_full(u, ir2)
                out.U[pos] = sum(1 << qpos2[j] for j in gf2.bits(red))
    hfi = HFIModule(out, Q, hf.b1, hf.span_top + 1, hf.span_bottom, hf.partial,
                    [PROVENANCE] + list(hf.notes))
    _check_cone(hfi)
    return hfi


def _check_cone(hfi: HFIModule) -> None:
    M, Q = hfi.module, hfi.Q
    for i in range(len(M)):
        if gf2.apply(Q, Q[i]):
            raise InvolutiveError("Q² ≠ 0")
        if gf2.apply(Q, M.U[i]) != gf2.apply(M.U, Q[i]):
            raise InvolutiveError("U and Q do not commute")
        for j in gf2.bits(Q[i]):
            if M.grading[j] != M.grading[i] - 1:
                raise InvolutiveError("Q does not lower grading by one")


@dataclass(frozen=True)
class InvolutiveDInvariants:
    b1: int
    dbar_half: Fraction | None = None
    dbar_mhalf: Fraction | None = None
    dlow_half: Fraction | None = None
    dlow_mhalf: Fraction | None = None
    d_half: Fraction | None = None
    d_mhalf: Fraction | None = None
    dbar: Fraction | None = None
    dlow: Fraction | None = None
    d: Fraction | None = None
    hf_hat_dim: int | None = None
    hfi_hat_dim: int | None = None

    def quadruple(self):
        return (self.dbar_half, self.dbar_mhalf, self.dlow_half, self.dlow_mhalf)


def _ab_dims(hfi: HFIModule, n: int, r):
    """dim Im(Uⁿ)_r and dim Im(UⁿQ)_r."""
    M = hfi.module
    A = M.image_Un(n, r)
    src = M.at(r + 2 * n + 1)
    Bv = gf2.Echelon(M.apply_U(gf2.apply(hfi.Q, 1 << i), n) for i in src)
    return len(A), len(Bv)


def involutive_d(hfi: HFIModule, b1: int, hf: HFModule | None = None) -> InvolutiveDInvariants:
    """Evaluate the involutive d-invariant definitions on the cone."""
    if hfi.partial:
        raise InvolutiveError("partial input: the even tower is missing")
    M = hfi.module
    n = hfi.n_star()
    limit = M.ceiling - 2 * (n + 1) - 1
    grads = [r for r in M.gradings() if r <= limit]
    low: dict[str, Fraction] = {}
    bar: dict[str, Fraction] = {}
    for r in grads:
        res = [_ab_dims(hfi, N, r) for N in (n, n + 1)]
        a0, b0 = res[0]
        if (a0 > b0) != (res[1][0] > res[1][1]) or (b0 > 0) != (res[1][1] > 0):
            raise InvolutiveError("U-power images did not stabilize")
        p = parity_of(r, b1)
        if a0 > b0:
            # d̲_{1/2} reads gradings ≡ -1/2, d̲_{-1/2} reads ≡ 1/2
            key = {"": "", "-1/2": "1/2", "1/2": "-1/2"}.get(p)
            if key is not None and key not in low:
                low[key] = r - 1
        if b0 > 0 and p not in bar:
            bar[p] = r
    kw = {}
    if b1 == 0:
        kw = dict(dbar=bar.get(""), dlow=low.get(""))
        if hf is not None:
            from .roots import d_from_module

            kw["d"] = d_from_module(hf)
    else:
        kw = dict(dbar_half=bar.get("1/2"), dbar_mhalf=bar.get("-1/2"),
                  dlow_half=low.get("1/2"), dlow_mhalf=low.get("-1/2"))
        if hf is not None:
            from .roots import d_from_module

            kw["d_half"] = d_from_module(hf, "1/2")
            kw["d_mhalf"] = d_from_module(hf, "-1/2")
    if any(v is None for v in kw.values()):
        raise InvolutiveError("an invariant was not found below the truncation ceiling")
    return InvolutiveDInvariants(b1, **kw)


def _ker_coker_U(M: GradedModule) -> tuple[list[int], dict, int]:
    """ker U (as vectors) and coker U (pivots of Im U per grading) on the
    gradings where the truncation is exact."""
    lim = M.ceiling - 2
    ker = []
    cok_dim = 0
    ims = {}
    for r in M.gradings():
        idx = M.at(r)
        for tag in gf2.kernel([M.U[i] for i in idx]):
            ker.append(sum(1 << idx[b] for b in gf2.bits(tag)))
        if r <= lim:
            ims[r] = gf2.rref(M.apply_U(1 << i) for i in M.at(r + 2))
            cok_dim += len(idx) - len(ims[r])
    return ker, ims, cok_dim


def hfi_hat_dims(im: IotaModel) -> tuple[int, int]:
    """(dim ĤF, dim ĤFI) with ĤF = ker U ⊕ coker U and ĤFI the kernel plus
    cokernel of Q(1+ι̂) on it."""
    M = im.base.module
    ker, ims, cok_dim = _ker_coker_U(M)
    hf_hat = len(ker) + cok_dim
    # rank of 1+ι on ker U
    r_ker = gf2.rank(gf2.apply(im.matrix, v) ^ v for v in ker)
    # rank of the induced 1+ι on coker U, grading by grading
    r_cok = 0
    for r, ir in ims.items():
        idx = [i for i in M.at(r) if i not in ir]
        vals = [gf2.reduce_full(im.matrix[i] ^ (1 << i), ir) for i in idx]
        r_cok += gf2.rank(vals)
    rank = r_ker + r_cok
    return hf_hat, 2 * (hf_hat - rank)


def hfi_hat_from_cone(hfi: HFIModule) -> int:
    """dim ker U + dim coker U on the cone itself (certificate side)."""
    ker, _, cok_dim = _ker_coker_U(hfi.module)
    return len(ker) + cok_dim
