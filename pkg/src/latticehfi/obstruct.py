"""Orientation bookkeeping, obstruction verdicts and the end-to-end pipeline."""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import floor
from pathlib import Path
from typing import Any, Sequence

from . import linalg
from .involutive import (InvolutiveDInvariants, hfi_hat_dims,
                         hfi_hat_from_cone, involutive_d, iota_model, mapping_cone)
from .lattice import WeightFunction, graded_root, quotient_lattice
from .plumbing import (PlumbingGraph, classify, intersection_form, parse_plumbing)
from .roots import (HFModule, analyze, assign_gradings, d_from_module, hf_assemble,
                    involution_on_root, u_module_from_root)
from .spinc import (SpincClass, is_characteristic, is_torsion,
                    torsion_selfconjugate_reps)

HALF = Fraction(1, 2)


class UnsupportedPlumbing(ValueError):
    """Input violates a hypothesis (definiteness, b1, H1 or bad vertices)."""


class PartialResult(ValueError):
    """Full invariants were requested but the even tower is unknown."""


def rat(x) -> str | None:
    return None if x is None else str(Fraction(x))


# -- orientation --------------------------------------------------------------

def convert_orientation(inv: InvolutiveDInvariants) -> InvolutiveDInvariants:
    """Invariants of Y from those of -Y: d̲_{±1/2}(Y) = -d̄_{∓1/2}(-Y),
    d̄_{±1/2}(Y) = -d̲_{∓1/2}(-Y), d_{±1/2}(Y) = -d_{∓1/2}(-Y)."""
    def neg(x):
        return None if x is None else -x

    if inv.b1 == 0:
        if inv.dbar is None or inv.dlow is None:
            raise PartialResult("invariants are partial")
        return replace(inv, dbar=neg(inv.dlow), dlow=neg(inv.dbar), d=neg(inv.d))
    if None in inv.quadruple():
        raise PartialResult("invariants are partial")
    return replace(
        inv,
        dlow_half=neg(inv.dbar_mhalf), dlow_mhalf=neg(inv.dbar_half),
        dbar_half=neg(inv.dlow_mhalf), dbar_mhalf=neg(inv.dlow_half),
        d_half=neg(inv.d_mhalf), d_mhalf=neg(inv.d_half),
    )


# -- verdicts -----------------------------------------------------------------

@dataclass
class Check:
    inequality: str
    lhs: Fraction | None
    rhs: Fraction | None
    holds: bool | None

    def to_dict(self):
        return {"inequality": self.inequality, "lhs": rat(self.lhs), "rhs": rat(self.rhs),
                "status": {True: "satisfied", False: "violated", None: "unevaluable"}[self.holds]}


@dataclass
class Verdict:
    name: str
    status: str
    checks: list[Check]
    extra: dict = field(default_factory=dict)

    @property
    def obstructed(self) -> bool:
        return self.status == "obstructed"

    def to_dict(self):
        out = {"name": self.name, "status": self.status, "checks": [c.to_dict() for c in self.checks]}
        out.update({k: (rat(v) if isinstance(v, Fraction) else v) for k, v in self.extra.items()})
        return out


def _le(text, a, b) -> Check:
    if a is None or b is None:
        return Check(text, a, b, None)
    return Check(text, Fraction(a), Fraction(b), a <= b)


def corollary_c_check(inv: InvolutiveDInvariants) -> Verdict:
    """0-surgery test: -1/2 ≤ d̲_{-1/2}(Y) and d̄_{1/2}(Y) ≤ 1/2."""
    checks = [
        _le("-1/2 <= dlow_{-1/2}(Y)", -HALF, inv.dlow_mhalf),
        _le("dbar_{1/2}(Y) <= 1/2", inv.dbar_half, HALF),
    ]
    return Verdict("zero-surgery", _status(checks), checks)


def corollary_d_check(inv: InvolutiveDInvariants) -> Verdict:
    """No negative semidefinite spin filling when d̲_{-1/2}(Y) < -1/2 and
    d̲_{1/2}(Y) < 1/2 together."""
    a, b = inv.dlow_mhalf, inv.dlow_half
    checks = [
        Check("dlow_{-1/2}(Y) < -1/2", a, -HALF, None if a is None else a < -HALF),
        Check("dlow_{1/2}(Y) < 1/2", b, HALF, None if b is None else b < HALF),
    ]
    if any(c.holds is None for c in checks):
        status = "unevaluable"
    else:
        status = "obstructed" if all(c.holds for c in checks) else "consistent"
    return Verdict("semidefinite-spin-filling", status, checks)


def _status(checks: Sequence[Check]) -> str:
    if any(c.holds is False for c in checks):
        return "obstructed"
    if any(c.holds is None for c in checks):
        return "unevaluable"
    return "consistent"


def theorem_a_bound(b2: int, restriction_trivial: bool, inv: InvolutiveDInvariants) -> Verdict:
    """Spin negative semidefinite filling bound on b2."""
    if restriction_trivial:
        d = inv.dlow_mhalf
        text = "b2 - 3 <= 4*dlow_{-1/2}(Y)"
        check = _le(text, b2 - 3, None if d is None else 4 * d)
        max_b2 = None if d is None else floor(4 * d + 3)
    else:
        d = inv.dlow_half
        text = "b2 + 2 <= 4*dlow_{1/2}(Y)"
        check = _le(text, b2 + 2, None if d is None else 4 * d)
        max_b2 = None if d is None else floor(4 * d - 2)
    status = {True: "consistent", False: "obstructed", None: "unevaluable"}[check.holds]
    return Verdict("b2-bound", status, [check], {"max_b2": max_b2, "b2": b2,
                                                 "restriction_trivial": restriction_trivial})


def _pair(m):
    """(d̄, d̲) of a homology sphere from invariants or a plain pair."""
    if m is None:
        return None, None
    if isinstance(m, InvolutiveDInvariants):
        return m.dbar, m.dlow
    return Fraction(m[0]), Fraction(m[1])


def theorem_b_report(invY: InvolutiveDInvariants, invM=None, invM2=None) -> Verdict:
    """Homology-cobordism inequalities against spheres M (cobordism into Y)
    and M' (out of Y).  Missing sides are reported unevaluable."""
    mbar, mlow = _pair(invM)
    nbar, nlow = _pair(invM2)
    sub = lambda x: None if x is None else x - HALF
    checks = [
        _le("dlow(M) - 1/2 <= dlow_{-1/2}(Y)", sub(mlow), invY.dlow_mhalf),
        _le("dbar(M) - 1/2 <= dbar_{-1/2}(Y)", sub(mbar), invY.dbar_mhalf),
        _le("dlow_{1/2}(Y) - 1/2 <= dlow(M')", sub(invY.dlow_half), nlow),
        _le("dbar_{1/2}(Y) - 1/2 <= dbar(M')", sub(invY.dbar_half), nbar),
    ]
    return Verdict("homology-cobordism", _status(checks), checks)


# -- pipeline -----------------------------------------------------------------

@dataclass
class Side:
    graph: PlumbingGraph
    klass: SpincClass
    plumbing_class: Any
    root: Any
    involution: Any
    odd: HFModule
    weight: WeightFunction


def _load(g) -> PlumbingGraph:
    if isinstance(g, PlumbingGraph):
        return g
    p = Path(str(g))
    if p.exists():
        return parse_plumbing(p.read_text(encoding="utf-8"))
    return parse_plumbing(str(g))


def choose_class(B, spinc="auto", strict: bool = True) -> SpincClass:
    if spinc in (None, "auto"):
        return torsion_selfconjugate_reps(B, strict)[0]
    k = [int(a) for a in spinc]
    if not is_characteristic(k, B):
        raise ValueError("supplied vector is not characteristic")
    if not is_torsion(k, B):
        raise ValueError("supplied vector is not torsion")
    l0 = linalg.integer_solution(B.rows(), k)
    if l0 is None:
        raise ValueError("supplied class is not self-conjugate (k is not in B·Z^s)")
    return SpincClass(tuple(k), True, True, tuple(l0))


def compute_side(g: PlumbingGraph, spinc="auto", method="auto", max_level=None) -> Side:
    B = intersection_form(g)
    pc = classify(B, g)
    if not pc.supported:
        raise UnsupportedPlumbing(pc.reason)
    cls = choose_class(B, spinc)
    W = WeightFunction(quotient_lattice(B), cls.representative)
    root = graded_root(W, method=method, max_level=max_level)
    root = assign_gradings(root, cls.representative, B, pc.b1)
    J = involution_on_root(root, W, cls.l0)
    odd = u_module_from_root(root, pc.b1)
    return Side(g, cls, pc, root, J, odd, W)


def _digest(g: PlumbingGraph) -> str:
    return hashlib.sha256(g.to_json().encode()).hexdigest()[:16]


def inv_dict(inv: InvolutiveDInvariants | None):
    if inv is None:
        return None
    keys = ["dbar_half", "dbar_mhalf", "dlow_half", "dlow_mhalf", "d_half", "d_mhalf"] if inv.b1 \
        else ["dbar", "dlow", "d"]
    out = {k: rat(getattr(inv, k)) for k in keys}
    out["hf_hat_dim"] = inv.hf_hat_dim
    out["hfi_hat_dim"] = inv.hfi_hat_dim
    return out


def root_summary(root) -> dict:
    return {
        "backend": root.backend,
        "vertices": len(root),
        "leaf_count": len(root.leaves),
        "leaf_levels": root.leaf_levels(),
        "leaf_gradings": sorted(rat(root.grading(v)) for v in root.leaves),
        "n_min": root.n_min,
        "n_stop": root.n_stop,
        "stem_grading": rat(root.grading(root.top)),
    }


def module_dict(hf: HFModule) -> dict:
    M = hf.module
    triples = []
    for v in sorted(hf.vertex_index.values()):
        for w in range(len(M)):
            if M.U[v] >> w & 1:
                triples.append([v, w, 1])
    return {
        "towers": [{"bottom": rat(b), "parity": p or None} for b, p in sorted(hf.towers)],
        "reduced": [{"grading": rat(g)} for g in hf.reduced_gradings()],
        "reduced_summands": [{"bottom": rat(b), "length": n} for b, n in hf.reduced],
        "u_matrix": triples,
        "partial": hf.partial,
    }


def hfi_dict(hfi) -> dict:
    from . import gf2

    n = hfi.n_star()
    towers, _ = analyze(hfi.module, n, hfi.b1)
    out = []
    M = hfi.module
    seen = {}
    for r, p in towers:
        seen[r] = seen.get(r, 0) + 1
    for r, cnt in sorted(seen.items()):
        Bv = gf2.Echelon(M.apply_U(gf2.apply(hfi.Q, 1 << i), n) for i in M.at(r + 2 * n + 1))
        nq = len(Bv) - gf2.rank(M.apply_U(v) for v in Bv.basis())
        for i in range(cnt):
            out.append({"bottom": rat(r), "q_image": i < nq})
    top = hfi.span_top + 4
    return {
        "graded_dims": {rat(g): d for g, d in hfi.graded_dims(top).items()},
        "towers": out,
        "notes": hfi.notes,
    }


@dataclass
class InvariantReport:
    data: dict
    inv_minus: InvolutiveDInvariants | None
    inv_Y: InvolutiveDInvariants | None
    verdicts: list[Verdict]
    partial: bool
    hf: HFModule | None = None
    hfi: Any = None
    side: Side | None = None
    reverse: Side | None = None

    def to_dict(self) -> dict:
        return self.data

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=False)


def run_pipeline(gamma, gamma_reversed=None, *, spinc="auto", d_half_override=None,
                 method: str = "auto", max_level: int | None = None,
                 cross_check: bool = True) -> InvariantReport:
    """classify → spin^c → roots → gradings → involution → HF → cone → invariants → verdicts."""
    g = _load(gamma)
    g2 = _load(gamma_reversed) if gamma_reversed is not None else None
    with ThreadPoolExecutor(max_workers=2) as pool:
        fut = pool.submit(compute_side, g, spinc, method, max_level)
        fut2 = pool.submit(compute_side, g2, "auto", method, max_level) if g2 is not None else None
        side = fut.result()
        b1 = side.plumbing_class.b1
        rev = fut2.result() if fut2 is not None and b1 == 1 else None
    data: dict[str, Any] = {
        "inputs": {"gamma": _digest(g)},
        "plumbing": {"definiteness": side.plumbing_class.definiteness, "b1": b1,
                     "h1": side.plumbing_class.h1_text(),
                     "bad_vertices": list(side.plumbing_class.bad_vertices)},
        "spinc_representative": list(side.klass.representative),
        "root": root_summary(side.root),
        "involution": {"identity": side.involution.is_identity(),
                       "swapped_leaves": len(side.involution.swapped_leaves(side.root))},
        "notes": [],
    }
    partial = False
    notes = data["notes"]
    if b1 == 0:
        hf = side.odd
        if g2 is not None:
            notes.append("reversed plumbing ignored: b1 = 0 needs only one orientation")
    else:
        if rev is not None:
            if rev.plumbing_class.h1_text() != side.plumbing_class.h1_text():
                raise UnsupportedPlumbing("H1 of the two plumbings differs: "
                                          f"{side.plumbing_class.h1_text()} vs {rev.plumbing_class.h1_text()}")
            data["inputs"]["gamma_reversed"] = _digest(g2)
            data["reverse_root"] = root_summary(rev.root)
            d_half_Y = d_from_module(rev.odd, "1/2")
            hf = hf_assemble(side.odd, d_half_Y)
            notes.append("cross-check: H1 agrees on both sides and the tower parities are compatible")
        elif d_half_override is not None:
            d_half_Y = Fraction(d_half_override)
            hf = hf_assemble(side.odd, d_half_Y, override=True)
        else:
            hf = hf_assemble(side.odd, None)
            partial = True
    data["hf_minus_Y"] = module_dict(hf)
    inv_minus = inv_Y = None
    verdicts: list[Verdict] = []
    im = iota_model(hf, side.involution)
    hfi = mapping_cone(im)
    if partial:
        data["partial"] = True
        notes.append("partial: supply a reversed plumbing or --d-half-override for full invariants")
    else:
        data["partial"] = False
        inv_minus = involutive_d(hfi, b1, hf)
        hat, hat_i = hfi_hat_dims(im)
        cert = hfi_hat_from_cone(hfi)
        inv_minus = replace(inv_minus, hf_hat_dim=hat, hfi_hat_dim=hat_i)
        inv_Y = convert_orientation(inv_minus)
        data["hfi_minus_Y"] = hfi_dict(hfi)
        data["certificate"] = {"hfi_hat_dim": hat_i, "cone_ker_plus_coker_U": cert,
                               "agrees": hat_i == cert}
        data["invariants_minus_Y"] = inv_dict(inv_minus)
        data["invariants_Y"] = inv_dict(inv_Y)
        if b1 == 1:
            verdicts = [corollary_c_check(inv_Y), corollary_d_check(inv_Y)]
        data["verdicts"] = [v.to_dict() for v in verdicts]
        if rev is not None and cross_check:
            data["orientation_check"] = _orientation_check(side, rev, inv_Y)
    notes.extend(hfi.notes[:1])
    return InvariantReport(data, inv_minus, inv_Y, verdicts, partial, hf, hfi, side, rev)


def direct_reverse_invariants(side: Side, rev: Side) -> InvolutiveDInvariants:
    """Invariants of Y computed from the reversed plumbing's own root and
    involution, with its even tower from the forward side."""
    d_half_minus = d_from_module(side.odd, "1/2")
    hf = hf_assemble(rev.odd, d_half_minus)
    im = iota_model(hf, rev.involution)
    return involutive_d(mapping_cone(im), 1, hf)


def _orientation_check(side: Side, rev: Side, inv_Y: InvolutiveDInvariants) -> dict:
    direct = direct_reverse_invariants(side, rev)
    keys = ["dbar_half", "dbar_mhalf", "dlow_half", "dlow_mhalf", "d_half", "d_mhalf"]
    rows = {}
    for k in keys:
        a, b = getattr(inv_Y, k), getattr(direct, k)
        rows[k] = {"converted": rat(a), "direct": rat(b), "agree": a == b}
    return {"agree": all(r["agree"] for r in rows.values()), "values": rows,
            "note": "informational; the strict model need not be orientation-consistent"}


def verdicts_from_report(data: dict) -> list[Verdict]:
    """Recompute the verdicts from the serialized Y-side invariants."""
    inv = data.get("invariants_Y")
    if data.get("partial") or inv is None or data["plumbing"]["b1"] != 1:
        return []
    kw = {k: Fraction(v) for k, v in inv.items() if k.startswith("d")}
    y = InvolutiveDInvariants(1, **kw)
    return [corollary_c_check(y), corollary_d_check(y)]
