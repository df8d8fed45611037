"""Graded roots, their gradings and involution, and the finite graded
F[U]-modules built from them."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

from . import gf2


class RootError(ValueError):
    pass


HALF = Fraction(1, 2)


@dataclass(frozen=True)
class GradedRoot:
    """Finite part of a graded root, levels ``n_min`` .. ``n_stop``.

    ``parent[v]`` is the vertex one level up containing v (None only for
    ``top``, above which the stem continues).  ``member[v]`` is a point of the
    component that v stands for; ``locate(point, level)`` finds the vertex
    at ``level`` whose component contains ``point``.
    """
    level: tuple[int, ...]
    parent: tuple[int | None, ...]
    leaves: tuple[int, ...]
    n_min: int
    n_stop: int
    top: int
    member: tuple
    backend: str
    locate: Callable | None = field(default=None, compare=False, repr=False)
    meta: dict = field(default_factory=dict, compare=False, repr=False)
    shift: Fraction | None = None

    def __len__(self) -> int:
        return len(self.level)

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.level]
        for v, p in enumerate(self.parent):
            if p is not None:
                out[p].append(v)
        return out

    def grading(self, v: int) -> Fraction:
        if self.shift is None:
            raise RootError("gradings have not been assigned")
        return 2 * self.level[v] + self.shift

    def leaf_levels(self) -> list[int]:
        return sorted(self.level[v] for v in self.leaves)

    def vertices_at(self, n: int) -> list[int]:
        return [v for v, lv in enumerate(self.level) if lv == n]

    def validate(self) -> None:
        for v, p in enumerate(self.parent):
            if p is None:
                if v != self.top:
                    raise RootError(f"vertex {v} has no parent")
            elif self.level[p] != self.level[v] + 1:
                raise RootError("parent is not one level up")
        if len(self.vertices_at(self.n_stop)) != 1:
            raise RootError("stem level is not a single vertex")

    def canonical(self, v: int | None = None):
        """Isomorphism class of the finite tree below v (default: the top)."""
        kids = self.children()

        def rec(w):
            return (self.level[w], tuple(sorted(rec(c) for c in kids[w])))

        return rec(self.top if v is None else v)

    def merge_depth(self) -> int:
        """Levels between the lowest leaf and the level where everything has
        merged into one vertex."""
        lvl = self.n_min
        while len(self.vertices_at(lvl)) > 1:
            lvl += 1
        return lvl - self.n_min


def assign_gradings(root: GradedRoot, k: Sequence[int], B, b1: int) -> GradedRoot:
    """grading(v) = 2·level(v) - (k² + s - 3·b1)/4."""
    from .spinc import square

    k2 = square(k, B)
    shift = -(k2 + B.s - 3 * b1) / 4
    return replace(root, shift=Fraction(shift))


@dataclass(frozen=True)
class RootInvolution:
    perm: tuple[int, ...]

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def swapped_leaves(self, root: GradedRoot) -> list[tuple[int, int]]:
        return [(v, self.perm[v]) for v in root.leaves if self.perm[v] != v]


def involution_on_root(root: GradedRoot, W, l0: Sequence[int]) -> RootInvolution:
    """J₀(x̄) = -x̄ - l̄0 on members, read back through ``locate``."""
    from . import linalg

    B = W.lattice.B
    if linalg.matvec(B.rows(), l0) != list(W.k):
        raise RootError("l0 is not a witness: B·l0 differs from k")
    if "member_involution" in root.meta:
        f = root.meta["member_involution"](l0)
    else:
        lbar = W.lattice.project(l0)

        def f(x):
            return tuple(-a - b for a, b in zip(x, lbar))

    perm = []
    for v, x in enumerate(root.member):
        w = root.locate(f(x), root.level[v])
        if w is None:
            raise RootError("image of a member point was not reached")
        perm.append(w)
    inv = RootInvolution(tuple(perm))
    _check_involution(root, inv)
    return inv


def _check_involution(root: GradedRoot, inv: RootInvolution) -> None:
    p = inv.perm
    for v in range(len(p)):
        if p[p[v]] != v:
            raise RootError("J₀ does not square to the identity")
        if root.level[p[v]] != root.level[v]:
            raise RootError("J₀ does not preserve levels")
        par = root.parent[v]
        if par is not None and root.parent[p[v]] != p[par]:
            raise RootError("J₀ does not respect the tree")


# -- graded F[U]-modules ------------------------------------------------------

@dataclass
class GradedModule:
    """Finite truncation of a graded F[U]-module.

    Basis element i has grading ``grading[i]``; ``U[i]`` is the bitmask of
    U applied to it.  Everything at gradings ≤ ``ceiling`` is exact; the
    elements in ``stem_tops`` carry towers that continue upward.
    """
    grading: list[Fraction]
    U: list[int]
    tag: list[str]
    ceiling: Fraction
    stem_tops: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.grading)

    def add(self, g: Fraction, u: int, tag: str) -> int:
        self.grading.append(Fraction(g))
        self.U.append(u)
        self.tag.append(tag)
        return len(self.grading) - 1

    def extend(self, ceiling: Fraction) -> None:
        """Grow every stem until it reaches ``ceiling``."""
        tops = []
        for t in self.stem_tops:
            while self.grading[t] + 2 <= ceiling:
                t = self.add(self.grading[t] + 2, 1 << t, self.tag[t])
            tops.append(t)
        self.stem_tops = tops
        self.ceiling = max(self.ceiling, Fraction(ceiling))

    def gradings(self) -> list[Fraction]:
        return sorted(set(self.grading))

    def at(self, r) -> list[int]:
        return [i for i, g in enumerate(self.grading) if g == r]

    def apply_U(self, v: int, times: int = 1) -> int:
        for _ in range(times):
            v = gf2.apply(self.U, v)
        return v

    def image_Un(self, n: int, r) -> gf2.Echelon:
        """Im(Uⁿ) in grading r, assuming r + 2n ≤ ceiling."""
        return gf2.Echelon(self.apply_U(1 << i, n) for i in self.at(r + 2 * n))

    def commutes_check(self, images: Sequence[int]) -> bool:
        for i in range(len(self)):
            if gf2.apply(images, self.U[i]) != gf2.apply(self.U, images[i]):
                return False
        return True


def stabilization_exponent(span: Fraction) -> int:
    """n* = span/2 + 1, rounded up when the span is odd."""
    half = Fraction(span) / 2
    return -(-half.numerator // half.denominator) + 1


@dataclass
class HFModule:
    module: GradedModule
    towers: list[tuple[Fraction, str]]
    reduced: list[tuple[Fraction, int]]  # cyclic summands (bottom grading, length)
    b1: int
    span_top: Fraction
    span_bottom: Fraction
    vertex_index: dict[int, int] = field(default_factory=dict)
    partial: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def n_star(self) -> int:
        return stabilization_exponent(self.span_top - self.span_bottom)

    def reduced_gradings(self) -> list[Fraction]:
        out = []
        for bottom, length in self.reduced:
            out.extend(bottom + 2 * i for i in range(length))
        return sorted(out)

    def signature(self):
        """Isomorphism invariant: towers plus cyclic reduced summands."""
        return (tuple(sorted(self.towers)), tuple(sorted(self.reduced)))


def parity_of(r: Fraction, b1: int) -> str:
    if b1 == 0:
        return ""
    if (r - HALF) % 2 == 0:
        return "1/2"
    if (r + HALF) % 2 == 0:
        return "-1/2"
    return "?"


def quotient(module: GradedModule, sub: dict, limit) -> tuple[GradedModule, dict]:
    """M / sub on gradings ≤ limit.

    ``sub`` maps grading → list of vectors spanning a U-stable subspace.  The
    quotient basis is the set of non-pivot basis elements; the returned map
    sends a quotient basis index to the original index.
    """
    grads = [r for r in module.gradings() if r <= limit]
    red = {r: gf2.rref(sub.get(r, [])) for r in grads}
    keep: dict = {}
    out = GradedModule([], [], [], Fraction(limit))
    pos: dict[int, int] = {}
    for r in grads:
        for i in module.at(r):
            if i not in red[r]:
                pos[i] = out.add(r, 0, module.tag[i])
                keep[pos[i]] = i
    for qi, i in keep.items():
        r = module.grading[i]
        img = module.U[i]
        if r - 2 in red:
            img = gf2.reduce_full(img, red[r - 2])
        elif img:
            raise RootError("quotient map leaves the computed range")
        out.U[qi] = sum(1 << pos[j] for j in gf2.bits(img))
    return out, keep


def analyze(module: GradedModule, n: int, b1: int):
    """Towers and reduced summands from the stable image Im(Uⁿ).

    Tower bottoms are ker U ∩ Im(Uⁿ); the reduced part is M / Im(Uⁿ).
    """
    limit = module.ceiling - 2 * (n + 1)
    grads = [r for r in module.gradings() if r <= limit]
    towers: list[tuple[Fraction, str]] = []
    stable = {}
    for r in grads:
        dims = []
        for N in (n, n + 1):
            T = module.image_Un(N, r)
            dims.append(len(T) - gf2.rank(module.apply_U(v) for v in T.basis()))
            if N == n:
                stable[r] = T.basis()
        if dims[0] != dims[1]:
            raise RootError("image of U^n did not stabilize")
        towers.extend([(r, parity_of(r, b1))] * dims[0])
    Q, _ = quotient(module, stable, limit)
    return towers, cyclic_summands(Q)


def cyclic_summands(Q: GradedModule) -> list[tuple[Fraction, int]]:
    """Decompose a finite module with nilpotent U into F[U]/Uˡ pieces,
    reported as (bottom grading, ℓ)."""
    out = []
    for r in Q.gradings():
        prev = None
        i = 0
        while True:
            span = gf2.Echelon(Q.apply_U(1 << j, i) for j in Q.at(r + 2 * i))
            cnt = len(span) - gf2.rank(Q.apply_U(v) for v in span.basis())
            if prev is not None and prev > cnt:
                out.extend([(r, i)] * (prev - cnt))
            if cnt == 0:
                break
            prev = cnt
            i += 1
    return sorted(out)


def _ceiling_for(top: Fraction, bottom: Fraction) -> Fraction:
    # room for Uⁿ* and Uⁿ*⁺¹ images above the finite part, plus the +1 cone shift
    n = stabilization_exponent(top - bottom)
    return top + 2 * (n + 2) + 4


def _finish(module: GradedModule, b1: int, top: Fraction, bottom: Fraction, **kw) -> HFModule:
    n = stabilization_exponent(top - bottom)
    towers, reduced = analyze(module, n, b1)
    return HFModule(module, towers, reduced, b1, top, bottom, **kw)


def u_module_from_root(root: GradedRoot, b1: int = 1) -> HFModule:
    """One generator per root vertex, U = sum of children, stem extended
    far enough above the finite part for the tower to be read off."""
    if root.shift is None:
        raise RootError("gradings missing; call assign_gradings first")
    tag = "odd" if b1 else ""
    module = GradedModule([], [], [], Fraction(0))
    for v in range(len(root)):
        module.add(root.grading(v), 0, tag)
    for v, p in enumerate(root.parent):
        if p is not None:
            module.U[p] |= 1 << v
    module.stem_tops = [root.top]
    top = root.grading(root.top)
    bottom = min(root.grading(v) for v in root.leaves)
    module.ceiling = top
    module.extend(_ceiling_for(top, bottom))
    hf = _finish(module, b1, top, bottom, vertex_index={v: v for v in range(len(root))})
    if len(hf.towers) != 1:
        raise RootError(f"expected one tower, found {len(hf.towers)}")
    return hf


def d_from_module(m: HFModule, parity: str | None = None) -> Fraction:
    """Bottom of the tower with the requested parity ('1/2', '-1/2', or
    None for the single tower of a rational homology sphere)."""
    hits = [b for b, p in m.towers if parity is None or p == parity]
    if len(hits) != 1:
        raise RootError(f"no unique tower of parity {parity!r}")
    return hits[0]


def hf_assemble(odd: HFModule, d_half_reversed: Fraction | None, *, override: bool = False) -> HFModule:
    """Add the even tower T⁺ with bottom d_{-1/2}(-Y) = -d_{1/2}(Y).

    With ``d_half_reversed`` None the result is marked partial: the odd part
    alone, no even tower.
    """
    if d_half_reversed is None:
        hf = HFModule(odd.module, list(odd.towers), list(odd.reduced), odd.b1,
                      odd.span_top, odd.span_bottom, dict(odd.vertex_index), True,
                      odd.notes + ["partial: no even tower (reversed plumbing missing)"])
        return hf
    bottom = -Fraction(d_half_reversed)
    odd_bottom = d_from_module(odd, "1/2")
    if parity_of(bottom, 1) != "-1/2" or parity_of(odd_bottom, 1) != "1/2":
        raise RootError(f"parity clash: even bottom {bottom}, odd bottom {odd_bottom}")
    module = GradedModule(list(odd.module.grading), list(odd.module.U), list(odd.module.tag),
                          odd.module.ceiling, list(odd.module.stem_tops))
    top = max(odd.span_top, bottom)
    low = min(odd.span_bottom, bottom)
    ceiling = max(module.ceiling, _ceiling_for(top, low))
    module.extend(ceiling)
    e = module.add(bottom, 0, "even")
    module.stem_tops.append(e)
    module.extend(ceiling)
    notes = list(odd.notes)
    if override:
        notes.append(f"even tower bottom {bottom} supplied by manual override")
    return _finish(module, 1, top, low, vertex_index=dict(odd.vertex_index), notes=notes)
