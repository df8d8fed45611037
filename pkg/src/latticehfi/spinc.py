"""Characteristic vectors, torsion spin^c classes and the star-condition
leaf search."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import gf2, linalg
from .plumbing import IntersectionForm, PlumbingGraph, classify, intersection_form, kernel_basis


class SpincError(ValueError):
    pass


def is_characteristic(k: Sequence[int], B: IntersectionForm) -> bool:
    if len(k) != B.s:
        raise SpincError(f"vector has length {len(k)}, expected {B.s}")
    return all((k[i] - B.B[i][i]) % 2 == 0 for i in range(B.s))


def same_orbit(k: Sequence[int], k2: Sequence[int], B: IntersectionForm) -> bool:
    """k2 - k ∈ 2·B·ℤˢ."""
    diff = [b - a for a, b in zip(k, k2)]
    if any(d % 2 for d in diff):
        return False
    return linalg.in_integer_image(B.rows(), [d // 2 for d in diff])


@dataclass(frozen=True)
class SpincClass:
    representative: tuple[int, ...]
    torsion: bool
    self_conjugate: bool
    l0: tuple[int, ...] | None = None


def is_torsion(k: Sequence[int], B: IntersectionForm) -> bool:
    return all(linalg.dot(k, v) == 0 for v in kernel_basis(B))


def _mod2_solutions(B: IntersectionForm) -> list[list[int]]:
    """All l ∈ {0,1}ˢ with B·l ≡ diag(B) mod 2 (always solvable: the diagonal
    of a symmetric F2 matrix lies in its column space)."""
    s = B.s
    cols = [sum(((B.B[i][j] & 1) << i) for i in range(s)) for j in range(s)]
    target = sum(((B.B[i][i] & 1) << i) for i in range(s))
    # one particular solution by elimination with tags
    rows: dict[int, tuple[int, int]] = {}
    for j, v in enumerate(cols):
        tag = 1 << j
        while v:
            top = v.bit_length() - 1
            if top not in rows:
                rows[top] = (v, tag)
                break
            v ^= rows[top][0]
            tag ^= rows[top][1]
    t, sol = target, 0
    while t:
        top = t.bit_length() - 1
        if top not in rows:
            raise SpincError("no mod 2 solution (matrix not symmetric?)")
        t ^= rows[top][0]
        sol ^= rows[top][1]
    kern = gf2.kernel(cols)
    out = []
    for mask in range(1 << len(kern)):
        v = sol
        for i, kv in enumerate(kern):
            if mask >> i & 1:
                v ^= kv
        out.append([v >> i & 1 for i in range(s)])
    return out


def torsion_selfconjugate_reps(B: IntersectionForm, strict: bool = True) -> list[SpincClass]:
    """Self-conjugate torsion classes, each with a witness l0 (B·l0 = k).

    ``strict=False`` skips the support check (cohomology of b1 > 1 inputs)."""
    cls = classify(B)
    if strict and not cls.supported:
        raise SpincError(f"unsupported plumbing: {cls.reason}")
    rows = B.rows()
    out: list[SpincClass] = []
    for l0 in _mod2_solutions(B):
        k = linalg.matvec(rows, l0)
        if any(same_orbit(c.representative, k, B) for c in out):
            continue
        out.append(SpincClass(tuple(k), True, True, tuple(l0)))
        if cls.b1 == 1:
            break  # H1 ≅ ℤ: exactly one torsion class
    return out


def square(k: Sequence[int], B: IntersectionForm) -> Fraction:
    """k² = k·α with B·α = k over ℚ."""
    alpha = linalg.solve_rational(B.rows(), list(k))
    if alpha is None:
        raise SpincError("k is not torsion: B·α = k has no rational solution")
    return sum((Fraction(a) * b for a, b in zip(alpha, k)), Fraction(0))


def satisfies_star(k: Sequence[int], g: PlumbingGraph) -> bool:
    return all(m <= a <= -m for a, m in zip(k, g.weights))


class _ClassTest:
    """Fast membership test for k' in the orbit of k, via Smith form residues."""

    def __init__(self, k: Sequence[int], B: IntersectionForm):
        self.k = list(k)
        d, S, _ = linalg.smith(B.rows())
        self.S = S
        self.d = d + [0] * (B.s - len(d))

    def __call__(self, k2: Sequence[int]) -> bool:
        diff = [(b - a) // 2 for a, b in zip(self.k, k2)]
        for row, di in zip(self.S, self.d):
            w = linalg.dot(row, diff)
            if (w != 0) if di == 0 else (w % di != 0):
                return False
        return True


def star_vectors(g: PlumbingGraph, cls: SpincClass) -> list[tuple[int, ...]]:
    """Every characteristic vector of the class satisfying the star bounds."""
    B = intersection_form(g)
    m = g.weights
    s = g.s
    if any(w > 0 for w in m):
        return []
    kern = kernel_basis(B)
    test = _ClassTest(cls.representative, B)
    choices = [list(range(w, -w + 1, 2)) for w in m]
    out = []
    if len(kern) == 1 and classify(B, g).h1_torsion == ():
        # H1 ≅ ℤ: membership is k'·κ = 0, prune on the running dot product
        kap = kern[0]
        order = sorted(range(s), key=lambda i: -abs(kap[i]) * (1 - m[i]))
        rest = [0] * (s + 1)
        for pos in range(s - 1, -1, -1):
            i = order[pos]
            rest[pos] = rest[pos + 1] + abs(kap[i]) * (-m[i])
        vec = [0] * s

        def rec(pos: int, acc: int):
            if abs(acc) > rest[pos]:
                return
            if pos == s:
                if acc == 0:
                    out.append(tuple(vec))
                return
            i = order[pos]
            for a in choices[i]:
                vec[i] = a
                rec(pos + 1, acc + a * kap[i])

        rec(0, 0)
        out.sort()
        return out
    from itertools import product

    for vec in product(*choices):
        if test(vec):
            out.append(tuple(vec))
    return out


def star_components(g: PlumbingGraph, cls: SpincClass) -> list[list[tuple[int, ...]]]:
    """Components of the move graph on star vectors that no move can leave,
    each sorted, listed by their least element."""
    B = intersection_form(g).B
    m = g.weights
    s = g.s
    vecs = star_vectors(g, cls)
    index = {v: i for i, v in enumerate(vecs)}
    parent = list(range(len(vecs)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    leaky = set()
    for idx, v in enumerate(vecs):
        for i in range(s):
            signs = []
            if v[i] == -m[i]:
                signs.append(1)
            if v[i] == m[i]:
                signs.append(-1)
            for sg in signs:
                w = tuple(v[r] + 2 * sg * B[r][i] for r in range(s))
                j = index.get(w)
                if j is None:
                    leaky.add(idx)
                else:
                    ra, rb = find(idx), find(j)
                    if ra != rb:
                        parent[ra] = rb
    bad_roots = {find(i) for i in leaky}
    groups: dict[int, list] = {}
    for idx, v in enumerate(vecs):
        r = find(idx)
        if r not in bad_roots:
            groups.setdefault(r, []).append(v)
    comps = [sorted(c) for c in groups.values()]
    comps.sort(key=lambda c: c[0])
    return comps


def leaf_reps_star_search(g: PlumbingGraph, cls: SpincClass) -> list[tuple[int, tuple[int, ...]]]:
    """Leaf representatives of the graded root, one per closed star component."""
    B = intersection_form(g)
    c = classify(B, g)
    if not c.supported:
        raise SpincError(f"unsupported plumbing: {c.reason}")
    if not is_torsion(cls.representative, B):
        raise SpincError("class is not torsion")
    return [(i, comp[0]) for i, comp in enumerate(star_components(g, cls))]


def star_leaf_levels(g: PlumbingGraph, cls: SpincClass) -> list[int]:
    """χ-level of each star leaf relative to the class representative:
    k' = k + 2Bα has χ_k(α) = (k² - k'²)/8."""
    B = intersection_form(g)
    k2 = square(cls.representative, B)
    out = []
    for _, rep in leaf_reps_star_search(g, cls):
        lvl = (k2 - square(rep, B)) / 8
        assert lvl.denominator == 1
        out.append(int(lvl))
    return out
