"""Quotient lattice, weight function, sublevel sets, graded roots and cube
cohomology."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Sequence

from . import gf2, linalg
from .plumbing import IntersectionForm, kernel_basis
from .roots import GradedRoot


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class QuotientLattice:
    """L̄ = ℤˢ/ker B with coordinates ℤ^σ.

    ``projection`` is σ×s, ``section`` is s×σ, ``projection·section = I``.
    """
    sigma: int
    projection: tuple[tuple[int, ...], ...]
    section: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]
    edge_vectors: tuple[tuple[int, ...], ...]
    kernel: tuple[tuple[int, ...], ...]
    B: IntersectionForm

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(linalg.matvec(self.projection, x))

    def lift(self, y: Sequence[int]) -> list[int]:
        return linalg.matvec(self.section, y)


def quotient_lattice(B: IntersectionForm) -> QuotientLattice:
    rows = B.rows()
    s = B.s
    kind, _ = linalg.definiteness(rows)
    if kind == "other":
        raise LatticeError("intersection form is not negative semidefinite")
    K = kernel_basis(B)
    b1 = len(K)
    if b1 == 0:
        P = linalg.identity(s)
        S = linalg.identity(s)
    else:
        Kcols = linalg.transpose(K)  # s × b1
        _, U, _ = linalg.smith(Kcols)
        Uinv = linalg.unimodular_inverse(U)
        P = [U[i] for i in range(b1, s)]
        S = [row[b1:] for row in Uinv]
    sigma = s - b1
    gram = linalg.matmul(linalg.transpose(S), linalg.matmul(rows, S)) if sigma else []
    edges = tuple(tuple(P[r][i] for r in range(sigma)) for i in range(s))
    return QuotientLattice(
        sigma,
        tuple(map(tuple, P)),
        tuple(map(tuple, S)),
        tuple(map(tuple, gram)),
        edges,
        tuple(map(tuple, K)),
        B,
    )


class WeightFunction:
    """χ̄_k(y) = -(k̃·y + yᵀGy)/2 with k̃ = Sᵀk and G the gram matrix."""

    def __init__(self, lattice: QuotientLattice, k: Sequence[int]):
        B = lattice.B
        if len(k) != B.s:
            raise LatticeError("characteristic vector has wrong length")
        if any((k[i] - B.B[i][i]) % 2 for i in range(B.s)):
            raise LatticeError("vector is not characteristic")
        for v in lattice.kernel:
            if linalg.dot(k, v):
                raise LatticeError("vector is not torsion (not orthogonal to ker B)")
        self.lattice = lattice
        self.k = tuple(k)
        S = lattice.section
        self.linear_part = tuple(sum(S[r][c] * k[r] for r in range(B.s)) for c in range(lattice.sigma))
        G = lattice.gram
        self._G = G
        # distinct non-zero steps ±[v_i]
        steps = []
        seen = set()
        for e in lattice.edge_vectors:
            for sg in (1, -1):
                d = tuple(sg * a for a in e)
                if any(d) and d not in seen:
                    seen.add(d)
                    steps.append(d)
        self.steps = steps
        self._step_chi = [self.chi(d) for d in steps]
        self._step_G = [tuple(linalg.matvec(G, d)) for d in steps]

    def chi(self, y: Sequence[int]) -> int:
        G = self._G
        q = 0
        for i, yi in enumerate(y):
            if yi:
                row = G[i]
                q += yi * sum(row[j] * y[j] for j in range(len(y)))
        val = -(linalg.dot(self.linear_part, y) + q)
        assert val % 2 == 0
        return val // 2

    def chi_lift(self, x: Sequence[int]) -> int:
        """χ_k on an unreduced vector x ∈ ℤˢ."""
        B = self.lattice.B.B
        q = sum(x[i] * B[i][j] * x[j] for i in range(len(x)) for j in range(len(x)))
        return -(linalg.dot(self.k, x) + q) // 2

    def neighbors(self, y: tuple[int, ...], cy: int):
        """Yield (neighbor, χ̄ value) for every distinct non-zero step."""
        for d, cd, gd in zip(self.steps, self._step_chi, self._step_G):
            q = tuple(a + b for a, b in zip(y, d))
            yield q, cy + cd - sum(a * b for a, b in zip(y, gd))

    def transported(self, alpha: Sequence[int]) -> "WeightFunction":
        """Weight function for k' = k + 2Bα on the same lattice."""
        B = self.lattice.B.rows()
        Ba = linalg.matvec(B, alpha)
        return WeightFunction(self.lattice, [a + 2 * b for a, b in zip(self.k, Ba)])


def chi(W: WeightFunction, y: Sequence[int]) -> int:
    return W.chi(y)


# -- weak local minima --------------------------------------------------------

def weak_local_minima(W: WeightFunction) -> dict[tuple[int, ...], int]:
    """All y with χ̄(y) ≤ χ̄(y ± [v_i]) for every i, mapped to their level.

    χ̄(y ± e_i) - χ̄(y) = (∓k'_i - m_i)/2 with k' = k + 2BSy, so the
    polytope is the box m_i ≤ k'_i ≤ -m_i in the affine coordinates k'.
    We walk that box and solve back for y, keeping the integral solutions.
    """
    lat = W.lattice
    B = lat.B
    s, sigma = B.s, lat.sigma
    m = B.diag()
    if any(w > 0 for w in m):
        # a positive weight allows no point; χ̄ then has no minimum in this sense
        return {}
    k = W.k
    S = lat.section
    G = lat.gram
    if sigma:
        det = int(_det(G))
        adj = _adjugate(G)
    rows = B.rows()
    out: dict[tuple[int, ...], int] = {}
    ranges = [list(range(w, -w + 1, 2)) for w in m]
    # with one kernel direction the class condition k'·κ = 0 prunes the walk
    kap = lat.kernel[0] if len(lat.kernel) == 1 else None
    order = list(range(s))
    if kap is not None:
        order.sort(key=lambda i: -abs(kap[i]) * (1 - m[i]))
        rest = [0] * (s + 1)
        for p in range(s - 1, -1, -1):
            i = order[p]
            rest[p] = rest[p + 1] + abs(kap[i]) * (-m[i])
    vec = [0] * s

    def accept():
        delta = [(a - b) // 2 for a, b in zip(vec, k)]
        if sigma == 0:
            if all(d == 0 for d in delta):
                out[()] = 0
            return
        t = [sum(S[r][c] * delta[r] for r in range(s)) for c in range(sigma)]
        num = linalg.matvec(adj, t)
        if any(v % det for v in num):
            return
        y = tuple(v // det for v in num)
        if linalg.matvec(rows, linalg.matvec(S, y)) != delta:
            return
        out[y] = W.chi(y)

    def rec(pos: int, acc: int):
        if kap is not None and abs(acc) > rest[pos]:
            return
        if pos == s:
            if kap is None or acc == 0:
                accept()
            return
        i = order[pos]
        for a in ranges[i]:
            if (a - k[i]) % 2:
                continue
            vec[i] = a
            rec(pos + 1, acc + (a * kap[i] if kap is not None else 0))

    rec(0, 0)
    return out


def _det(M) -> Fraction:
    n = len(M)
    A = [[Fraction(a) for a in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def _adjugate(M) -> list[list[int]]:
    """det(M)·M⁻¹ as an integer matrix."""
    n = len(M)
    det = _det(M)
    inv = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        inv.append(linalg.solve_rational(M, e))
    inv = linalg.transpose(inv)
    out = [[det * a for a in row] for row in inv]
    for row in out:
        for a in row:
            assert a.denominator == 1
    return [[int(a) for a in row] for row in out]


# -- sublevel enumeration -----------------------------------------------------

class UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, a: int) -> int:
        p = self.parent
        root = a
        while p[root] != root:
            root = p[root]
        while p[a] != root:
            p[a], a = root, p[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        return True


@dataclass
class SublevelComplex:
    level: int
    points: list[tuple[int, ...]]
    chi_values: dict[tuple[int, ...], int]
    component_of: dict[tuple[int, ...], int]

    @property
    def n_components(self) -> int:
        return len(set(self.component_of.values()))


def _ldl(A):
    """q(z) = Σ d_i (z_i + Σ_{j>i} μ_ij z_j)² for positive definite A."""
    n = len(A)
    M = [[Fraction(a) for a in row] for row in A]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = M[i][i]
        if d[i] <= 0:
            raise LatticeError("gram matrix is not negative definite")
        for j in range(i + 1, n):
            mu[i][j] = M[i][j] / d[i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                M[r][c] -= d[i] * mu[i][r] * mu[i][c]
    return d, mu


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def enumerate_points(W: WeightFunction, n: int) -> dict[tuple[int, ...], int]:
    """Exact Fincke–Pohst enumeration of {y : χ̄(y) ≤ n}."""
    lat = W.lattice
    sigma = lat.sigma
    if sigma == 0:
        return {(): 0} if n >= 0 else {}
    A = [[-a for a in row] for row in lat.gram]
    c = linalg.solve_rational(A, [Fraction(v, 2) for v in W.linear_part])
    cAc = sum(c[i] * A[i][j] * c[j] for i in range(sigma) for j in range(sigma))
    R = 2 * n + cAc
    if R < 0:
        return {}
    d, mu = _ldl(A)
    out: dict[tuple[int, ...], int] = {}
    y = [0] * sigma

    def rec(i: int, budget: Fraction):
        if i < 0:
            t = tuple(y)
            v = W.chi(t)
            if v <= n:
                out[t] = v
            return
        u = c[i] - sum(mu[i][j] * (y[j] - c[j]) for j in range(i + 1, sigma))
        r2 = budget / d[i]
        r0 = isqrt(_floor(r2)) + 1
        base = _floor(u)
        for yi in range(base - r0, base + r0 + 2):
            gap = (yi - u) ** 2
            if gap <= r2:
                y[i] = yi
                rec(i - 1, budget - d[i] * gap)

    rec(sigma - 1, R)
    return out


def enumerate_sublevel(W: WeightFunction, n: int) -> SublevelComplex:
    pts = enumerate_points(W, n)
    order = sorted(pts)
    index = {p: i for i, p in enumerate(order)}
    uf = UnionFind()
    for _ in order:
        uf.make()
    for p in order:
        for q, _ in W.neighbors(p, pts[p]):
            j = index.get(q)
            if j is not None:
                uf.union(index[p], j)
    comp = {p: uf.find(index[p]) for p in order}
    return SublevelComplex(n, order, pts, comp)


# -- graded roots -------------------------------------------------------------

def graded_root(W: WeightFunction, method: str = "auto", max_level: int | None = None) -> GradedRoot:
    """Graded root of χ̄ by component tracking from the lowest level up to the
    stopping level; the stem continues from the last vertex.

    ``flood`` grows sublevel sets outward from the weak local minima,
    ``enumerate`` recomputes each sublevel set by ellipsoid enumeration,
    ``fibered`` slices the lattice by the bad-vertex coordinate and
    ``auto`` picks ``fibered`` when it applies and the minima set is large.
    """
    if method == "auto":
        from . import fibered

        method = "fibered" if fibered.prefers_fibered(W) else "flood"
    if method == "flood":
        return _root_flood(W, max_level)
    if method == "flood-minima":
        return _root_flood(W, max_level, stop="minima")
    if method == "enumerate":
        return _root_enumerate(W, max_level)
    if method == "fibered":
        from . import fibered

        return fibered.fibered_root(W, max_level)
    raise LatticeError(f"unknown method {method!r}")


class _RootBuilder:
    """Turns per-level component snapshots into root vertices."""

    def __init__(self):
        self.level: list[int] = []
        self.parent: list[int | None] = []
        self.member: list = []
        self.prev: list[tuple[int, int]] = []  # (vertex, component root) at previous level

    def snapshot(self, n: int, roots: Sequence[int], find, rep) -> dict[int, int]:
        vid = {}
        for r in sorted(roots, key=lambda r: rep(r)):
            vid[r] = len(self.level)
            self.level.append(n)
            self.parent.append(None)
            self.member.append(rep(r))
        for v, r in self.prev:
            self.parent[v] = vid[find(r)]
        self.prev = [(v, r) for r, v in vid.items()]
        return vid

    def finish(self, n_min, n_stop, backend, **kw) -> GradedRoot:
        children = [0] * len(self.level)
        for p in self.parent:
            if p is not None:
                children[p] += 1
        leaves = tuple(v for v in range(len(self.level)) if children[v] == 0)
        top = len(self.level) - 1
        return GradedRoot(
            level=tuple(self.level),
            parent=tuple(self.parent),
            leaves=leaves,
            n_min=n_min,
            n_stop=n_stop,
            top=top,
            member=tuple(self.member),
            backend=backend,
            **kw,
        )


def birth_plateaus(W: WeightFunction, minima: dict | None = None) -> list[list[tuple[int, ...]]]:
    """Plateaus of weak local minima that no same-level step can leave.

    A same-level neighbour outside the minima set has a strictly lower
    neighbour, so such a plateau drains downward; the closed ones are
    exactly where new sublevel components are born.
    """
    if minima is None:
        minima = weak_local_minima(W)
    pts = sorted(minima)
    index = {p: i for i, p in enumerate(pts)}
    uf = UnionFind()
    for _ in pts:
        uf.make()
    leaky = set()
    for p in pts:
        c = minima[p]
        for q, cq in W.neighbors(p, c):
            if cq != c:
                continue
            j = index.get(q)
            if j is None:
                leaky.add(index[p])
            else:
                uf.union(index[p], j)
    bad = {uf.find(i) for i in leaky}
    groups: dict[int, list] = {}
    for p in pts:
        r = uf.find(index[p])
        if r not in bad:
            groups.setdefault(r, []).append(p)
    out = list(groups.values())
    out.sort(key=lambda g: (minima[g[0]], g[0]))
    return out


def _root_flood(W: WeightFunction, max_level: int | None, stop: str = "births") -> GradedRoot:
    """Grow sublevel sets from the birth plateaus with a priority queue.

    Every point of S_n is joined inside S_n to a birth plateau, so a flood
    ordered by χ̄ has popped all of S_n before it pops anything above n.
    ``stop="minima"`` keeps going until the highest weak local minimum, the
    conservative rule; the default stops once the highest birth is passed.
    """
    minima = weak_local_minima(W)
    if not minima:
        raise LatticeError("no weak local minima (unsupported weights)")
    births = birth_plateaus(W, minima)
    n_min = min(minima.values())
    w_max = max(minima.values()) if stop == "minima" else max(minima[b[0]] for b in births)
    heap = [(minima[p], p) for b in births for p in b]
    heapq.heapify(heap)
    seen = {p for _, p in heap}
    idx: dict[tuple[int, ...], int] = {}
    pts: list[tuple[int, ...]] = []
    lv: list[int] = []
    uf = UnionFind()
    live: set[int] = set()
    builder = _RootBuilder()
    point_vertex: dict[tuple[int, ...], int] = {}
    n = n_min
    fresh: list[int] = []
    while True:
        while heap and heap[0][0] <= n:
            c, p = heapq.heappop(heap)
            i = uf.make()
            idx[p] = i
            pts.append(p)
            lv.append(c)
            live.add(i)
            fresh.append(i)
            for q, cq in W.neighbors(p, c):
                j = idx.get(q)
                if j is not None:
                    ra, rb = uf.find(i), uf.find(j)
                    if ra != rb:
                        uf.union(ra, rb)
                        live.discard(max(ra, rb))
                elif q not in seen:
                    seen.add(q)
                    heapq.heappush(heap, (cq, q))
        vid = builder.snapshot(n, list(live), uf.find, lambda r: pts[r])
        for i in fresh:
            point_vertex[pts[i]] = vid[uf.find(i)]
        fresh = []
        if n >= w_max and len(live) == 1:
            break
        n += 1
        if max_level is not None and n > max_level:
            raise LatticeError(f"level cap {max_level} reached before the root stabilized")
    chi_of = {p: lv[i] for p, i in idx.items()}
    parent = builder.parent

    def locate(point, level):
        v = point_vertex.get(tuple(point))
        if v is None:
            return None
        for _ in range(level - chi_of[tuple(point)]):
            v = parent[v]
        return v

    meta = {"points": len(pts), "minima": len(minima), "births": len(births)}
    return builder.finish(n_min, n, "flood", locate=locate, meta=meta)


def _root_enumerate(W: WeightFunction, max_level: int | None) -> GradedRoot:
    minima = weak_local_minima(W)
    if not minima:
        raise LatticeError("no weak local minima (unsupported weights)")
    n_min = min(minima.values())
    w_max = max(minima.values())
    builder = _RootBuilder()
    n = n_min
    history = []
    while True:
        cx = enumerate_sublevel(W, n)
        reps: dict[int, tuple] = {}
        for p in cx.points:  # sorted, so the first hit is the least member
            reps.setdefault(cx.component_of[p], p)
        roots = reps.keys()
        lookup = {p: reps[r] for p, r in cx.component_of.items()}
        vid = builder.snapshot(n, [reps[r] for r in roots], lambda p: lookup[p], lambda p: p)
        history.append((cx, vid, lookup))
        if n >= w_max and len(roots) == 1:
            break
        n += 1
        if max_level is not None and n > max_level:
            raise LatticeError(f"level cap {max_level} reached before the root stabilized")
    by_level = {h[0].level: h for h in history}

    def locate(point, level):
        h = by_level.get(level)
        if h is None:
            return None
        cx, vid, lookup = h
        r = lookup.get(tuple(point))
        return None if r is None else vid[r]

    return builder.finish(n_min, n, "enumerate", locate=locate, meta={"minima": len(minima)})


# -- cube cohomology ----------------------------------------------------------

def cube_complex(W: WeightFunction, n: int):
    """Cells □(a, I) with every corner at weight ≤ n, grouped by |I|.

    Returns (cells, boundaries) where boundaries[q] lists, for each q-cell,
    the bitmask of its (q-1)-faces.
    """
    pts = enumerate_points(W, n)
    E = W.lattice.edge_vectors
    s = len(E)
    cells: list[list[tuple]] = [[] for _ in range(s + 1)]
    for a in sorted(pts):
        for q in range(s + 1):
            for I in combinations(range(s), q):
                ok = True
                for r in range(1, q + 1):
                    for J in combinations(I, r):
                        c = list(a)
                        for j in J:
                            c = [x + y for x, y in zip(c, E[j])]
                        if tuple(c) not in pts:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    cells[q].append((a, I))
    index = [{c: i for i, c in enumerate(cq)} for cq in cells]
    bnd: list[list[int]] = [[] for _ in range(s + 1)]
    for q in range(1, s + 1):
        for a, I in cells[q]:
            mask = 0
            for i in I:
                rest = tuple(j for j in I if j != i)
                b = tuple(x + y for x, y in zip(a, E[i]))
                mask ^= 1 << index[q - 1][(a, rest)]
                mask ^= 1 << index[q - 1][(b, rest)]
            bnd[q].append(mask)
    return cells, bnd


def check_boundary_squares_zero(bnd) -> bool:
    for q in range(2, len(bnd)):
        for mask in bnd[q]:
            if gf2.apply(bnd[q - 1], mask):
                return False
    return True


def cube_cohomology_all(W: WeightFunction, n: int) -> list[int]:
    cells, bnd = cube_complex(W, n)
    if not check_boundary_squares_zero(bnd):
        raise LatticeError("boundary does not square to zero")
    s = len(cells) - 1
    ranks = [0] * (s + 2)
    for q in range(1, s + 1):
        ranks[q] = gf2.rank(bnd[q])
    return [len(cells[q]) - ranks[q] - ranks[q + 1] for q in range(s + 1)]


def cube_cohomology(W: WeightFunction, n: int, q: int) -> int:
    s = len(W.lattice.edge_vectors)
    if not 0 <= q <= s:
        raise LatticeError(f"q must lie in [0, {s}]")
    return cube_cohomology_all(W, n)[q]
