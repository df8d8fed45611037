"""Graded roots for one-bad-vertex, b1 = 1 plumbings by slicing the lattice.

Fix the bad vertex b and write N = |κ_b| for the kernel entry there.  Every
class in L̄ has exactly one lift with x_b = t for each t ≡ x_b (mod N), so L̄
is the disjoint union of the fibers F_t = {x : x_b = t}, t ∈ ℤ/N.  On F_t

    χ(t·e_b + y) = χ(t·e_b) + χ_{k_G}(y) - t·Σ_{u~b} y_u,

a weight function on the lattice of G = Γ - b.  When G has no bad vertex
and is negative definite it is rational, its graded roots are bamboos, and
every nonempty sublevel set of a fiber is connected.  Components of S_n are
then components of a cycle graph on the fibers: fiber t appears at its
minimum τ(t), and the step t → t+1 along e_b appears at μ(t), the least
level at which some x ∈ F_t and x + e_b both lie in S_n.

Both τ and μ are exact minima of a tree-structured integer quadratic; they
are computed by dynamic programming over each component of G inside a box
that provably contains every optimal point.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

from . import linalg
from .roots import GradedRoot


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _round(q: Fraction) -> int:
    return _floor(q + Fraction(1, 2))


def fibered_data(B, kernel):
    """Return (b, components) when the slicing applies, else None.

    Each component is (vertices, attach) where attach is the unique vertex
    of the component adjacent to b.
    """
    if len(kernel) != 1:
        return None
    rows = B.rows()
    s = B.s
    adj = [[j for j in range(s) if j != i and rows[i][j]] for i in range(s)]
    bad = [i for i in range(s) if rows[i][i] > -len(adj[i])]
    if len(bad) != 1:
        return None
    b = bad[0]
    if kernel[0][b] == 0:
        return None
    seen = {b}
    comps = []
    for u in adj[b]:
        stack, comp = [u], []
        seen.add(u)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append((sorted(comp), u))
    if len(seen) != s:
        return None  # disconnected plumbing: not handled here
    for comp, _ in comps:
        for v in comp:
            deg = sum(1 for w in adj[v] if w != b)
            if rows[v][v] > -deg:
                return None
        sub = [[rows[i][j] for j in comp] for i in comp]
        if linalg.definiteness(sub)[0] != "negative_definite":
            return None
    return b, comps


def prefers_fibered(W, threshold: int = 100_000) -> bool:
    """Use slicing when it applies and the weak-minimum box is large."""
    lat = W.lattice
    if fibered_data(lat.B, lat.kernel) is None:
        return False
    size = 1
    for w in lat.B.diag():
        size *= max(1, 1 - w)
    return size > threshold


class _Component:
    """A component C of Γ - b with its attaching vertex u and exact data for
    χ_C^t(y) = (yᵀAy - (k_C + 2t·e_u)·y)/2, A = -B_C."""

    def __init__(self, rows, k, verts, attach):
        self.verts = verts
        self.pos = {v: i for i, v in enumerate(verts)}
        self.u = self.pos[attach]
        n = len(verts)
        self.A = [[-rows[a][b] for b in verts] for a in verts]
        self.m = [rows[v][v] for v in verts]
        self.k = [k[v] for v in verts]
        self.inv_cols = [linalg.solve_rational(self.A, [int(i == j) for i in range(n)]) for j in range(n)]
        # tree rooted at u: parent links and a post-order
        adj = {i: [self.pos[w] for w in verts if w != v and rows[v][w]] for i, v in enumerate(verts)}
        self.parent = [-1] * n
        order, stack = [], [self.u]
        seen = {self.u}
        while stack:
            v = stack.pop()
            order.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    self.parent[w] = v
                    stack.append(w)
        self.post = order[::-1]

    def center(self, t: int) -> list[Fraction]:
        rhs = [Fraction(a, 2) for a in self.k]
        rhs[self.u] += t
        n = len(self.verts)
        return [sum(self.inv_cols[j][i] * rhs[j] for j in range(n)) for i in range(n)]

    def value(self, y, t: int) -> int:
        n = len(y)
        q = sum(y[i] * self.A[i][j] * y[j] for i in range(n) for j in range(n))
        v = q - sum(a * b for a, b in zip(self.k, y)) - 2 * t * y[self.u]
        assert v % 2 == 0
        return v // 2

    def real_min(self, c) -> Fraction:
        n = len(c)
        return -sum(c[i] * self.A[i][j] * c[j] for i in range(n) for j in range(n)) / 2

    def box(self, c, slack: Fraction) -> list[range]:
        """Integer ranges with |y_i - c_i|² ≤ 2·slack·(A⁻¹)_ii."""
        out = []
        for i, ci in enumerate(c):
            r2 = 2 * slack * self.inv_cols[i][i]
            r0 = isqrt(max(0, _floor(r2))) + 1
            lo = _floor(ci) - r0
            hi = _floor(ci) + r0 + 1
            while (lo - ci) ** 2 > r2:
                lo += 1
            while (hi - ci) ** 2 > r2:
                hi -= 1
            out.append(range(lo, hi + 1))
        return out

    def profile(self, t: int, dom: list[range]) -> dict[int, int]:
        """s ↦ min χ_C^t over the box with y_u = s (tree dynamic program)."""
        f: dict[int, dict[int, int]] = {}
        for v in self.post:
            kv, mv = self.k[v], self.m[v]
            lin = t if v == self.u else 0
            table = {}
            kids = [c for c in range(len(self.verts)) if self.parent[c] == v]
            for y in dom[v]:
                val = -(kv * y + mv * y * y) // 2 - lin * y
                for c in kids:
                    val += min(fc - y * z for z, fc in f[c].items())
                table[y] = val
            for c in kids:
                del f[c]
            f[v] = table
        return f[self.u]


def fiber_levels(W):
    """(N, b, τ, μ) with τ[t] the minimum of χ̄ on fiber t and μ[t] the level
    at which fibers t and t+1 become adjacent."""
    lat = W.lattice
    B = lat.B
    data = fibered_data(B, lat.kernel)
    if data is None:
        raise ValueError("slicing does not apply to this plumbing")
    b, comps = data
    rows = B.rows()
    k = W.k
    kap = lat.kernel[0]
    N = abs(kap[b])
    mb, kb = rows[b][b], k[b]
    cs = [_Component(rows, k, verts, u) for verts, u in comps]
    tau, mu = [], []
    for t in range(N):
        base = -(kb * t + mb * t * t) // 2
        D = -(kb + mb) // 2 - t * mb
        centers = [c.center(t) for c in cs]
        lows = [c.real_min(cc) for c, cc in zip(cs, centers)]
        guess = [[_round(a) for a in cc] for cc in centers]
        vals = [c.value(g, t) for c, g in zip(cs, guess)]
        ssum = sum(g[c.u] for c, g in zip(cs, guess))
        upper = base + sum(vals) + max(0, D - ssum)
        profiles = []
        for i, (c, cc) in enumerate(zip(cs, centers)):
            room = upper - base - sum(lows[j] for j in range(len(cs)) if j != i)
            dom = c.box(cc, room - lows[i])
            profiles.append(c.profile(t, dom))
        tau.append(base + sum(min(p.values()) for p in profiles))
        # min-plus convolution over the sum of attaching coordinates
        conv = {0: 0}
        for p in profiles:
            nxt: dict[int, int] = {}
            for S, a in conv.items():
                for s, v in p.items():
                    key = S + s
                    val = a + v
                    if key not in nxt or val < nxt[key]:
                        nxt[key] = val
            conv = nxt
        mu.append(base + min(v + max(0, D - S) for S, v in conv.items()))
    return N, b, tau, mu


def fibered_root(W, max_level: int | None = None) -> GradedRoot:
    from .lattice import LatticeError, UnionFind, _RootBuilder

    N, b, tau, mu = fiber_levels(W)
    n_min = min(tau)
    top_birth = max(tau)
    uf = UnionFind()
    for _ in range(N):
        uf.make()
    live: set[int] = set()
    builder = _RootBuilder()
    vertex_at: dict[int, dict[int, int]] = {}
    n = n_min
    while True:
        for t in range(N):
            if tau[t] == n:
                live.add(t)
        for t in range(N):
            if mu[t] == n and N > 1:
                a, c = uf.find(t), uf.find((t + 1) % N)
                if a != c:
                    uf.union(a, c)
                    live.discard(max(a, c))
        vid = builder.snapshot(n, list(live), uf.find, lambda r: r)
        vertex_at[n] = {t: vid[uf.find(t)] for t in range(N) if tau[t] <= n}
        if n >= top_birth and len(live) == 1:
            break
        n += 1
        if max_level is not None and n > max_level:
            raise LatticeError(f"level cap {max_level} reached before the root stabilized")

    def locate(t, level):
        return vertex_at.get(level, {}).get(t)

    def member_involution(l0):
        return lambda t: (-t - l0[b]) % N

    meta = {"fibers": N, "bad_vertex": b, "tau": tau, "mu": mu,
            "member_involution": member_involution}
    return builder.finish(n_min, n, "fibered", locate=locate, meta=meta)
