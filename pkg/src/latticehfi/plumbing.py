"""Plumbing graphs, intersection forms, homological classification and the
built-in example families."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from . import linalg


class PlumbingError(ValueError):
    """Malformed plumbing input."""


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: tuple[tuple[str, int], ...]
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        ids = [v for v, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise PlumbingError("duplicate vertex id")
        known = set(ids)
        seen = set()
        parent = {v: v for v in ids}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in self.edges:
            if a not in known or b not in known:
                raise PlumbingError(f"edge endpoint not declared: {a!r}-{b!r}")
            if a == b:
                raise PlumbingError(f"loop at {a!r}")
            key = frozenset((a, b))
            if key in seen:
                raise PlumbingError(f"repeated edge {a!r}-{b!r}")
            seen.add(key)
            ra, rb = find(a), find(b)
            if ra == rb:
                raise PlumbingError(f"cycle detected through edge {a!r}-{b!r}")
            parent[ra] = rb

    @property
    def ids(self) -> list[str]:
        return [v for v, _ in self.vertices]

    @property
    def weights(self) -> list[int]:
        return [w for _, w in self.vertices]

    @property
    def s(self) -> int:
        return len(self.vertices)

    def index(self) -> dict[str, int]:
        return {v: i for i, (v, _) in enumerate(self.vertices)}

    def degrees(self) -> list[int]:
        idx = self.index()
        deg = [0] * self.s
        for a, b in self.edges:
            deg[idx[a]] += 1
            deg[idx[b]] += 1
        return deg

    def neighbors(self) -> list[list[int]]:
        idx = self.index()
        nb: list[list[int]] = [[] for _ in range(self.s)]
        for a, b in self.edges:
            nb[idx[a]].append(idx[b])
            nb[idx[b]].append(idx[a])
        return nb

    def to_json(self) -> str:
        return json.dumps({
            "vertices": [{"id": v, "weight": w} for v, w in self.vertices],
            "edges": [[a, b] for a, b in self.edges],
        })


def make_graph(weights: Iterable[int], edges: Iterable[tuple[int, int]] = ()) -> PlumbingGraph:
    """Build a graph with ids v1..vs from 0-based edge index pairs."""
    weights = list(weights)
    return PlumbingGraph(
        tuple((f"v{i + 1}", int(w)) for i, w in enumerate(weights)),
        tuple((f"v{a + 1}", f"v{b + 1}") for a, b in edges),
    )


def parse_plumbing(text: str) -> PlumbingGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlumbingError(f"malformed plumbing file: {exc}") from exc
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise PlumbingError("expected an object with a 'vertices' list")
    verts = []
    for item in doc["vertices"]:
        if not isinstance(item, dict) or "id" not in item or "weight" not in item:
            raise PlumbingError(f"bad vertex entry {item!r}")
        w = item["weight"]
        if isinstance(w, bool) or not isinstance(w, int):
            raise PlumbingError(f"weight of {item['id']!r} is not an integer")
        verts.append((str(item["id"]), w))
    edges = []
    for e in doc.get("edges", []):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise PlumbingError(f"bad edge entry {e!r}")
        edges.append((str(e[0]), str(e[1])))
    return PlumbingGraph(tuple(verts), tuple(edges))


@dataclass(frozen=True)
class IntersectionForm:
    B: tuple[tuple[int, ...], ...]
    basis: tuple[str, ...]

    @property
    def s(self) -> int:
        return len(self.B)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.B]

    def diag(self) -> list[int]:
        return [self.B[i][i] for i in range(self.s)]


def intersection_form(g: PlumbingGraph) -> IntersectionForm:
    idx = g.index()
    s = g.s
    B = [[0] * s for _ in range(s)]
    for i, w in enumerate(g.weights):
        B[i][i] = w
    for a, b in g.edges:
        B[idx[a]][idx[b]] = 1
        B[idx[b]][idx[a]] = 1
    return IntersectionForm(tuple(tuple(r) for r in B), tuple(g.ids))


@dataclass(frozen=True)
class PlumbingClass:
    definiteness: str
    b1: int
    h1_free_rank: int
    h1_torsion: tuple[int, ...]
    bad_vertices: tuple[str, ...]
    supported: bool
    reason: str = ""

    def h1_text(self) -> str:
        parts = ["Z"] * self.h1_free_rank + [f"Z/{t}" for t in self.h1_torsion]
        return " + ".join(parts) if parts else "0"


def bad_vertices(g: PlumbingGraph) -> list[str]:
    return [v for (v, w), d in zip(g.vertices, g.degrees()) if w > -d]


def classify(B: IntersectionForm, g: PlumbingGraph | None = None) -> PlumbingClass:
    """Decide definiteness, b1, H1 and support.

    The bad-vertex rule needs degrees, which are read off B when no graph is
    passed (off-diagonal ones are exactly the edges).
    """
    rows = B.rows()
    kind, rank = linalg.definiteness(rows)
    b1 = B.s - rank if kind != "other" else B.s - _rank_q(rows)
    free, tors = linalg.cokernel_invariants(rows)
    if g is None:
        deg = [sum(1 for j in range(B.s) if j != i and rows[i][j]) for i in range(B.s)]
        bad = tuple(B.basis[i] for i in range(B.s) if rows[i][i] > -deg[i])
    else:
        bad = tuple(bad_vertices(g))
    defin = {"negative_definite": "negative_definite",
             "negative_semidefinite": "negative_semidefinite_degenerate"}.get(kind, "other")
    reason = ""
    if defin == "other":
        reason = "intersection form is not negative semidefinite"
    elif len(bad) > 1:
        reason = f"{len(bad)} bad vertices (at most one allowed)"
    elif defin == "negative_semidefinite_degenerate":
        if b1 != 1:
            reason = f"b1 = {b1} (need b1 = 1 for a degenerate form)"
        elif free != 1 or tors:
            reason = "H1 is not Z"
    return PlumbingClass(defin, b1, free, tuple(tors), bad, reason == "", reason)


def _rank_q(rows) -> int:
    n = len(rows[0]) if rows else 0
    return n - len(linalg.integer_kernel(rows))


def kernel_basis(B: IntersectionForm) -> list[list[int]]:
    return linalg.integer_kernel(B.rows())


# -- built-in families ----------------------------------------------------

FAMILIES = ("gamma_Nj", "gamma_prime_Nj", "k1_surgery", "k1_surgery_reversed",
            "single_vertex", "disjoint_zeros")


def _gamma(j: int) -> PlumbingGraph:
    # star at v1 with arms -2, -(8j-1) and the chain -3, -2 x (2j-2), -5
    w = [-1, -2, -8 * j + 1, -3] + [-2] * (2 * j - 2) + [-5]
    edges = [(0, 1), (0, 2), (0, 3)]
    edges += [(i, i + 1) for i in range(3, len(w) - 1)]
    return make_graph(w, edges)


def _gamma_prime(j: int) -> PlumbingGraph:
    n = 8 * j + 5
    w = [-2] * n
    w[8 * j] = -2 * j - 1  # v_{8j+1}
    edges = [(i, i + 1) for i in range(8 * j + 3)]  # path v1 .. v_{8j+4}
    edges.append((8 * j - 2, 8 * j + 4))  # v_{8j+5} hangs off v_{8j-1}
    return make_graph(w, edges)


def _seifert(center: int, arms: list[list[int]]) -> PlumbingGraph:
    w = [center]
    edges = []
    for arm in arms:
        prev = 0
        for a in arm:
            w.append(a)
            edges.append((prev, len(w) - 1))
            prev = len(w) - 1
    return make_graph(w, edges)


def _k1() -> PlumbingGraph:
    # v2 is the -1 center; arms v1 | v3-v4 | v5-v6
    return make_graph([-3, -1, -4, -4, -3, -2], [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)])


def _k1_reversed() -> PlumbingGraph:
    # arm-by-arm orientation reversal of _k1: 3 -> 3/2, 5/2 -> 5/3, 15/4 -> 15/11
    return _seifert(-2, [[-2, -2], [-2, -3], [-2, -2, -3, -2, -2]])


def builtin_family(name: str, j: int = 1) -> PlumbingGraph:
    """Example graphs.  For ``single_vertex`` j is the weight, for
    ``disjoint_zeros`` it is the vertex count."""
    if name == "gamma_Nj":
        if j < 1:
            raise ValueError("gamma_Nj needs j >= 1")
        return _gamma(j)
    if name == "gamma_prime_Nj":
        if j < 1:
            raise ValueError("gamma_prime_Nj needs j >= 1")
        return _gamma_prime(j)
    if name == "k1_surgery":
        return _k1()
    if name == "k1_surgery_reversed":
        return _k1_reversed()
    if name == "single_vertex":
        return make_graph([j])
    if name == "disjoint_zeros":
        if j < 1:
            raise ValueError("disjoint_zeros needs s >= 1")
        return make_graph([0] * j)
    raise ValueError(f"unknown family {name!r}")
