"""Text renderings of graded roots."""
from __future__ import annotations

from .roots import GradedRoot, RootInvolution


def _label(root: GradedRoot, v: int) -> str:
    return f"{root.grading(v)}" if root.shift is not None else f"n={root.level[v]}"


def to_dot(root: GradedRoot, inv: RootInvolution | None = None, name: str = "root") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    for v in range(len(root)):
        lines.append(f'  v{v} [label="{_label(root, v)}"];')
    for v, p in enumerate(root.parent):
        if p is not None and p >= 0:
            lines.append(f"  v{v} -> v{p};")
    if inv is not None:
        for v, w in enumerate(inv.perm):
            if v < w:
                lines.append(f"  v{v} -> v{w} [style=dashed, dir=both, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_ascii(root: GradedRoot, inv: RootInvolution | None = None) -> str:
    """One row per level from the top of the computed range down; vertices
    swapped by the involution are marked with matching letters."""
    tags: dict[int, str] = {}
    if inv is not None:
        pairs = [(v, w) for v, w in enumerate(inv.perm) if v < w]
        for i, (v, w) in enumerate(pairs):
            ch = chr(ord("a") + i % 26)
            tags[v] = tags[w] = ch
    out = []
    for n in range(root.n_stop, root.n_min - 1, -1):
        vs = root.vertices_at(n)
        if not vs:
            continue
        g = root.grading(vs[0]) if root.shift is not None else n
        cells = []
        for v in vs:
            kids = len(root.children()[v])
            mark = tags.get(v, "")
            cells.append(f"o{mark}" + (f"<{kids}" if kids > 1 else ""))
        out.append(f"{str(g):>6} | " + "  ".join(cells))
    out.append("(stem continues upward; dashed pairs share a letter)" if tags else "(stem continues upward)")
    return "\n".join(out) + "\n"
