"""
Auslander-Reiten quivers: nodes, irreducible-map arrows and the translation,
with stable-part extraction, mesh linting and DOT/JSON/ASCII exporters.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from src.errors import ContractViolation

logger = logging.getLogger(__name__)

Edge = Tuple[str, str]


@dataclass(frozen=True)
class ARNode:
    node_id: str
    label: str
    dim_total: int
    injective: bool = False
    incomplete: bool = False


@dataclass(frozen=True)
class ARQuiver:
    nodes: Tuple[ARNode, ...]
    arrows: Tuple[Edge, ...]
    translation: Tuple[Edge, ...]
    layout: Tuple[Tuple[str, int, int], ...] = ()

    def __post_init__(self) -> None:
        ids = [n.node_id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ContractViolation("AR quiver node ids must be unique")
        known = set(ids)
        if len(set(self.arrows)) != len(self.arrows):
            raise ContractViolation("AR quiver arrows must be multiplicity-free")
        for src, dst in self.arrows:
            if src not in known or dst not in known:
                raise ContractViolation(f"Arrow {src} -> {dst} leaves the node set")
        sources = [src for src, _ in self.translation]
        if len(set(sources)) != len(sources):
            raise ContractViolation("Translation must be a partial function")
        injective = {n.node_id for n in self.nodes if n.injective}
        for src, dst in self.translation:
            if src not in known or dst not in known:
                raise ContractViolation(f"Translation {src} -> {dst} leaves the node set")
            if src in injective:
                raise ContractViolation(f"Injective node {src} cannot be translated")

    @classmethod
    def build(
        cls,
        nodes: Sequence[ARNode],
        arrows: Iterable[Edge],
        translation: Iterable[Edge],
        layout: Optional[Dict[str, Tuple[int, int]]] = None,
    ) -> "ARQuiver":
        """Normalize edge order to node order and drop repeated arrows."""
        order = {n.node_id: k for k, n in enumerate(nodes)}

        def key(edge: Edge) -> Tuple[int, int]:
            return (order[edge[0]], order[edge[1]])

        return cls(
            nodes=tuple(nodes),
            arrows=tuple(sorted(set(arrows), key=key)),
            translation=tuple(sorted(set(translation), key=key)),
            layout=tuple((n.node_id, *layout[n.node_id]) for n in nodes if layout and n.node_id in layout),
        )

    @cached_property
    def node_map(self) -> Dict[str, ARNode]:
        return {n.node_id: n for n in self.nodes}

    @cached_property
    def tau(self) -> Dict[str, str]:
        return dict(self.translation)

    def out_targets(self, node_id: str) -> List[str]:
        return [dst for src, dst in self.arrows if src == node_id]

    def in_sources(self, node_id: str) -> List[str]:
        return [src for src, dst in self.arrows if dst == node_id]


def restrict(q: ARQuiver, keep: Iterable[str]) -> ARQuiver:
    """Full subquiver on the given node ids."""
    keep = set(keep)
    return ARQuiver(
        nodes=tuple(n for n in q.nodes if n.node_id in keep),
        arrows=tuple(e for e in q.arrows if e[0] in keep and e[1] in keep),
        translation=tuple(e for e in q.translation if e[0] in keep and e[1] in keep),
        layout=tuple(item for item in q.layout if item[0] in keep),
    )


def stable(q: ARQuiver) -> ARQuiver:
    return restrict(q, (n.node_id for n in q.nodes if not n.injective))


@dataclass(frozen=True)
class MeshViolation:
    node_id: str
    translate_id: str
    out_of_node: Tuple[str, ...]
    into_translate: Tuple[str, ...]


def mesh_lint(q: ARQuiver) -> List[MeshViolation]:
    """Meshes where the arrows leaving m and the arrows entering tau(m) disagree.

    Nodes flagged incomplete, or whose translate is, are skipped.
    """
    violations: List[MeshViolation] = []
    nodes = q.node_map
    for m, t in q.translation:
        if nodes[m].incomplete or nodes[t].incomplete:
            continue
        outgoing = Counter(q.out_targets(m))
        incoming = Counter(q.in_sources(t))
        if outgoing != incoming:
            violations.append(
                MeshViolation(m, t, tuple(sorted(outgoing.elements())), tuple(sorted(incoming.elements())))
            )
    return violations


def to_networkx(q: ARQuiver) -> nx.DiGraph:
    graph = nx.DiGraph()
    for n in q.nodes:
        graph.add_node(n.node_id, label=n.label, dim_total=n.dim_total, injective=n.injective)
    for src, dst in q.arrows:
        graph.add_edge(src, dst, kind="arrow")
    for src, dst in q.translation:
        if not graph.has_edge(src, dst):
            graph.add_edge(src, dst, kind="translation")
    return graph


def components(q: ARQuiver) -> List[Tuple[str, ...]]:
    """Connected components, each listed in node order, ordered by first node."""
    order = {n.node_id: k for k, n in enumerate(q.nodes)}
    groups = [
        tuple(sorted(group, key=order.__getitem__))
        for group in nx.weakly_connected_components(to_networkx(q))
    ]
    return sorted(groups, key=lambda g: order[g[0]])


# --- exporters ---


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(q: ARQuiver, name: str = "ARQuiver") -> str:
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for n in q.nodes:
        attrs = [f'label="{_dot_escape(n.label)}"']
        if n.injective:
            attrs.append("peripheries=2")
        if n.incomplete:
            attrs.append("style=dotted")
        lines.append(f'  "{_dot_escape(n.node_id)}" [{", ".join(attrs)}];')
    for src, dst in q.arrows:
        lines.append(f'  "{_dot_escape(src)}" -> "{_dot_escape(dst)}";')
    for src, dst in q.translation:
        lines.append(f'  "{_dot_escape(src)}" -> "{_dot_escape(dst)}" [style=dashed, constraint=false];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dict(q: ARQuiver) -> Dict[str, Any]:
    return {
        "nodes": [
            {
                "id": n.node_id,
                "label": n.label,
                "dim_total": n.dim_total,
                "injective": n.injective,
                "incomplete": n.incomplete,
            }
            for n in q.nodes
        ],
        "arrows": [[src, dst] for src, dst in q.arrows],
        "translation": [[src, dst] for src, dst in q.translation],
        "layout": [[node_id, row, col] for node_id, row, col in q.layout],
    }


def to_json(q: ARQuiver) -> str:
    return json.dumps(to_dict(q), indent=2, ensure_ascii=False) + "\n"


def from_json(text: str) -> ARQuiver:
    data = json.loads(text)
    return ARQuiver(
        nodes=tuple(
            ARNode(n["id"], n["label"], int(n["dim_total"]), bool(n["injective"]), bool(n.get("incomplete", False)))
            for n in data["nodes"]
        ),
        arrows=tuple((src, dst) for src, dst in data["arrows"]),
        translation=tuple((src, dst) for src, dst in data["translation"]),
        layout=tuple((node_id, int(row), int(col)) for node_id, row, col in data.get("layout", [])),
    )


_GAP = 4


def _ascii_label(node: ARNode) -> str:
    return node.label + ("?" if node.incomplete else "")


def to_ascii(q: ARQuiver, layout: Optional[Dict[str, Tuple[int, int]]] = None) -> str:
    """Diagonal grid drawing: one text row per quiver row, connector lines between.

    ``layout`` maps node ids to (row, column); it defaults to the quiver's own
    layout hints. Only arrows between neighbouring cells are drawn. Nodes on
    the window boundary get a trailing "?".
    """
    if layout is None:
        layout = {node_id: (row, col) for node_id, row, col in q.layout}
    if not q.nodes:
        return ""
    if not layout:
        layout = {n.node_id: (0, k) for k, n in enumerate(q.nodes)}
    placed = {n.node_id: n for n in q.nodes if n.node_id in layout}
    cells = {layout[node_id]: node_id for node_id in placed}
    rows = [r for r, _ in cells]
    cols = [c for _, c in cells]
    rmin, rmax, cmin, cmax = min(rows), max(rows), min(cols), max(cols)
    labels = {node_id: _ascii_label(n) for node_id, n in placed.items()}
    width = max(3, max(len(label) for label in labels.values()))
    stride = width + _GAP
    line_len = (cmax - cmin + 1) * stride

    def x(col: int) -> int:
        return (col - cmin) * stride

    label_lines = {r: [" "] * line_len for r in range(rmin, rmax + 1)}
    connector_lines = {r: [" "] * line_len for r in range(rmin, rmax)}

    def put(buffer: List[str], start: int, text: str) -> None:
        for offset, ch in enumerate(text):
            if 0 <= start + offset < len(buffer):
                buffer[start + offset] = ch

    for (r, c), node_id in cells.items():
        label = labels[node_id]
        put(label_lines[r], x(c) + (width - len(label)) // 2, label)

    for src, dst in q.arrows:
        if src not in layout or dst not in layout:
            continue
        (r1, c1), (r2, c2) = layout[src], layout[dst]
        if r1 == r2 and abs(c1 - c2) == 1:
            put(label_lines[r1], x(min(c1, c2)) + width + 1, "->" if c2 > c1 else "<-")
        elif abs(r1 - r2) == 1 and abs(c1 - c2) == 1:
            upper = min(r1, r2)
            left = min(c1, c2)
            upper_is_left = (r1, c1) == (upper, left) or (r2, c2) == (upper, left)
            put(connector_lines[upper], x(left) + width + 1, "\\" if upper_is_left else "/")

    for src, dst in q.translation:
        if src not in layout or dst not in layout:
            continue
        (r1, c1), (r2, c2) = layout[src], layout[dst]
        if r1 != r2 or abs(c1 - c2) != 2:
            continue
        middle = (r1, (c1 + c2) // 2)
        if middle in cells:
            continue
        marker = "..>" if c2 > c1 else "<.."
        put(label_lines[r1], x(middle[1]) + (width - len(marker)) // 2, marker)

    out: List[str] = []
    for r in range(rmin, rmax + 1):
        out.append("".join(label_lines[r]).rstrip())
        if r < rmax:
            out.append("".join(connector_lines[r]).rstrip())
    return "\n".join(out) + "\n"
