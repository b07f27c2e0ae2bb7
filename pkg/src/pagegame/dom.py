"""Markup parsing into a node forest and game construction from device profiles.

The parser accepts a deliberately tiny grammar: nesting tags, at most one
``name="value"`` attribute per tag, and plain text. Comments, doctypes,
self-closing tags, character entities, and multi-attribute tags are
rejected as unsupported rather than guessed at.

Node counting convention (fixed so a document maps to a predictable graph):
the document root is a node, each element is a node, an attribute is a
child node of its element, and each non-blank text run is a child node.
A parsed document therefore has exactly nodes-minus-one edges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

from .errors import (
    EngineError,
    MalformedMarkup,
    UnreachableComponent,
    UnsupportedConstruct,
)
from .game import Edge, GameGraph, GameInstance, Node, Player, build_graph

_TAG_NAME = re.compile(r"[a-zA-Z][a-zA-Z0-9-]*")
_ATTRIBUTE = re.compile(r'([a-zA-Z][a-zA-Z0-9-]*)\s*=\s*"([^"]*)"')
_ENTITY = re.compile(r"&[a-zA-Z][a-zA-Z0-9]*;|&#[0-9]+;")

DEFAULT_BASE_COSTS = {
    "document-root": 0.0,
    "element": 1.0,
    "text": 0.5,
    "attribute": 0.25,
    "abstract": 0.0,
}

DEVICE_CLASS_FACTORS = {"pc": 1.0, "tablet": 1.2, "mobile": 1.5}

DEVICE_CLASSES = frozenset(DEVICE_CLASS_FACTORS)
ORIENTATIONS = frozenset({"landscape", "portrait"})


@dataclass(frozen=True)
class DomNode:
    """One node of the parsed document tree."""

    node_id: str
    kind: str          # document-root | element | attribute | text
    label: str         # tag name, attribute name, "#text", or "#document"
    value: str = ""    # attribute value or text content
    children: tuple["DomNode", ...] = ()


@dataclass(frozen=True)
class DomForest:
    """A parsed document plus, once devices are attached, their tree roots."""

    document_root: DomNode
    nodes: dict[str, DomNode]
    device_roots: dict[str, str] = field(default_factory=dict)

    def edges(self) -> Iterator[tuple[str, str]]:
        """Parent-child pairs in document order."""

        def walk(node: DomNode) -> Iterator[tuple[str, str]]:
            for child in node.children:
                yield node.node_id, child.node_id
                yield from walk(child)

        return walk(self.document_root)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())


@dataclass(frozen=True)
class DeviceProfile:
    """A browsing device plus the components it must route into its page."""

    device_id: str
    device_class: str
    cost_factor: float
    required_components: tuple[str, ...]
    orientation: str = "landscape"

    def __post_init__(self):
        object.__setattr__(self, "required_components", tuple(self.required_components))
        if self.device_class not in DEVICE_CLASSES:
            raise EngineError(f"unknown device class {self.device_class!r}")
        if self.orientation not in ORIENTATIONS:
            raise EngineError(f"unknown orientation {self.orientation!r}")
        if not (self.cost_factor > 0.0):
            raise EngineError(f"cost_factor must be > 0, got {self.cost_factor}")


@dataclass(frozen=True)
class CostModel:
    """Base cost per node kind; an edge inherits its child node's base cost."""

    base_costs: dict[str, float]

    def base(self, kind: str) -> float:
        try:
            value = self.base_costs[kind]
        except KeyError:
            raise EngineError(f"cost model has no base cost for kind {kind!r}") from None
        if not (value >= 0.0):
            raise EngineError(f"base cost for kind {kind!r} is negative")
        return value


def default_cost_model() -> CostModel:
    return CostModel(base_costs=dict(DEFAULT_BASE_COSTS))


class _Builder:
    """Mutable tree node used only while parsing."""

    __slots__ = ("kind", "label", "value", "children")

    def __init__(self, kind: str, label: str, value: str = ""):
        self.kind = kind
        self.label = label
        self.value = value
        self.children: list[_Builder] = []


def _freeze(builder: _Builder) -> tuple[DomNode, dict[str, DomNode]]:
    """Assign document-order ids and freeze the tree bottom-up."""
    nodes: dict[str, DomNode] = {}
    counter = 0

    def visit(b: _Builder) -> DomNode:
        nonlocal counter
        prefix = {"attribute": "@", "text": "", "element": "", "document-root": ""}[b.kind]
        node_id = f"{counter}:{prefix}{b.label}"
        counter += 1
        children = tuple(visit(c) for c in b.children)
        node = DomNode(node_id, b.kind, b.label, b.value, children)
        nodes[node_id] = node
        return node

    root = visit(builder)
    ordered = {nid: nodes[nid] for nid in sorted(nodes, key=lambda n: int(n.split(":")[0]))}
    return root, ordered


def _parse_open_tag(token: str, position: int) -> tuple[str, tuple[str, str] | None]:
    match = _TAG_NAME.match(token)
    if match is None:
        raise MalformedMarkup(position, f"invalid tag {token!r}")
    tag = match.group(0)
    rest = token[match.end():].strip()
    if not rest:
        return tag, None
    attr = _ATTRIBUTE.fullmatch(rest)
    if attr is not None:
        return tag, (attr.group(1), attr.group(2))
    if _ATTRIBUTE.match(rest):
        # A well-formed first attribute followed by more content means the
        # tag carries several attributes, which the grammar does not cover.
        raise UnsupportedConstruct(token)
    raise MalformedMarkup(position, f"cannot parse attributes in {token!r}")


def parse_document(text: str) -> DomForest:
    """Parse markup into a document tree rooted at a document-root node."""
    root = _Builder("document-root", "#document")
    stack: list[_Builder] = []
    i = 0
    length = len(text)
    while i < length:
        if text[i] == "<":
            end = text.find(">", i + 1)
            if end == -1:
                raise MalformedMarkup(i, "tag never closed by '>'")
            token = text[i + 1 : end]
            if token.startswith(("!", "?")):
                raise UnsupportedConstruct(f"<{token}>")
            if token.endswith("/") or not token.strip():
                raise UnsupportedConstruct(f"<{token}>")
            if token.startswith("/"):
                name = token[1:].strip()
                if not stack:
                    raise MalformedMarkup(i, f"closing </{name}> with nothing open")
                if stack[-1].label != name:
                    raise MalformedMarkup(
                        i, f"closing </{name}> but <{stack[-1].label}> is open"
                    )
                finished = stack.pop()
                (stack[-1] if stack else root).children.append(finished)
            else:
                tag, attribute = _parse_open_tag(token, i)
                element = _Builder("element", tag)
                if attribute is not None:
                    element.children.append(
                        _Builder("attribute", attribute[0], attribute[1])
                    )
                stack.append(element)
            i = end + 1
        else:
            nxt = text.find("<", i)
            if nxt == -1:
                nxt = length
            run = text[i:nxt]
            entity = _ENTITY.search(run)
            if entity is not None:
                raise UnsupportedConstruct(entity.group(0))
            content = run.strip()
            if content:
                (stack[-1] if stack else root).children.append(
                    _Builder("text", "#text", content)
                )
            i = nxt
    if stack:
        raise MalformedMarkup(length, f"<{stack[-1].label}> never closed")
    document_root, nodes = _freeze(root)
    return DomForest(document_root=document_root, nodes=nodes)


def serialize_document(forest: DomForest) -> str:
    """Debug form of the forest; re-parsing it yields an isomorphic forest."""

    def render(node: DomNode) -> str:
        if node.kind == "text":
            return node.value
        if node.kind == "attribute":
            return ""
        attrs = "".join(
            f' {c.label}="{c.value}"' for c in node.children if c.kind == "attribute"
        )
        inner = "".join(render(c) for c in node.children if c.kind != "attribute")
        return f"<{node.label}{attrs}>{inner}</{node.label}>"

    return "".join(render(c) for c in forest.document_root.children)


def classify_levels(forest: DomForest) -> dict[str, int]:
    """Depth of every node below the document root (root itself is 0)."""
    depths: dict[str, int] = {}

    def walk(node: DomNode, depth: int) -> None:
        depths[node.node_id] = depth
        for child in node.children:
            walk(child, depth + 1)

    walk(forest.document_root, 0)
    return depths


def forest_to_graph(forest: DomForest) -> GameGraph:
    """Structure-only graph of the forest (zero edge costs)."""
    nodes = [Node(n.node_id, n.kind) for n in forest.nodes.values()]
    edges = [Edge(f"{src}>{dst}", src, dst, 0.0) for src, dst in forest.edges()]
    return build_graph(nodes, edges)


def device_root_id(device_id: str) -> str:
    return f"dev:{device_id}"


def attach_devices(forest: DomForest, devices: Sequence[DeviceProfile]) -> DomForest:
    """Record each device's tree root on the forest."""
    return replace(
        forest,
        device_roots={d.device_id: device_root_id(d.device_id) for d in devices},
    )


def build_game(
    forest: DomForest,
    devices: Sequence[DeviceProfile],
    cost_model: CostModel | None = None,
    delta: float = 0.0,
) -> GameInstance:
    """Merge the forest and the devices into one game.

    Each device gets an abstract tree root hanging off the document root and
    wired to every top-level document node; component edges below that are
    shared by all devices that can reach them and are priced with the
    minimum owning cost factor, while a device's private entry edges use its
    own factor. Players are (device, required component) pairs routing from
    the device root to the component.
    """
    model = cost_model or default_cost_model()
    devices = tuple(devices)
    seen_devices: set[str] = set()
    for device in devices:
        if device.device_id in seen_devices:
            raise EngineError(f"duplicate device id {device.device_id!r}")
        seen_devices.add(device.device_id)

    doc_id = forest.document_root.node_id
    for device in devices:
        for component in device.required_components:
            if component not in forest.nodes or component == doc_id:
                raise UnreachableComponent(device.device_id, component)

    nodes = [Node(n.node_id, n.kind) for n in forest.nodes.values()]
    nodes.extend(Node(device_root_id(d.device_id), "abstract") for d in devices)

    top_level = [c.node_id for c in forest.document_root.children]
    structure: list[tuple[str, str]] = []
    for device in devices:
        dev = device_root_id(device.device_id)
        structure.append((doc_id, dev))
        structure.extend((dev, top) for top in top_level)
    inner_edges = [(src, dst) for src, dst in forest.edges() if src != doc_id]
    structure.extend(inner_edges)

    adjacency: dict[str, list[str]] = {}
    for src, dst in structure:
        adjacency.setdefault(src, []).append(dst)

    def reach(start: str) -> set[str]:
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adjacency.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    reachable = {d.device_id: reach(device_root_id(d.device_id)) for d in devices}

    def child_kind(node_id: str) -> str:
        return forest.nodes[node_id].kind

    edges: list[Edge] = []
    for device in devices:
        dev = device_root_id(device.device_id)
        edges.append(Edge(f"{doc_id}>{dev}", doc_id, dev, model.base("abstract") * device.cost_factor))
        for top in top_level:
            edges.append(
                Edge(f"{dev}>{top}", dev, top, model.base(child_kind(top)) * device.cost_factor)
            )
    for src, dst in inner_edges:
        owners = [d.cost_factor for d in devices if src in reachable[d.device_id]]
        factor = min(owners) if owners else 1.0
        edges.append(Edge(f"{src}>{dst}", src, dst, model.base(child_kind(dst)) * factor))

    players: list[Player] = []
    next_id = 1
    for device in devices:
        dev = device_root_id(device.device_id)
        for component in device.required_components:
            if component not in reachable[device.device_id]:
                raise UnreachableComponent(device.device_id, component)
            players.append(
                Player(next_id, dev, component, label=f"{device.device_id}:{component}")
            )
            next_id += 1

    graph = build_graph(nodes, edges)
    return GameInstance(graph=graph, players=tuple(players), delta=delta)
