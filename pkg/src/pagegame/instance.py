"""Versioned JSON schema for game instance files.

An instance file carries either an explicit graph (``nodes`` + ``edges`` +
``players``) or an embedded document with device profiles (``document`` +
``devices`` and an optional ``cost_model``), never both. ``delta`` is
optional and defaults to 0. Schema violations raise
:class:`MalformedInstance`; semantic problems (negative costs, cycles,
missing paths, negative delta) surface as the engine's validation errors.
"""

from __future__ import annotations

import json
from typing import Any

from .dom import (
    CostModel,
    DEVICE_CLASS_FACTORS,
    DeviceProfile,
    attach_devices,
    build_game,
    default_cost_model,
    parse_document,
)
from .errors import MalformedInstance
from .game import Edge, GameInstance, Node, Player, build_graph

FORMAT_VERSION = 1

_EXPLICIT_KEYS = ("nodes", "edges", "players")
_DOCUMENT_KEYS = ("document", "devices")


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise MalformedInstance(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise MalformedInstance(f"{where}: {key!r} must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedInstance(f"{where}: {key!r} must be an integer")
        return value
    if not isinstance(value, kind):
        raise MalformedInstance(f"{where}: {key!r} has wrong type")
    return value


def _optional(obj: dict, key: str, kind, where: str, default):
    if key not in obj:
        return default
    return _require(obj, key, kind, where)


def parse_instance(obj: Any) -> GameInstance:
    """Build a validated game from a decoded instance document."""
    if not isinstance(obj, dict):
        raise MalformedInstance("instance file must hold a JSON object")
    version = _require(obj, "format_version", int, "instance")
    if version != FORMAT_VERSION:
        raise MalformedInstance(f"unsupported format_version {version}")
    delta = _optional(obj, "delta", float, "instance", 0.0)

    explicit = any(key in obj for key in _EXPLICIT_KEYS)
    document = any(key in obj for key in _DOCUMENT_KEYS)
    if explicit and document:
        raise MalformedInstance("instance mixes explicit graph and document forms")
    if not explicit and not document:
        raise MalformedInstance("instance has neither graph nor document sections")

    if explicit:
        return _parse_explicit(obj, delta)
    return _parse_document_form(obj, delta)


def _parse_explicit(obj: dict, delta: float) -> GameInstance:
    for key in _EXPLICIT_KEYS:
        if key not in obj:
            raise MalformedInstance(f"explicit instance is missing {key!r}")
    if "cost_model" in obj:
        raise MalformedInstance("cost_model is only valid in the document form")

    nodes = []
    for i, rec in enumerate(_require(obj, "nodes", list, "instance")):
        if not isinstance(rec, dict):
            raise MalformedInstance(f"nodes[{i}] must be an object")
        nodes.append(
            Node(
                _require(rec, "id", str, f"nodes[{i}]"),
                _require(rec, "kind", str, f"nodes[{i}]"),
            )
        )
    edges = []
    for i, rec in enumerate(_require(obj, "edges", list, "instance")):
        if not isinstance(rec, dict):
            raise MalformedInstance(f"edges[{i}] must be an object")
        edges.append(
            Edge(
                _require(rec, "id", str, f"edges[{i}]"),
                _require(rec, "src", str, f"edges[{i}]"),
                _require(rec, "dst", str, f"edges[{i}]"),
                _require(rec, "cost", float, f"edges[{i}]"),
            )
        )
    players = []
    for i, rec in enumerate(_require(obj, "players", list, "instance")):
        if not isinstance(rec, dict):
            raise MalformedInstance(f"players[{i}] must be an object")
        players.append(
            Player(
                _require(rec, "id", int, f"players[{i}]"),
                _require(rec, "root", str, f"players[{i}]"),
                _require(rec, "leaf", str, f"players[{i}]"),
                _optional(rec, "label", str, f"players[{i}]", ""),
            )
        )
    graph = build_graph(nodes, edges)
    return GameInstance(graph=graph, players=tuple(players), delta=delta)


def _parse_document_form(obj: dict, delta: float) -> GameInstance:
    for key in _DOCUMENT_KEYS:
        if key not in obj:
            raise MalformedInstance(f"document instance is missing {key!r}")
    text = _require(obj, "document", str, "instance")
    devices = []
    for i, rec in enumerate(_require(obj, "devices", list, "instance")):
        if not isinstance(rec, dict):
            raise MalformedInstance(f"devices[{i}] must be an object")
        device_class = _require(rec, "class", str, f"devices[{i}]")
        factor = _optional(
            rec, "cost_factor", float, f"devices[{i}]",
            DEVICE_CLASS_FACTORS.get(device_class, 0.0),
        )
        components = _require(rec, "required_components", list, f"devices[{i}]")
        if not all(isinstance(c, str) for c in components):
            raise MalformedInstance(f"devices[{i}]: required_components must be strings")
        devices.append(
            DeviceProfile(
                device_id=_require(rec, "id", str, f"devices[{i}]"),
                device_class=device_class,
                cost_factor=factor,
                required_components=tuple(components),
                orientation=_optional(
                    rec, "orientation", str, f"devices[{i}]", "landscape"
                ),
            )
        )

    model = default_cost_model()
    if "cost_model" in obj:
        section = _require(obj, "cost_model", dict, "instance")
        overrides = _require(section, "base_costs", dict, "cost_model")
        base = dict(model.base_costs)
        for kind, value in overrides.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise MalformedInstance(f"cost_model: base cost for {kind!r} must be a number")
            base[str(kind)] = float(value)
        model = CostModel(base_costs=base)

    forest = attach_devices(parse_document(text), devices)
    return build_game(forest, devices, cost_model=model, delta=delta)


def instance_from_text(text: str) -> GameInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInstance(f"not valid JSON: {exc}") from None
    return parse_instance(obj)


def load_instance(path: str) -> GameInstance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise MalformedInstance(f"cannot read instance file: {exc}") from None
    return instance_from_text(text)
