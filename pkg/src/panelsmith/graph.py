"""Typed attribute-node tree for a whole comic sequence.

A sequence is a tree rooted at a single Sequence node whose direct Panel
children define reading order. Every other element (characters, scenes,
symbols, free-form custom nodes) hangs below a panel. Nodes carry a typed
property bag: scalars, strings, or number pairs.

The tree serializes to a canonical JSON "scene document" with stable key
order, so identical sequences always produce byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import (
    CycleRejected,
    DuplicateId,
    InvalidValue,
    MalformedDocument,
    UnknownNode,
    UnknownParent,
)

PropertyValue = Any  # int | float | bool | str | tuple[float, float]

BUILTIN_KINDS = (
    "Sequence",
    "Panel",
    "Character",
    "Scene",
    "Action",
    "Transition",
    "Symbol",
    "VisualRef",
)

GRAMMAR_PHASES = ("E", "I", "L", "P", "R")


@dataclass(frozen=True)
class AttributeType:
    """Node type: one of the built-in kinds, or a named custom type."""

    kind: str
    custom_name: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "Custom":
            if not self.custom_name:
                raise InvalidValue("custom type name must be non-empty")
        elif self.kind not in BUILTIN_KINDS:
            raise InvalidValue(f"unknown attribute kind {self.kind!r}")
        elif self.custom_name is not None:
            raise InvalidValue("built-in kinds take no custom name")

    @classmethod
    def custom(cls, name: str) -> "AttributeType":
        return cls("Custom", name)

    def to_string(self) -> str:
        if self.kind == "Custom":
            return f"custom:{self.custom_name}"
        return self.kind

    @classmethod
    def from_string(cls, text: str) -> "AttributeType":
        if text.startswith("custom:"):
            return cls.custom(text[len("custom:"):])
        return cls(text)


SEQUENCE = AttributeType("Sequence")
PANEL = AttributeType("Panel")
CHARACTER = AttributeType("Character")
SCENE = AttributeType("Scene")
ACTION = AttributeType("Action")
TRANSITION = AttributeType("Transition")
SYMBOL = AttributeType("Symbol")
VISUAL_REF = AttributeType("VisualRef")
OBJECT = AttributeType.custom("Object")


def _require_pair(value: Any, low: float, high: float, name: str) -> tuple[float, float]:
    if (
        not isinstance(value, (tuple, list))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise InvalidValue(f"{name} must be a pair of numbers, got {value!r}")
    x, y = float(value[0]), float(value[1])
    if not (low <= x <= high and low <= y <= high):
        raise InvalidValue(f"{name} {value!r} outside [{low}, {high}]^2")
    return (x, y)


def _require_number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidValue(f"{name} must be a number, got {value!r}")
    return value


def _require_bool(value: Any, name: str) -> bool:
    if not isinstance(value, bool):
        raise InvalidValue(f"{name} must be a boolean, got {value!r}")
    return value


def _require_str(value: Any, name: str) -> str:
    if not isinstance(value, str):
        raise InvalidValue(f"{name} must be a string, got {value!r}")
    return value


def _validate_position(value: Any) -> tuple[float, float]:
    return _require_pair(value, 0.0, 1.0, "position")


def _validate_offset(value: Any) -> tuple[float, float]:
    return _require_pair(value, -1.0, 1.0, "offset")


def _validate_scale(value: Any) -> float:
    num = _require_number(value, "scale")
    if num <= 0:
        raise InvalidValue(f"scale must be positive, got {value!r}")
    return num


def _validate_phase(value: Any) -> str:
    text = _require_str(value, "grammar_phase")
    if text not in GRAMMAR_PHASES:
        raise InvalidValue(f"grammar_phase must be one of {GRAMMAR_PHASES}, got {text!r}")
    return text


def _validate_zoom(value: Any) -> float:
    num = _require_number(value, "viewport_zoom")
    if num < 1:
        raise InvalidValue(f"viewport_zoom must be >= 1, got {value!r}")
    return num


def _validate_axis(name: str):
    def check(value: Any) -> float:
        num = _require_number(value, name)
        if not -1.0 <= num <= 1.0:
            raise InvalidValue(f"{name} must lie in [-1, 1], got {value!r}")
        return num

    return check


# Known property names and their semantic validators. Unknown names are
# allowed but must still be scalar / string / pair values.
PROPERTY_VALIDATORS = {
    "position": _validate_position,
    "offset": _validate_offset,
    "scale": _validate_scale,
    "visible": lambda v: _require_bool(v, "visible"),
    "flip": lambda v: _require_bool(v, "flip"),
    "grammar_phase": _validate_phase,
    "tension": lambda v: _require_number(v, "tension"),
    "action": lambda v: _require_str(v, "action"),
    "identity": lambda v: _require_str(v, "identity"),
    "visual": lambda v: _require_str(v, "visual"),
    "transition_in": lambda v: _require_str(v, "transition_in"),
    "viewport_zoom": _validate_zoom,
    "viewport_dx": _validate_axis("viewport_dx"),
    "viewport_dy": _validate_axis("viewport_dy"),
}


def check_property(name: str, value: PropertyValue) -> PropertyValue:
    """Validate one property value and return it in canonical form."""
    validator = PROPERTY_VALIDATORS.get(name)
    if validator is not None:
        return validator(value)
    if isinstance(value, (tuple, list)):
        if len(value) != 2 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise InvalidValue(f"property {name!r}: only number pairs allowed, got {value!r}")
        return (float(value[0]), float(value[1]))
    if isinstance(value, (bool, int, float, str)):
        return value
    raise InvalidValue(f"property {name!r}: unsupported value {value!r}")


@dataclass
class AttributeNode:
    """One node of the sequence tree."""

    id: int
    type: AttributeType
    name: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)
    children: list[int] = field(default_factory=list)
    parent: int | None = None

    def get(self, prop: str, default: PropertyValue = None) -> PropertyValue:
        return self.properties.get(prop, default)


class SequenceModel:
    """The full sequence tree plus its revision counter and RNG seed."""

    def __init__(self, seed: int = 0):
        if seed < 0:
            raise InvalidValue("seed must be a non-negative integer")
        self.seed = int(seed)
        self.revision = 0
        self.nodes: dict[int, AttributeNode] = {}
        self.structure: dict | None = None
        self._next_id = 0
        root = AttributeNode(self._alloc_id(), SEQUENCE, "sequence")
        self.nodes[root.id] = root
        self.root_id = root.id

    # -- basic access --------------------------------------------------------

    @property
    def root(self) -> AttributeNode:
        return self.nodes[self.root_id]

    @property
    def length(self) -> int:
        return len(self.panel_ids())

    def node(self, node_id: int) -> AttributeNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node with id {node_id}") from None

    def panel_ids(self) -> list[int]:
        return [cid for cid in self.root.children if self.nodes[cid].type == PANEL]

    def panels(self) -> list[AttributeNode]:
        return [self.nodes[cid] for cid in self.panel_ids()]

    def children_of(self, node_id: int, type_: AttributeType | None = None) -> list[AttributeNode]:
        kids = [self.nodes[cid] for cid in self.node(node_id).children]
        if type_ is not None:
            kids = [k for k in kids if k.type == type_]
        return kids

    def walk(self, start: int | None = None) -> Iterator[AttributeNode]:
        """Depth-first traversal from ``start`` (default: root)."""
        stack = [self.root_id if start is None else start]
        while stack:
            node = self.node(stack.pop())
            yield node
            stack.extend(reversed(node.children))

    def _alloc_id(self) -> int:
        nid = self._next_id
        self._next_id += 1
        return nid

    def _ancestors(self, node_id: int) -> Iterator[int]:
        current = self.nodes.get(node_id)
        while current is not None:
            yield current.id
            current = self.nodes.get(current.parent) if current.parent is not None else None

    # -- mutation ------------------------------------------------------------

    def new_node(
        self,
        type_: AttributeType,
        name: str,
        properties: dict[str, PropertyValue] | None = None,
    ) -> AttributeNode:
        """Allocate a detached node with a fresh id (not yet in the tree)."""
        props = {}
        for key, value in (properties or {}).items():
            props[key] = check_property(key, value)
        return AttributeNode(self._alloc_id(), type_, name, props)

    def add_attribute(self, parent_id: int, node: AttributeNode) -> int:
        """Attach ``node`` under ``parent_id`` and return its id."""
        if parent_id not in self.nodes:
            raise UnknownParent(f"no parent with id {parent_id}")
        if node.id in self._ancestors(parent_id):
            raise CycleRejected(f"node {node.id} is an ancestor of parent {parent_id}")
        if node.id in self.nodes:
            raise DuplicateId(f"node id {node.id} already in the tree")
        node.parent = parent_id
        self.nodes[node.id] = node
        self.nodes[parent_id].children.append(node.id)
        self._next_id = max(self._next_id, node.id + 1)
        return node.id

    def add_child(
        self,
        parent_id: int,
        type_: AttributeType,
        name: str,
        properties: dict[str, PropertyValue] | None = None,
    ) -> AttributeNode:
        """Convenience: allocate and attach in one step."""
        node = self.new_node(type_, name, properties)
        self.add_attribute(parent_id, node)
        return node

    def set_property(self, node_id: int, prop: str, value: PropertyValue) -> AttributeNode:
        """Set one property without touching the revision counter.

        Pipeline layers use this; interactive edits go through
        :meth:`update_node`, which also bumps the revision.
        """
        node = self.node(node_id)
        node.properties[prop] = check_property(prop, value)
        return node

    def update_node(self, node_id: int, prop: str, value: PropertyValue) -> AttributeNode:
        node = self.set_property(node_id, prop, value)
        self.revision += 1
        return node

    def remove_node(self, node_id: int) -> None:
        """Detach a subtree. The root cannot be removed."""
        if node_id == self.root_id:
            raise InvalidValue("cannot remove the sequence root")
        node = self.node(node_id)
        for descendant in list(self.walk(node_id)):
            del self.nodes[descendant.id]
        if node.parent is not None:
            self.nodes[node.parent].children.remove(node_id)

    def append_panel(self) -> AttributeNode:
        return self.add_child(self.root_id, PANEL, f"panel_{self.length}")

    # -- serialization -------------------------------------------------------

    def to_document(self) -> dict:
        """Canonical dict form (the scene document)."""
        nodes = []
        for nid in sorted(self.nodes):
            node = self.nodes[nid]
            props = {}
            for key in sorted(node.properties):
                value = node.properties[key]
                props[key] = list(value) if isinstance(value, tuple) else value
            nodes.append(
                {
                    "children": list(node.children),
                    "id": node.id,
                    "name": node.name,
                    "parent": node.parent,
                    "properties": props,
                    "type": node.type.to_string(),
                }
            )
        doc: dict[str, Any] = {
            "nodes": nodes,
            "revision": self.revision,
            "root": self.root_id,
            "seed": self.seed,
        }
        if self.structure is not None:
            doc["structure"] = self.structure
        transitions = self._transition_entries()
        if transitions is not None:
            doc["transitions"] = transitions
        return doc

    def _transition_entries(self) -> list[str | None] | None:
        panels = self.panels()
        if len(panels) < 2:
            return None
        entries = [p.get("transition_in") for p in panels[1:]]
        if all(e is None for e in entries):
            return None
        return entries

    def restore(self, document: dict) -> None:
        """Replace this model's entire state with a parsed document."""
        other = parse_document(document)
        self.seed = other.seed
        self.revision = other.revision
        self.nodes = other.nodes
        self.root_id = other.root_id
        self.structure = other.structure
        self._next_id = other._next_id


def create_sequence(length: int, seed: int) -> SequenceModel:
    """A root sequence with ``length`` empty panels in reading order."""
    if length < 0:
        raise InvalidValue("length must be non-negative")
    model = SequenceModel(seed=seed)
    for _ in range(length):
        model.append_panel()
    return model


def pad_or_trim(model: SequenceModel, target_len: int) -> SequenceModel:
    """Grow with empty panels or drop panels from the end until the count fits."""
    if target_len < 0:
        raise InvalidValue("target length must be non-negative")
    while model.length < target_len:
        model.append_panel()
    panel_ids = model.panel_ids()
    for pid in panel_ids[target_len:]:
        model.remove_node(pid)
    return model


def to_document(model: SequenceModel) -> dict:
    return model.to_document()


def document_json(document: dict) -> str:
    """Canonical JSON text: sorted keys, compact separators."""
    return json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _decode_property(value: Any) -> PropertyValue:
    if isinstance(value, list):
        if len(value) != 2:
            raise MalformedDocument(f"property pair of wrong length: {value!r}")
        return (float(value[0]), float(value[1]))
    return value


def parse_document(document: dict) -> SequenceModel:
    """Rebuild a model from a scene document (inverse of ``to_document``)."""
    try:
        root_id = document["root"]
        raw_nodes = document["nodes"]
        revision = document["revision"]
        seed = document["seed"]
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"missing document field: {exc}") from None

    model = SequenceModel.__new__(SequenceModel)
    model.seed = int(seed)
    model.revision = int(revision)
    model.structure = document.get("structure")
    model.nodes = {}
    model.root_id = root_id
    for raw in raw_nodes:
        try:
            node = AttributeNode(
                id=int(raw["id"]),
                type=AttributeType.from_string(raw["type"]),
                name=raw["name"],
                properties={k: _decode_property(v) for k, v in raw["properties"].items()},
                children=[int(c) for c in raw["children"]],
                parent=raw["parent"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDocument(f"bad node record: {exc}") from None
        if node.id in model.nodes:
            raise MalformedDocument(f"duplicate node id {node.id}")
        model.nodes[node.id] = node
    if root_id not in model.nodes:
        raise MalformedDocument(f"root id {root_id} not among nodes")
    model._next_id = max(model.nodes) + 1
    validate_tree(model)
    return model


def validate_tree(model: SequenceModel) -> None:
    """Check the structural invariants; raise MalformedDocument on violation.

    Every stored node must be reachable from the root exactly once, parent
    and children links must agree, and panels must sit directly under the
    root. Property bounds are re-checked as well.
    """
    root = model.nodes.get(model.root_id)
    if root is None or root.type != SEQUENCE:
        raise MalformedDocument("root must be a Sequence node")
    if root.parent is not None:
        raise MalformedDocument("root must not have a parent")

    seen: set[int] = set()
    stack = [model.root_id]
    while stack:
        nid = stack.pop()
        if nid in seen:
            raise MalformedDocument(f"node {nid} reached twice (cycle or shared child)")
        seen.add(nid)
        node = model.nodes.get(nid)
        if node is None:
            raise MalformedDocument(f"child reference to missing node {nid}")
        for cid in node.children:
            child = model.nodes.get(cid)
            if child is None:
                raise MalformedDocument(f"node {nid} references missing child {cid}")
            if child.parent != nid:
                raise MalformedDocument(f"node {cid} parent link disagrees with {nid}")
            stack.append(cid)
    if seen != set(model.nodes):
        orphaned = sorted(set(model.nodes) - seen)
        raise MalformedDocument(f"unreachable nodes: {orphaned}")

    for node in model.nodes.values():
        if node.type == PANEL and node.parent != model.root_id:
            raise MalformedDocument(f"panel {node.id} is not a direct child of the root")
        for key, value in node.properties.items():
            try:
                check_property(key, value)
            except InvalidValue as exc:
                raise MalformedDocument(f"node {node.id}: {exc}") from None
