"""Narrative grammar phases and the tension curve derived from them.

Panels are tagged with one of five narrative categories (Establisher,
Initial, Prolongation, Peak, Release). Categories group into phases with
the template (E) I (L) P (R): Initial and Peak required, the rest optional.
Richer structures come from center-embedding: a Peak or Initial leaf is
replaced by a whole sub-phase occupying its slot.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum

from . import graph
from .errors import InvalidValue


class Category(str, Enum):
    ESTABLISHER = "E"
    INITIAL = "I"
    PROLONGATION = "L"
    PEAK = "P"
    RELEASE = "R"


# Highest first: Peak, Initial, Release, Establisher, Prolongation.
IMPORTANCE = {
    Category.PEAK: 4,
    Category.INITIAL: 3,
    Category.RELEASE: 2,
    Category.ESTABLISHER: 1,
    Category.PROLONGATION: 0,
}

TEMPLATE_ORDER = (
    Category.ESTABLISHER,
    Category.INITIAL,
    Category.PROLONGATION,
    Category.PEAK,
    Category.RELEASE,
)
REQUIRED = (Category.INITIAL, Category.PEAK)

# Per-category tension points. The Peak value doubles as the scale used to
# translate tension deltas into arousal units elsewhere.
PHASE_TENSION = {
    Category.ESTABLISHER: 0,
    Category.INITIAL: 2,
    Category.PROLONGATION: 4,
    Category.PEAK: 6,
    Category.RELEASE: 2,
}
TENSION_MAX = PHASE_TENSION[Category.PEAK]

# Only the two most important categories may be replaced by a sub-phase.
EXPANDABLE = (Category.PEAK, Category.INITIAL)


@dataclass
class Leaf:
    category: Category


@dataclass
class Phase:
    """An ordered phase; ``slot`` is the category this phase replaced.

    The root phase has no slot. For template checking, an embedded phase
    counts as the category named by its slot.
    """

    children: list["PhaseNode"] = field(default_factory=list)
    slot: Category | None = None


PhaseNode = Leaf | Phase


def basic_phase(
    include_e: bool = True,
    include_l: bool = True,
    include_r: bool = True,
    slot: Category | None = None,
) -> Phase:
    """A single flat phase with the selected optional categories."""
    included = {
        Category.ESTABLISHER: include_e,
        Category.INITIAL: True,
        Category.PROLONGATION: include_l,
        Category.PEAK: True,
        Category.RELEASE: include_r,
    }
    children: list[PhaseNode] = [Leaf(cat) for cat in TEMPLATE_ORDER if included[cat]]
    return Phase(children=children, slot=slot)


def flatten(node: PhaseNode) -> list[Category]:
    """In-order leaf categories."""
    if isinstance(node, Leaf):
        return [node.category]
    out: list[Category] = []
    for child in node.children:
        out.extend(flatten(child))
    return out


def slot_category(node: PhaseNode) -> Category | None:
    return node.category if isinstance(node, Leaf) else node.slot


def validate_phase_tree(node: PhaseNode, is_root: bool = True) -> None:
    """Recursive-descent check against the (E) I (L) P (R) template.

    Embedded phases are checked in the slot of the category they replaced,
    then validated recursively themselves.
    """
    if isinstance(node, Leaf):
        if is_root:
            raise InvalidValue("a phase tree must be rooted at a Phase")
        return
    if is_root and node.slot is not None:
        raise InvalidValue("the root phase must not occupy a slot")
    if not is_root and node.slot is None:
        raise InvalidValue("an embedded phase must record the slot it replaced")

    cats = []
    for child in node.children:
        cat = slot_category(child)
        if cat is None:
            raise InvalidValue("embedded phase without a slot inside a phase")
        cats.append(cat)

    positions = [TEMPLATE_ORDER.index(c) for c in cats]
    if len(set(positions)) != len(positions):
        raise InvalidValue(f"category repeated within one phase: {[c.value for c in cats]}")
    if positions != sorted(positions):
        raise InvalidValue(f"categories out of template order: {[c.value for c in cats]}")
    for required in REQUIRED:
        if required not in cats:
            raise InvalidValue(f"phase is missing required category {required.value}")

    for child in node.children:
        validate_phase_tree(child, is_root=False)


def is_valid_phase_tree(node: PhaseNode) -> bool:
    try:
        validate_phase_tree(node)
    except InvalidValue:
        return False
    return True


def _copy(node: PhaseNode) -> PhaseNode:
    if isinstance(node, Leaf):
        return Leaf(node.category)
    return Phase(children=[_copy(c) for c in node.children], slot=node.slot)


def expand_center_embedded(
    tree: Phase,
    rng: random.Random,
    p_expand: float = 0.3,
    max_depth: int = 2,
) -> Phase:
    """Randomly replace Peak/Initial leaves with embedded sub-phases.

    A leaf at embedding level d (< max_depth) is expanded independently with
    probability ``p_expand``; new sub-phases include each optional category
    with probability 0.5 and are then eligible for further expansion one
    level deeper. Draws are consumed in depth-first order, so the result is
    a pure function of (tree, rng seed, p_expand, max_depth).
    """
    if not 0.0 <= p_expand <= 1.0:
        raise InvalidValue("p_expand must lie in [0, 1]")
    if max_depth < 0:
        raise InvalidValue("max_depth must be non-negative")

    result = _copy(tree)

    def visit(phase: Phase, level: int) -> None:
        for i, child in enumerate(phase.children):
            if isinstance(child, Phase):
                visit(child, level + 1)
                continue
            if child.category in EXPANDABLE and level < max_depth:
                expand = rng.random() < p_expand
                if expand:
                    sub = basic_phase(
                        include_e=rng.random() < 0.5,
                        include_l=rng.random() < 0.5,
                        include_r=rng.random() < 0.5,
                        slot=child.category,
                    )
                    phase.children[i] = sub
                    visit(sub, level + 1)

    assert isinstance(result, Phase)
    visit(result, 0)
    return result


@dataclass
class NarrativeStructure:
    """A phase tree together with its flattened category list."""

    tree: Phase
    flat: list[Category]

    @classmethod
    def from_tree(cls, tree: Phase) -> "NarrativeStructure":
        validate_phase_tree(tree)
        return cls(tree=tree, flat=flatten(tree))

    def to_dict(self) -> dict:
        return {"flat": [c.value for c in self.flat], "tree": _tree_to_dict(self.tree)}

    @classmethod
    def from_dict(cls, data: dict) -> "NarrativeStructure":
        tree = _tree_from_dict(data["tree"])
        assert isinstance(tree, Phase)
        return cls.from_tree(tree)


def _tree_to_dict(node: PhaseNode) -> dict | str:
    if isinstance(node, Leaf):
        return node.category.value
    return {
        "children": [_tree_to_dict(c) for c in node.children],
        "slot": node.slot.value if node.slot else None,
    }


def _tree_from_dict(data: dict | str) -> PhaseNode:
    if isinstance(data, str):
        return Leaf(Category(data))
    slot = Category(data["slot"]) if data.get("slot") else None
    return Phase(children=[_tree_from_dict(c) for c in data["children"]], slot=slot)


@dataclass
class TensionCurve:
    """One tension score per panel, in [0, 10] dimensionless points."""

    scores: list[float]

    def __post_init__(self) -> None:
        for s in self.scores:
            if not 0 <= s <= 10:
                raise InvalidValue(f"tension score {s} outside [0, 10]")

    def __len__(self) -> int:
        return len(self.scores)

    def __iter__(self):
        return iter(self.scores)


def assign_structure(model: graph.SequenceModel, structure: NarrativeStructure) -> graph.SequenceModel:
    """Resize the sequence to the structure and tag panels with their phases."""
    graph.pad_or_trim(model, len(structure.flat))
    for panel_id, category in zip(model.panel_ids(), structure.flat):
        model.set_property(panel_id, "grammar_phase", category.value)
    model.structure = structure.to_dict()
    return model


def default_arc(n: int) -> list[int]:
    """Fallback tension curve for untagged panels.

    Piecewise-linear through (first panel, 0), (panel ceil(2n/3), 6) and
    (last panel, 2), rounded to whole points. Degenerate lengths keep
    whatever anchors still fit.
    """
    if n <= 0:
        return []
    if n == 1:
        return [0]
    peak_index = math.ceil(2 * n / 3) - 1
    anchors = [(0, 0.0)]
    for idx, val in ((peak_index, 6.0), (n - 1, 2.0)):
        if idx > anchors[-1][0]:
            anchors.append((idx, val))
    scores = [0.0] * n
    for (x0, y0), (x1, y1) in zip(anchors, anchors[1:]):
        for x in range(x0, x1 + 1):
            t = (x - x0) / (x1 - x0)
            scores[x] = y0 + t * (y1 - y0)
    return [round(s) for s in scores]


def narrative_arc(model: graph.SequenceModel) -> TensionCurve:
    """Score every panel and write the score into its ``tension`` property.

    Panels all carrying a grammar phase are scored by the category table;
    otherwise the whole sequence falls back to the default arc.
    """
    panels = model.panels()
    phases = [p.get("grammar_phase") for p in panels]
    if panels and all(ph is not None for ph in phases):
        scores = [PHASE_TENSION[Category(ph)] for ph in phases]
    else:
        scores = default_arc(len(panels))
    for panel, score in zip(panels, scores):
        model.set_property(panel.id, "tension", score)
    return TensionCurve(scores=list(scores))
