"""Panel-transition planning and application.

Five transition kinds link consecutive panels. Planning samples one kind
per gap from configurable weights; a gap that lands on a Peak panel is
forced to Action by default, since action continuity is what carries a
climax. Application edits only the later panel of each pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from . import graph as g
from .actions import ActionGraph, load_action_graph
from .assets import AssetPool, parse_visual_ref, visual_ref
from .errors import AllZeroWeights, InvalidValue, LengthMismatch, NoAlternativeAsset, UnknownSet
from .grammar import Category


class TransitionType(str, Enum):
    ACTION = "action"
    SCENE = "scene"
    OBJECT = "object"
    ADDITION = "addition"
    ALTERNATION = "alternation"


DEFAULT_WEIGHTS: dict[TransitionType, float] = {
    TransitionType.ACTION: 0.35,
    TransitionType.SCENE: 0.2,
    TransitionType.OBJECT: 0.15,
    TransitionType.ADDITION: 0.15,
    TransitionType.ALTERNATION: 0.15,
}

OBJECT_FOCUS_ZOOM = 1.8


@dataclass
class TransitionPlan:
    entries: list[TransitionType] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def plan_transitions(
    seq: g.SequenceModel,
    rng: random.Random,
    weights: Mapping[TransitionType, float] | None = None,
    force_peak_action: bool = True,
) -> TransitionPlan:
    """One transition per panel gap, sampled from normalized weights.

    Every gap consumes exactly one draw even when the Peak rule overrides
    it, so toggling the rule never shifts the sampling stream for later
    gaps.
    """
    table = dict(DEFAULT_WEIGHTS if weights is None else weights)
    for kind in TransitionType:
        table.setdefault(kind, 0.0)
        if table[kind] < 0:
            raise InvalidValue(f"negative weight for {kind.value}")
    total = sum(table.values())
    if total <= 0:
        raise AllZeroWeights("transition weights sum to zero")
    panels = seq.panels()
    entries: list[TransitionType] = []
    kinds = list(TransitionType)
    for gap in range(max(0, len(panels) - 1)):
        roll = rng.random() * total
        acc = 0.0
        choice = kinds[-1]
        for kind in kinds:
            acc += table[kind]
            if roll < acc:
                choice = kind
                break
        incoming = panels[gap + 1]
        if force_peak_action and incoming.get("grammar_phase") == Category.PEAK.value:
            choice = TransitionType.ACTION
        entries.append(choice)
    return TransitionPlan(entries=entries)


def write_plan(seq: g.SequenceModel, plan: TransitionPlan) -> g.SequenceModel:
    """Record each gap's kind on the receiving panel (transition_in)."""
    panels = seq.panels()
    if len(plan.entries) != max(0, len(panels) - 1):
        raise LengthMismatch(
            f"plan has {len(plan.entries)} entries for {len(panels)} panels"
        )
    for panel, kind in zip(panels[1:], plan.entries):
        seq.set_property(panel.id, "transition_in", kind.value)
    return seq


def _panel_characters(seq: g.SequenceModel, panel_id: int) -> dict[str, g.AttributeNode]:
    found = {}
    for node in seq.walk(panel_id):
        if node.type == g.CHARACTER:
            identity = str(node.get("identity") or node.name)
            found[identity] = node
    return found


def _panel_objects(seq: g.SequenceModel, panel_id: int) -> list[g.AttributeNode]:
    return [node for node in seq.walk(panel_id) if node.type == g.OBJECT]


def _panel_scene(seq: g.SequenceModel, panel_id: int) -> g.AttributeNode | None:
    for node in seq.walk(panel_id):
        if node.type == g.SCENE:
            return node
    return None


def _alternative(pool: AssetPool, set_name: str, current: str | None, rng: random.Random) -> str:
    try:
        labels = pool.labels(set_name)
    except UnknownSet:
        raise NoAlternativeAsset(f"no visual set named {set_name!r}") from None
    options = [label for label in labels if label != current]
    if not options:
        raise NoAlternativeAsset(f"set {set_name!r} has no alternative to {current!r}")
    return options[rng.randrange(len(options))]


def _apply_action(seq, prev_id, next_id, rng, graph: ActionGraph) -> None:
    # Identical consecutive actions defeat an Action transition; re-sample
    # the later one from the causal successors, keeping adjacency intact.
    seq.set_property(next_id, "action_constraint", "differ")
    prev_chars = _panel_characters(seq, prev_id)
    for identity, node in _panel_characters(seq, next_id).items():
        prev_node = prev_chars.get(identity)
        if prev_node is None:
            continue
        prev_action = prev_node.get("action")
        if not isinstance(prev_action, str) or prev_action not in graph:
            continue
        if node.get("action") != prev_action:
            continue
        options = [s for s in graph.successors(prev_action) if s != prev_action]
        if not options:
            continue
        seq.set_property(node.id, "action", options[rng.randrange(len(options))])


def _apply_scene(seq, next_id, pool, rng) -> None:
    scene = _panel_scene(seq, next_id)
    if scene is None:
        label = _alternative(pool, "scenes", None, rng)
        seq.add_child(next_id, g.SCENE, label, {"visual": visual_ref("scenes", label)})
        return
    current = scene.get("visual")
    set_name, label = parse_visual_ref(current) if isinstance(current, str) else ("scenes", None)
    replacement = _alternative(pool, set_name, label, rng)
    seq.set_property(scene.id, "visual", visual_ref(set_name, replacement))


def _apply_object_focus(seq, next_id, pool, rng) -> None:
    objects = _panel_objects(seq, next_id)
    if objects:
        target = objects[0]
    else:
        label = _alternative(pool, "objects", None, rng)
        position = (0.3 + 0.4 * rng.random(), 0.3 + 0.4 * rng.random())
        target = seq.add_child(
            next_id,
            g.OBJECT,
            label,
            {"visual": visual_ref("objects", label), "position": position},
        )
    x, y = target.get("position", (0.5, 0.5))
    seq.set_property(next_id, "viewport_zoom", OBJECT_FOCUS_ZOOM)
    seq.set_property(next_id, "viewport_dx", 2.0 * float(x) - 1.0)
    seq.set_property(next_id, "viewport_dy", 2.0 * float(y) - 1.0)


def _apply_addition(seq, next_id, pool, rng) -> None:
    count = 1 + (1 if rng.random() < 0.25 else 0)
    for _ in range(count):
        label = _alternative(pool, "objects", None, rng)
        position = (0.15 + 0.7 * rng.random(), 0.15 + 0.7 * rng.random())
        seq.add_child(
            next_id,
            g.OBJECT,
            label,
            {"visual": visual_ref("objects", label), "position": position},
        )


def _apply_alternation(seq, next_id, pool, rng) -> None:
    _apply_scene(seq, next_id, pool, rng)
    for node in _panel_objects(seq, next_id):
        current = node.get("visual")
        set_name, label = parse_visual_ref(current) if isinstance(current, str) else ("objects", None)
        replacement = _alternative(pool, set_name, label, rng)
        seq.set_property(node.id, "visual", visual_ref(set_name, replacement))


def apply_transition(
    seq: g.SequenceModel,
    prev_id: int,
    next_id: int,
    kind: TransitionType,
    pool: AssetPool,
    rng: random.Random,
    graph: ActionGraph | None = None,
) -> g.SequenceModel:
    """Realize one transition by editing the `next` panel subtree only."""
    for panel_id in (prev_id, next_id):
        if seq.node(panel_id).type != g.PANEL:
            raise InvalidValue(f"node {panel_id} is not a panel")
    if kind == TransitionType.ACTION:
        _apply_action(seq, prev_id, next_id, rng, graph or load_action_graph())
    elif kind == TransitionType.SCENE:
        _apply_scene(seq, next_id, pool, rng)
    elif kind == TransitionType.OBJECT:
        _apply_object_focus(seq, next_id, pool, rng)
    elif kind == TransitionType.ADDITION:
        _apply_addition(seq, next_id, pool, rng)
    elif kind == TransitionType.ALTERNATION:
        _apply_alternation(seq, next_id, pool, rng)
    seq.set_property(next_id, "transition_in", kind.value)
    return seq


def apply_plan(
    seq: g.SequenceModel,
    plan: TransitionPlan,
    pool: AssetPool,
    rng: random.Random,
    graph: ActionGraph | None = None,
) -> g.SequenceModel:
    panel_ids = seq.panel_ids()
    if len(plan.entries) != max(0, len(panel_ids) - 1):
        raise LengthMismatch(
            f"plan has {len(plan.entries)} entries for {len(panel_ids)} panels"
        )
    graph = graph or load_action_graph()
    for gap, kind in enumerate(plan.entries):
        apply_transition(seq, panel_ids[gap], panel_ids[gap + 1], kind, pool, rng, graph)
    return seq
