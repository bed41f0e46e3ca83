"""Causal action network and arc-constrained action planning.

A directed graph links each action to its plausible reactions. Planning
walks the tension curve: for every step the desired arousal change picks,
softly, the successor whose score delta matches best. Temperature and
tolerance keep the choice probabilistic but bounded, so stories vary
under different seeds without ever breaking causality.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from . import graph as g
from .affect import SentimentProvider, action_arousal, build_arousal_table, load_anchors
from .errors import (
    InvalidValue,
    LengthMismatch,
    MalformedManifest,
    NoSuccessors,
    UndeclaredEndpoint,
    UnknownAction,
)
from .grammar import TENSION_MAX, TensionCurve
from .rng import derive_rng


@dataclass(frozen=True)
class ActionGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if len(set(self.nodes)) != len(self.nodes):
            raise MalformedManifest("duplicate action node")
        declared = set(self.nodes)
        seen = set()
        for cause, reaction in self.edges:
            if cause == reaction:
                raise MalformedManifest(f"self-loop on {cause!r}")
            if cause not in declared:
                raise UndeclaredEndpoint(f"edge cause {cause!r} is not a declared node")
            if reaction not in declared:
                raise UndeclaredEndpoint(f"edge reaction {reaction!r} is not a declared node")
            if (cause, reaction) in seen:
                raise MalformedManifest(f"duplicate edge {cause!r} -> {reaction!r}")
            seen.add((cause, reaction))

    def __contains__(self, action: str) -> bool:
        return action in self.nodes

    def successors(self, action: str) -> list[str]:
        """Reactions one edge away, in manifest declaration order."""
        if action not in self.nodes:
            raise UnknownAction(f"unknown action {action!r}")
        return [reaction for cause, reaction in self.edges if cause == action]

    def has_edge(self, cause: str, reaction: str) -> bool:
        return (cause, reaction) in self.edges


def load_action_graph(source: str | Path | Mapping | None = None) -> ActionGraph:
    """Build a graph from a manifest; None loads the bundled default."""
    if source is None:
        text = resources.files("panelsmith.data").joinpath("action_graph.json").read_text()
        payload = json.loads(text)
    elif isinstance(source, Mapping):
        payload = source
    elif isinstance(source, (str, Path)):
        try:
            with open(source, encoding="utf-8") as handle:
                payload = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedManifest(f"cannot read action manifest: {exc}") from exc
    else:
        raise MalformedManifest(f"unsupported manifest source {type(source).__name__}")
    if not isinstance(payload, Mapping):
        raise MalformedManifest("action manifest must be an object")
    nodes = payload.get("nodes")
    edges = payload.get("edges")
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise MalformedManifest("manifest 'nodes' must be a list of labels")
    if not isinstance(edges, list):
        raise MalformedManifest("manifest 'edges' must be a list of pairs")
    parsed_edges = []
    for entry in edges:
        if not (
            isinstance(entry, (list, tuple))
            and len(entry) == 2
            and all(isinstance(x, str) for x in entry)
        ):
            raise MalformedManifest(f"edge {entry!r} is not a [cause, reaction] pair")
        parsed_edges.append((entry[0], entry[1]))
    return ActionGraph(nodes=tuple(nodes), edges=tuple(parsed_edges))


@dataclass
class ActionScoreTable:
    """Arousal score per action label, all within [-1, 1]."""

    entries: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label, score in self.entries.items():
            if not -1.0 <= score <= 1.0:
                raise InvalidValue(f"action score for {label!r} outside [-1, 1]: {score}")

    def __getitem__(self, label: str) -> float:
        try:
            return self.entries[label]
        except KeyError:
            raise UnknownAction(f"no arousal score for action {label!r}") from None

    def __contains__(self, label: str) -> bool:
        return label in self.entries


def build_action_scores(
    graph: ActionGraph,
    sentiment: SentimentProvider,
    arousal_table,
    overrides: Mapping[str, float] | None = None,
) -> ActionScoreTable:
    """Score every graph node by classifying its label as action text."""
    entries = {}
    for action in graph.nodes:
        entries[action] = action_arousal(action, sentiment, arousal_table)
    if overrides:
        for label, score in overrides.items():
            entries[label] = float(score)
    return ActionScoreTable(entries=entries)


def builtin_action_scores(graph: ActionGraph | None = None) -> ActionScoreTable:
    """Score table from the bundled lexicon, embeddings and anchors."""
    from .providers import LexiconSentiment, StaticEmbeddings

    if graph is None:
        graph = load_action_graph()
    sentiment = LexiconSentiment()
    table = build_arousal_table(sentiment.labels(), load_anchors(), StaticEmbeddings())
    return build_action_scores(graph, sentiment, table)


@dataclass(frozen=True)
class SelectionParams:
    temperature: float = 0.5
    tolerance: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.temperature <= 0:
            raise InvalidValue("temperature must be positive")
        if self.tolerance < 0:
            raise InvalidValue("tolerance must be non-negative")


def action_probabilities(
    current: str,
    desired_delta: float,
    graph: ActionGraph,
    scores: ActionScoreTable,
    params: SelectionParams,
) -> dict[str, float]:
    """Distribution over successors of `current` for one arc step.

    Candidates outside the tolerance window stay in the mapping with
    probability zero so callers can see what was pruned.
    """
    candidates = graph.successors(current)
    if not candidates:
        raise NoSuccessors(f"action {current!r} has no successors")
    current_score = scores[current]
    mismatch = {c: abs(desired_delta - (scores[c] - current_score)) for c in candidates}
    cutoff = min(mismatch.values()) + params.tolerance
    weights = {
        c: math.exp(-mismatch[c] / params.temperature) if mismatch[c] <= cutoff else 0.0
        for c in candidates
    }
    total = sum(weights.values())
    return {c: w / total for c, w in weights.items()}


def _sample(probabilities: Mapping[str, float], rng) -> str:
    roll = rng.random()
    acc = 0.0
    last = None
    for label, p in probabilities.items():
        if p <= 0:
            continue
        last = label
        acc += p
        if roll < acc:
            return label
    if last is None:
        raise NoSuccessors("empty distribution")
    return last


def character_rows(seq: g.SequenceModel) -> dict[str, dict[int, g.AttributeNode]]:
    """Character nodes grouped by identity, keyed by panel position.

    Nodes without an identity property fall back to their name, so
    ad-hoc single-panel characters still participate.
    """
    rows: dict[str, dict[int, g.AttributeNode]] = {}
    for position, panel in enumerate(seq.panels()):
        for node in seq.walk(panel.id):
            if node.type != g.CHARACTER:
                continue
            identity = node.get("identity") or node.name
            rows.setdefault(str(identity), {})[position] = node
    return rows


def plan_actions(
    seq: g.SequenceModel,
    arc: TensionCurve | Sequence[float],
    graph: ActionGraph,
    scores: ActionScoreTable,
    params: SelectionParams,
) -> g.SequenceModel:
    """Assign one action per character per panel, tracking the arc.

    The desired arousal change per step is the arc slope rescaled by half
    the maximum tension, making curve units commensurable with scores.
    Dead ends hold the last action so generation always completes.
    """
    curve = list(arc.scores) if isinstance(arc, TensionCurve) else list(arc)
    panels = seq.panels()
    if len(curve) != len(panels):
        raise LengthMismatch(
            f"arc has {len(curve)} scores for {len(panels)} panels"
        )
    half_span = TENSION_MAX / 2.0
    for identity, row in sorted(character_rows(seq).items()):
        positions = sorted(row)
        if not positions:
            continue
        rng = derive_rng(params.seed, "actions", identity)
        first = row[positions[0]]
        current = first.get("action")
        if not isinstance(current, str) or current not in graph:
            current = graph.nodes[rng.randrange(len(graph.nodes))]
        seq.set_property(first.id, "action", current)
        for prev_pos, pos in zip(positions, positions[1:]):
            if not graph.successors(current):
                seq.set_property(row[pos].id, "action", current)
                continue
            desired = (curve[pos] - curve[prev_pos]) / half_span
            probabilities = action_probabilities(current, desired, graph, scores, params)
            current = _sample(probabilities, rng)
            seq.set_property(row[pos].id, "action", current)
    return seq


def adjacency_violations(seq: g.SequenceModel, graph: ActionGraph) -> list[tuple[str, int, str, str]]:
    """(identity, position, cause, reaction) for every broken pair."""
    violations = []
    for identity, row in sorted(character_rows(seq).items()):
        positions = sorted(row)
        for prev_pos, pos in zip(positions, positions[1:]):
            cause = row[prev_pos].get("action")
            reaction = row[pos].get("action")
            if not isinstance(cause, str) or not isinstance(reaction, str):
                continue
            if cause not in graph:
                continue
            successors = graph.successors(cause)
            if reaction in successors:
                continue
            if not successors and reaction == cause:
                continue
            violations.append((identity, pos, cause, reaction))
    return violations


def revise_consistency(seq: g.SequenceModel, graph: ActionGraph) -> g.SequenceModel:
    """One forward pass repairing any action pair that is not a graph edge.

    Later actions are re-sampled from the earlier action's successors
    (uniformly, seeded from the sequence), so a repair at panel k is
    itself validated against panel k+1 as the scan moves right.
    """
    for identity, row in sorted(character_rows(seq).items()):
        positions = sorted(row)
        rng = derive_rng(seq.seed, "revise", identity)
        for prev_pos, pos in zip(positions, positions[1:]):
            cause = row[prev_pos].get("action")
            reaction = row[pos].get("action")
            if not isinstance(cause, str) or cause not in graph:
                continue
            successors = graph.successors(cause)
            if not successors:
                if reaction != cause:
                    seq.set_property(row[pos].id, "action", cause)
                continue
            if reaction not in successors:
                repaired = successors[rng.randrange(len(successors))]
                seq.set_property(row[pos].id, "action", repaired)
    return seq
