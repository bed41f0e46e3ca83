"""Composable generation pipeline over the sequence graph.

A layer is a named transform from one sequence state to the next. The
engine applies layers left to right, gives each one its own random
stream derived from (seed, layer name, position in the run), and rolls
the whole sequence back if any layer fails, so callers never observe a
half-applied pipeline. Running the six built-ins in their canonical
order (grammar, arc, action, transition, symbol, redraw on demand)
turns an empty sequence into a fully planned one.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Protocol, Sequence, runtime_checkable

from . import graph as g
from .actions import (
    ActionGraph,
    SelectionParams,
    build_action_scores,
    load_action_graph,
    plan_actions,
    revise_consistency,
)
from .affect import build_arousal_table, load_anchors
from .assets import (
    SYMBOL_CATEGORIES,
    AssetPool,
    builtin_pool,
    symbol_table,
    visual_ref,
)
from .errors import (
    DuplicateName,
    GenerationFailed,
    InvalidValue,
    LayerFailure,
    ProviderUnavailable,
    UnknownAction,
    UnknownLayer,
    UnknownModel,
    UnknownSet,
    UnknownSymbol,
)
from .grammar import NarrativeStructure, TensionCurve, assign_structure, basic_phase, expand_center_embedded, narrative_arc
from .providers import LexiconSentiment, StaticEmbeddings
from .rng import derive_rng
from .transitions import TransitionType, apply_plan, plan_transitions, write_plan

# Default cast ensured by the action layer when panels have no characters.
DEFAULT_CAST: tuple[str, ...] = ("char_a", "char_b")

# Where ensured characters stand, as fractions of the panel.
CAST_BASELINE_Y = 0.62

# Symbols float up and to the side of the character that owns them.
DEFAULT_SYMBOL_OFFSET: tuple[float, float] = (0.18, -0.28)


@dataclass(frozen=True)
class GenerationContext:
    """Everything a layer may read besides the sequence itself.

    ``rng`` is populated by the engine per layer; layers must take their
    randomness from it and nowhere else, which is what makes a layer's
    draws independent of its neighbours' parameters.
    """

    seed: int
    assets: AssetPool
    providers: Mapping[str, Any] = field(default_factory=dict)
    params: Mapping[str, Any] = field(default_factory=dict)
    rng: random.Random | None = None

    def param(self, name: str, default: Any = None) -> Any:
        return self.params.get(name, default)

    def random(self) -> random.Random:
        if self.rng is None:
            raise InvalidValue("context has no random stream; run layers through the engine")
        return self.rng


@runtime_checkable
class Layer(Protocol):
    """A named transform over a sequence."""

    name: str

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel: ...


class Registry:
    """Insertion-ordered name -> object map that refuses silent overwrites."""

    def __init__(self, kind: str, missing: type[Exception]):
        self._kind = kind
        self._missing = missing
        self._entries: dict[str, Any] = {}

    def register(self, name: str, value: Any) -> None:
        if not isinstance(name, str) or not name:
            raise InvalidValue(f"{self._kind} name must be a non-empty string")
        if name in self._entries:
            raise DuplicateName(f"{self._kind} {name!r} is already registered")
        self._entries[name] = value

    def get(self, name: str) -> Any:
        try:
            return self._entries[name]
        except KeyError:
            raise self._missing(f"no {self._kind} named {name!r}") from None

    def names(self) -> list[str]:
        return list(self._entries)

    def items(self) -> Iterable[tuple[str, Any]]:
        return self._entries.items()

    def __contains__(self, name: str) -> bool:
        return name in self._entries


def _panel_characters(seq: g.SequenceModel, panel_id: int) -> list[g.AttributeNode]:
    return [n for n in seq.walk(panel_id) if n.type == g.CHARACTER]


def _resolve_action_graph(ctx: GenerationContext) -> ActionGraph:
    source = ctx.param("action_graph")
    if isinstance(source, ActionGraph):
        return source
    return load_action_graph(source)


class GrammarLayer:
    """Builds a narrative structure and retags (and resizes) the panels.

    Params: ``grammar_expand`` (expansion probability, default 0.3),
    ``grammar_depth`` (max embedding depth, default 2), and
    ``include_establisher`` / ``include_prolongation`` / ``include_release``
    to drop optional categories from the top-level template.
    """

    name = "grammar"

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel:
        if seq.length == 0:
            return seq  # an empty sequence stays empty; nothing to structure
        tree = basic_phase(
            include_e=bool(ctx.param("include_establisher", True)),
            include_l=bool(ctx.param("include_prolongation", True)),
            include_r=bool(ctx.param("include_release", True)),
        )
        tree = expand_center_embedded(
            tree,
            ctx.random(),
            p_expand=float(ctx.param("grammar_expand", 0.3)),
            max_depth=int(ctx.param("grammar_depth", 2)),
        )
        return assign_structure(seq, NarrativeStructure.from_tree(tree))


class ArcLayer:
    """Writes a tension score onto every panel. Deterministic."""

    name = "arc"

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel:
        narrative_arc(seq)
        return seq


class ActionLayer:
    """Ensures a cast and plans one causally-consistent action per panel.

    Params: ``cast`` (identities to guarantee in every panel, default
    char_a/char_b; pass an empty list to plan only existing characters),
    ``start_action`` (forced first action for characters that have none),
    ``temperature`` / ``tolerance`` (selection sharpness and pruning
    window), ``action_graph`` (alternative causality manifest) and
    ``action_scores`` (per-action arousal overrides).
    """

    name = "action"

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel:
        graph = _resolve_action_graph(ctx)
        self._ensure_cast(seq, ctx)
        self._seed_start_action(seq, ctx, graph)

        panels = seq.panels()
        if not panels:
            return seq
        tensions = [p.get("tension") for p in panels]
        if any(t is None for t in tensions):
            # Unscored panels fall back to the shared default arc.
            arc: TensionCurve | list[float] = narrative_arc(seq)
        else:
            arc = [float(t) for t in tensions]

        scores = self._score_table(ctx, graph)
        sel = SelectionParams(
            temperature=float(ctx.param("temperature", 0.5)),
            tolerance=float(ctx.param("tolerance", 1.0)),
            seed=ctx.random().randrange(2**63),
        )
        plan_actions(seq, arc, graph, scores, sel)
        revise_consistency(seq, graph)
        return seq

    def _ensure_cast(self, seq: g.SequenceModel, ctx: GenerationContext) -> None:
        cast = ctx.param("cast", DEFAULT_CAST)
        cast = [str(c) for c in cast]
        if not cast:
            return
        try:
            known = set(ctx.assets.labels("characters"))
        except UnknownSet:
            known = set()
        for panel in seq.panels():
            present = {
                str(node.get("identity") or node.name)
                for node in _panel_characters(seq, panel.id)
            }
            for index, identity in enumerate(cast):
                if identity in present:
                    continue
                x = (index + 1) / (len(cast) + 1)
                props: dict[str, g.PropertyValue] = {
                    "identity": identity,
                    "position": (x, CAST_BASELINE_Y),
                }
                if index % 2 == 1:
                    props["flip"] = True  # face the rest of the cast
                if identity in known:
                    props["visual"] = visual_ref("characters", identity)
                seq.add_child(panel.id, g.CHARACTER, identity, props)

    def _seed_start_action(
        self, seq: g.SequenceModel, ctx: GenerationContext, graph: ActionGraph
    ) -> None:
        start = ctx.param("start_action")
        if start is None:
            return
        start = str(start)
        if start not in graph:
            raise UnknownAction(f"start_action {start!r} is not in the action graph")
        panels = seq.panels()
        if not panels:
            return
        for node in _panel_characters(seq, panels[0].id):
            if node.get("action") is None:
                seq.set_property(node.id, "action", start)

    def _score_table(self, ctx: GenerationContext, graph: ActionGraph):
        sentiment = ctx.providers.get("sentiment") or LexiconSentiment()
        embeddings = ctx.providers.get("embeddings") or StaticEmbeddings()
        labels = getattr(sentiment, "labels", None)
        # Remote classifiers expose no label list; score over the bundled one.
        label_list = labels() if callable(labels) else LexiconSentiment().labels()
        table = build_arousal_table(label_list, load_anchors(), embeddings)
        overrides = ctx.param("action_scores")
        return build_action_scores(graph, sentiment, table, overrides)


class TransitionLayer:
    """Samples a panel-to-panel transition plan and applies it.

    Params: ``scene`` (label guaranteed as a backdrop on every panel,
    default "garden"; falsy skips), ``transition_weights`` (kind -> weight),
    ``force_peak_action`` (keep Peak entries on the action kind, default
    true) and ``action_graph`` for the re-sampling done by action
    transitions.
    """

    name = "transition"

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel:
        self._ensure_scene(seq, ctx)
        weights = self._weights(ctx.param("transition_weights"))
        plan = plan_transitions(
            seq,
            ctx.random(),
            weights,
            force_peak_action=bool(ctx.param("force_peak_action", True)),
        )
        write_plan(seq, plan)
        apply_plan(seq, plan, ctx.assets, ctx.random(), _resolve_action_graph(ctx))
        return seq

    @staticmethod
    def _weights(raw: Mapping[str, float] | None) -> dict[TransitionType, float] | None:
        if raw is None:
            return None
        try:
            return {TransitionType(str(k)): float(v) for k, v in raw.items()}
        except ValueError as exc:
            raise InvalidValue(f"bad transition weight table: {exc}") from None

    @staticmethod
    def _ensure_scene(seq: g.SequenceModel, ctx: GenerationContext) -> None:
        label = ctx.param("scene", "garden")
        if not label:
            return
        label = str(label)
        for panel in seq.panels():
            has_scene = any(n.type == g.SCENE for n in seq.walk(panel.id))
            if not has_scene:
                seq.add_child(
                    panel.id,
                    g.SCENE,
                    label,
                    {"visual": visual_ref("scenes", label)},
                )


class SymbolLayer:
    """Attaches the pictorial rune matching each character's action.

    Existing symbol children are replaced, never duplicated, so the layer
    is idempotent. Actions without a mapping clear any stale symbol.
    Params: ``symbol_map`` (action -> symbol overrides the bundled table)
    and ``symbol_offset`` (placement relative to the owner).
    """

    name = "symbol"

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel:
        mapping = ctx.param("symbol_map")
        mapping = dict(symbol_table()) if mapping is None else {str(k): str(v) for k, v in mapping.items()}
        offset = ctx.param("symbol_offset", DEFAULT_SYMBOL_OFFSET)
        known = set(SYMBOL_CATEGORIES)
        if "symbols" in ctx.assets.set_names():
            known.update(ctx.assets.labels("symbols"))
        for panel in seq.panels():
            for node in _panel_characters(seq, panel.id):
                action = node.get("action")
                symbol = mapping.get(action) if isinstance(action, str) else None
                if symbol is not None and symbol not in known:
                    raise UnknownSymbol(f"no symbol named {symbol!r}")
                existing = seq.children_of(node.id, g.SYMBOL)
                wanted = None
                if symbol is not None:
                    wanted = {
                        "visual": visual_ref("symbols", symbol),
                        "offset": g.check_property("offset", offset),
                    }
                    if (
                        len(existing) == 1
                        and existing[0].name == symbol
                        and existing[0].properties == wanted
                    ):
                        continue  # already correct; re-running must not churn ids
                for stale in existing:
                    seq.remove_node(stale.id)
                if wanted is not None:
                    seq.add_child(node.id, g.SYMBOL, symbol, dict(wanted))
        return seq


class RedrawLayer:
    """Regenerates the artwork behind one character or scene.

    Params: ``target`` (node id) and ``prompt``. The new image is produced
    by the registered ``image`` provider, stored in the asset pool under a
    label derived from (identity, prompt), and referenced from every node
    of the same type sharing the target's identity, so a character redrawn
    in one panel changes in all of them. Nothing else is touched.
    """

    name = "redraw"

    _SET_FOR_TYPE = {g.CHARACTER: "characters", g.SCENE: "scenes"}

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel:
        target = ctx.param("target")
        if target is None:
            raise InvalidValue("redraw requires a 'target' node id")
        node = seq.node(int(target))
        set_name = self._SET_FOR_TYPE.get(node.type)
        if set_name is None:
            raise InvalidValue(f"redraw targets characters or scenes, not {node.type.to_string()}")
        provider = ctx.providers.get("image")
        if provider is None:
            raise ProviderUnavailable("no model registered under 'image'")
        prompt = str(ctx.param("prompt", ""))

        base = self._current_bytes(ctx.assets, node)
        try:
            png = provider.generate(prompt, base)
        except Exception as exc:
            raise GenerationFailed(f"image provider failed: {exc}") from exc

        identity = str(node.get("identity") or node.name)
        digest = hashlib.sha256(f"{set_name}:{identity}:{prompt}".encode("utf-8")).hexdigest()[:8]
        label = f"{identity}_{digest}"
        ctx.assets.add_entry(set_name, label, png)
        ref = visual_ref(set_name, label)
        for other in seq.walk():
            if other.type != node.type:
                continue
            if str(other.get("identity") or other.name) == identity:
                seq.set_property(other.id, "visual", ref)
        return seq

    @staticmethod
    def _current_bytes(pool: AssetPool, node: g.AttributeNode) -> bytes | None:
        ref = node.get("visual")
        if not isinstance(ref, str):
            return None
        try:
            entry = pool.resolve_ref(ref)
        except Exception:
            return None
        if isinstance(entry.source, bytes):
            return entry.source
        if isinstance(entry.source, Path) and entry.source.exists():
            return entry.source.read_bytes()
        return None


class RuleLayer:
    """Declarative layer compiled from a JSON spec of property-set rules.

    Each rule matches nodes by type, name and/or property equality, then
    assigns the properties in its ``set`` block. Rules run in spec order
    over the whole tree, so later rules may overwrite earlier ones. Build
    instances with ``layer_from_spec``; the wire format is described in
    docs/layer_spec.schema.json.
    """

    def __init__(self, name: str, rules: Sequence[tuple[dict, dict]]):
        self.name = name
        self._rules = tuple(rules)

    def apply(self, seq: g.SequenceModel, ctx: GenerationContext) -> g.SequenceModel:
        for match, assign in self._rules:
            for node in list(seq.walk()):
                if self._matches(node, match):
                    for prop, value in assign.items():
                        seq.set_property(node.id, prop, value)
        return seq

    @staticmethod
    def _matches(node: g.AttributeNode, match: Mapping[str, Any]) -> bool:
        for key, expected in match.items():
            if key == "type":
                if node.type.to_string() != expected:
                    return False
            elif key == "name":
                if node.name != expected:
                    return False
            elif node.get(key) != expected:
                return False
        return True


def _spec_value(value: Any, where: str) -> Any:
    # Mirrors the property-value grammar: scalars, strings, number pairs.
    if isinstance(value, list):
        if len(value) != 2 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise InvalidValue(f"{where}: only number pairs allowed, got {value!r}")
        return (float(value[0]), float(value[1]))
    if isinstance(value, (bool, int, float, str)):
        return value
    raise InvalidValue(f"{where}: unsupported value {value!r}")


def layer_from_spec(spec: Mapping[str, Any]) -> RuleLayer:
    """Compile ``{"name": ..., "rules": [{"match": ..., "set": ...}]}``.

    Values in ``set`` go through the same validation node edits get, so a
    bad spec fails at registration time rather than mid-pipeline.
    """
    if not isinstance(spec, Mapping):
        raise InvalidValue("layer spec must be an object")
    unknown = set(spec) - {"name", "rules"}
    if unknown:
        raise InvalidValue(f"layer spec has unknown keys {sorted(unknown)}")
    name = spec.get("name")
    if not isinstance(name, str) or not name:
        raise InvalidValue("layer spec needs a non-empty string 'name'")
    rules = spec.get("rules")
    if not isinstance(rules, list) or not rules:
        raise InvalidValue("layer spec needs a non-empty 'rules' list")
    compiled = []
    for idx, rule in enumerate(rules):
        where = f"rule {idx}"
        if not isinstance(rule, Mapping) or set(rule) - {"match", "set"}:
            raise InvalidValue(f"{where} must be an object with 'match' and 'set' only")
        match = rule.get("match", {})
        assign = rule.get("set")
        if not isinstance(match, Mapping):
            raise InvalidValue(f"{where}: 'match' must be an object")
        if not isinstance(assign, Mapping) or not assign:
            raise InvalidValue(f"{where}: 'set' must be a non-empty object")
        checked_match: dict[str, Any] = {}
        for key, value in match.items():
            if key in ("type", "name"):
                if not isinstance(value, str):
                    raise InvalidValue(f"{where}: {key!r} must be a string")
                if key == "type":
                    g.AttributeType.from_string(value)  # rejects unknown kinds
                checked_match[key] = value
            else:
                checked_match[key] = _spec_value(value, f"{where} match {key!r}")
        checked_set: dict[str, Any] = {}
        for key, value in assign.items():
            if not isinstance(key, str) or not key:
                raise InvalidValue(f"{where}: property names must be non-empty strings")
            checked_set[key] = g.check_property(key, _spec_value(value, f"{where} set {key!r}"))
        compiled.append((checked_match, checked_set))
    return RuleLayer(name, compiled)


#: Built-in layers in their canonical pipeline order.
BUILTIN_LAYERS: tuple[type, ...] = (
    GrammarLayer,
    ArcLayer,
    ActionLayer,
    TransitionLayer,
    SymbolLayer,
    RedrawLayer,
)

#: The run most callers want: everything except redraw, which needs a target.
DEFAULT_PIPELINE: tuple[str, ...] = ("grammar", "arc", "action", "transition", "symbol")


class Engine:
    """Holds the layer and model registries and runs pipelines atomically."""

    def __init__(self, assets: AssetPool | None = None, include_builtins: bool = True):
        self.assets = assets if assets is not None else builtin_pool()
        self.layers = Registry("layer", UnknownLayer)
        self.models = Registry("model", UnknownModel)
        if include_builtins:
            for cls in BUILTIN_LAYERS:
                self.register_layer(cls())

    def register_layer(self, layer: Layer) -> None:
        name = getattr(layer, "name", None)
        self.layers.register(name, layer)  # type: ignore[arg-type]

    def register_model(self, name: str, provider: Any) -> None:
        self.models.register(name, provider)

    def layer_names(self) -> list[str]:
        return self.layers.names()

    def model_names(self) -> list[str]:
        return self.models.names()

    def context(
        self, seed: int, params: Mapping[str, Any] | None = None
    ) -> GenerationContext:
        return GenerationContext(
            seed=int(seed),
            assets=self.assets,
            providers=dict(self.models.items()),
            params=dict(params or {}),
        )

    def apply_layers(
        self,
        seq: g.SequenceModel,
        names: Sequence[str],
        ctx: GenerationContext | None = None,
        params: Mapping[str, Any] | None = None,
    ) -> g.SequenceModel:
        """Run the named layers in order; all-or-nothing.

        Unknown names fail before anything is touched. Any layer error
        restores the pre-call document and surfaces as LayerFailure with
        the original exception as ``cause``. The revision counter moves
        by exactly one per call that changed the document.
        """
        if isinstance(names, str):
            names = [names]
        resolved = [(name, self.layers.get(name)) for name in names]
        if ctx is None:
            ctx = self.context(seq.seed, params)
        original = seq
        snapshot = seq.to_document()
        baseline = g.document_json(snapshot)
        current = ""
        try:
            for position, (name, layer) in enumerate(resolved):
                current = name
                layer_ctx = replace(ctx, rng=derive_rng(ctx.seed, name, position))
                out = layer.apply(seq, layer_ctx)
                if out is not None:
                    seq = out
                g.validate_tree(seq)
        except Exception as exc:
            original.restore(snapshot)
            raise LayerFailure(current, exc) from exc
        after = seq.to_document()
        after["revision"] = snapshot["revision"]
        changed = g.document_json(after) != baseline
        seq.revision = snapshot["revision"] + (1 if changed else 0)
        return seq


def default_engine(assets: AssetPool | None = None) -> Engine:
    """An engine wired to the bundled assets and offline providers."""
    from .providers import StubImageProvider

    engine = Engine(assets=assets)
    engine.register_model("image", StubImageProvider())
    engine.register_model("sentiment", LexiconSentiment())
    engine.register_model("embeddings", StaticEmbeddings())
    return engine
