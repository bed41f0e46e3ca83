"""Transition planning and application tests."""

from __future__ import annotations

import copy
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panelsmith import graph as g
from panelsmith.actions import load_action_graph
from panelsmith.assets import builtin_pool, parse_visual_ref
from panelsmith.errors import AllZeroWeights, LengthMismatch, NoAlternativeAsset
from panelsmith.transitions import (
    DEFAULT_WEIGHTS,
    OBJECT_FOCUS_ZOOM,
    TransitionPlan,
    TransitionType,
    apply_plan,
    apply_transition,
    plan_transitions,
    write_plan,
)

POOL = builtin_pool()
GRAPH = load_action_graph()


def two_panels(scene="garden", actions=("walk", "walk")) -> g.SequenceModel:
    model = g.create_sequence(2, 5)
    for pid, action in zip(model.panel_ids(), actions):
        model.add_child(pid, g.SCENE, scene, {"visual": f"scenes/{scene}"})
        model.add_child(
            pid,
            g.CHARACTER,
            "char_a",
            {"identity": "char_a", "visual": "characters/char_a", "action": action},
        )
    return model


def identity_set(model: g.SequenceModel, panel_id: int) -> set[str]:
    return {
        str(node.get("identity") or node.name)
        for node in model.walk(panel_id)
        if node.type == g.CHARACTER
    }


def subtree_snapshot(model: g.SequenceModel, panel_id: int):
    return [
        (node.id, node.type.to_string(), node.name, sorted(node.properties.items()))
        for node in model.walk(panel_id)
    ]


class TestPlanTransitions:
    def test_single_panel_empty_plan(self):
        model = g.create_sequence(1, 0)
        plan = plan_transitions(model, random.Random(0))
        assert len(plan) == 0

    def test_plan_shape(self):
        for n in (0, 1, 2, 5, 9):
            model = g.create_sequence(n, 0)
            plan = plan_transitions(model, random.Random(1))
            assert len(plan) == max(0, n - 1)

    def test_point_mass_weights(self):
        model = g.create_sequence(6, 0)
        weights = {TransitionType.ACTION: 1.0}
        plan = plan_transitions(model, random.Random(2), weights)
        assert all(kind == TransitionType.ACTION for kind in plan)

    def test_all_zero_weights_rejected(self):
        model = g.create_sequence(3, 0)
        with pytest.raises(AllZeroWeights):
            plan_transitions(model, random.Random(0), {TransitionType.SCENE: 0.0})

    def test_peak_entry_forced_to_action(self):
        model = g.create_sequence(5, 0)
        phases = ["E", "I", "L", "P", "R"]
        for pid, phase in zip(model.panel_ids(), phases):
            model.set_property(pid, "grammar_phase", phase)
        weights = {TransitionType.SCENE: 1.0}
        plan = plan_transitions(model, random.Random(3), weights)
        assert plan.entries[2] == TransitionType.ACTION
        assert plan.entries[0] == TransitionType.SCENE

    def test_peak_forcing_configurable_off(self):
        model = g.create_sequence(2, 0)
        model.set_property(model.panel_ids()[1], "grammar_phase", "P")
        weights = {TransitionType.SCENE: 1.0}
        plan = plan_transitions(model, random.Random(3), weights, force_peak_action=False)
        assert plan.entries[0] == TransitionType.SCENE

    def test_deterministic_under_seed(self):
        model = g.create_sequence(8, 0)
        first = plan_transitions(model, random.Random(7)).entries
        second = plan_transitions(model, random.Random(7)).entries
        assert first == second

    def test_default_weights_cover_all_kinds(self):
        assert set(DEFAULT_WEIGHTS) == set(TransitionType)
        assert sum(DEFAULT_WEIGHTS.values()) == pytest.approx(1.0)

    def test_write_plan_records_on_receiving_panels(self):
        model = g.create_sequence(3, 0)
        plan = TransitionPlan(entries=[TransitionType.SCENE, TransitionType.OBJECT])
        write_plan(model, plan)
        panels = model.panels()
        assert panels[0].get("transition_in") is None
        assert panels[1].get("transition_in") == "scene"
        assert panels[2].get("transition_in") == "object"
        assert model.to_document()["transitions"] == ["scene", "object"]

    def test_write_plan_length_checked(self):
        model = g.create_sequence(3, 0)
        with pytest.raises(LengthMismatch):
            write_plan(model, TransitionPlan(entries=[TransitionType.SCENE]))


class TestApplyTransition:
    def test_scene_changes_background_keeps_characters(self):
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        before = identity_set(model, next_id)
        apply_transition(model, prev_id, next_id, TransitionType.SCENE, POOL, random.Random(0))
        scene = next(n for n in model.walk(next_id) if n.type == g.SCENE)
        assert scene.get("visual") != "scenes/garden"
        assert identity_set(model, next_id) == before

    def test_scene_requires_an_alternative(self):
        from panelsmith.assets import AssetPool

        lonely = AssetPool()
        lonely.add_entry("scenes", "garden", POOL.resolve("garden", "scenes").source)
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        with pytest.raises(NoAlternativeAsset):
            apply_transition(model, prev_id, next_id, TransitionType.SCENE, lonely, random.Random(0))

    def test_action_resamples_identical_actions(self):
        model = two_panels(actions=("walk", "walk"))
        prev_id, next_id = model.panel_ids()
        apply_transition(
            model, prev_id, next_id, TransitionType.ACTION, POOL, random.Random(1), GRAPH
        )
        chars = [n for n in model.walk(next_id) if n.type == g.CHARACTER]
        assert chars[0].get("action") in GRAPH.successors("walk")
        assert chars[0].get("action") != "walk"
        assert model.node(next_id).get("action_constraint") == "differ"

    def test_action_leaves_differing_actions_alone(self):
        model = two_panels(actions=("walk", "run"))
        prev_id, next_id = model.panel_ids()
        apply_transition(
            model, prev_id, next_id, TransitionType.ACTION, POOL, random.Random(1), GRAPH
        )
        chars = [n for n in model.walk(next_id) if n.type == g.CHARACTER]
        assert chars[0].get("action") == "run"

    def test_object_focus_zooms_viewport_onto_object(self):
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        apply_transition(model, prev_id, next_id, TransitionType.OBJECT, POOL, random.Random(2))
        panel = model.node(next_id)
        assert panel.get("viewport_zoom") == OBJECT_FOCUS_ZOOM
        objects = [n for n in model.walk(next_id) if n.type == g.OBJECT]
        assert len(objects) == 1
        x, y = objects[0].get("position")
        assert panel.get("viewport_dx") == pytest.approx(2 * x - 1)
        assert panel.get("viewport_dy") == pytest.approx(2 * y - 1)

    def test_object_focus_reuses_existing_object(self):
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        model.add_child(
            next_id, g.OBJECT, "apple", {"visual": "objects/apple", "position": (0.25, 0.75)}
        )
        apply_transition(model, prev_id, next_id, TransitionType.OBJECT, POOL, random.Random(2))
        objects = [n for n in model.walk(next_id) if n.type == g.OBJECT]
        assert len(objects) == 1
        assert model.node(next_id).get("viewport_dx") == pytest.approx(-0.5)

    def test_addition_adds_objects(self):
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        before = len([n for n in model.walk(next_id) if n.type == g.OBJECT])
        apply_transition(model, prev_id, next_id, TransitionType.ADDITION, POOL, random.Random(3))
        after = len([n for n in model.walk(next_id) if n.type == g.OBJECT])
        assert after >= before + 1

    def test_alternation_preserves_identities_changes_scene(self):
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        model.add_child(next_id, g.OBJECT, "apple", {"visual": "objects/apple"})
        before = identity_set(model, next_id)
        apply_transition(
            model, prev_id, next_id, TransitionType.ALTERNATION, POOL, random.Random(4)
        )
        assert identity_set(model, next_id) == before
        scene = next(n for n in model.walk(next_id) if n.type == g.SCENE)
        assert scene.get("visual") != "scenes/garden"
        obj = next(n for n in model.walk(next_id) if n.type == g.OBJECT)
        assert obj.get("visual") != "objects/apple"

    def test_records_transition_in(self):
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        apply_transition(model, prev_id, next_id, TransitionType.SCENE, POOL, random.Random(0))
        assert model.node(next_id).get("transition_in") == "scene"

    @settings(max_examples=25, deadline=None)
    @given(
        kind=st.sampled_from(list(TransitionType)),
        seed=st.integers(0, 10_000),
    )
    def test_locality_prev_panel_untouched(self, kind, seed):
        model = two_panels()
        prev_id, next_id = model.panel_ids()
        before = subtree_snapshot(model, prev_id)
        apply_transition(model, prev_id, next_id, kind, POOL, random.Random(seed), GRAPH)
        assert subtree_snapshot(model, prev_id) == before

    def test_application_deterministic_under_seed(self):
        def run():
            model = two_panels()
            prev_id, next_id = model.panel_ids()
            apply_transition(
                model, prev_id, next_id, TransitionType.ALTERNATION, POOL, random.Random(9)
            )
            return subtree_snapshot(model, next_id)

        assert run() == run()


class TestApplyPlan:
    def test_full_plan_application(self):
        model = g.create_sequence(4, 3)
        for pid in model.panel_ids():
            model.add_child(pid, g.SCENE, "garden", {"visual": "scenes/garden"})
            model.add_child(
                pid,
                g.CHARACTER,
                "char_a",
                {"identity": "char_a", "action": "walk"},
            )
        plan = TransitionPlan(
            entries=[TransitionType.SCENE, TransitionType.ADDITION, TransitionType.OBJECT]
        )
        apply_plan(model, plan, POOL, random.Random(11), GRAPH)
        assert model.to_document()["transitions"] == ["scene", "addition", "object"]

    def test_plan_length_validated(self):
        model = g.create_sequence(3, 0)
        with pytest.raises(LengthMismatch):
            apply_plan(model, TransitionPlan(entries=[]), POOL, random.Random(0))
