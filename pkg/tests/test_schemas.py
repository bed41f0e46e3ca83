"""The shipped schema files must accept what the code emits (and vice versa)."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from panelsmith.errors import InvalidValue
from panelsmith.graph import create_sequence, to_document
from panelsmith.layers import default_engine, layer_from_spec

DOCS = Path(__file__).resolve().parents[1] / "docs"


@pytest.fixture(scope="module")
def document_validator():
    schema = json.loads((DOCS / "scene_document.schema.json").read_text())
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


@pytest.fixture(scope="module")
def spec_validator():
    schema = json.loads((DOCS / "layer_spec.schema.json").read_text())
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


class TestSceneDocumentSchema:
    def test_empty_sequence(self, document_validator):
        document_validator.validate(to_document(create_sequence(0, seed=1)))

    def test_fresh_sequence(self, document_validator):
        document_validator.validate(to_document(create_sequence(4, seed=1)))

    def test_fully_pipelined_sequence(self, document_validator):
        engine = default_engine()
        seq = create_sequence(5, seed=42)
        engine.apply_layers(seq, ["grammar", "arc", "action", "transition", "symbol"])
        document = to_document(seq)
        assert "structure" in document and "transitions" in document
        document_validator.validate(document)

    def test_rejects_unknown_top_level_field(self, document_validator):
        document = to_document(create_sequence(1, seed=1))
        document["comment"] = "hand edit"
        assert not document_validator.is_valid(document)

    def test_rejects_bad_node_type(self, document_validator):
        document = to_document(create_sequence(1, seed=1))
        document["nodes"][0]["type"] = "Blob"
        assert not document_validator.is_valid(document)


class TestLayerSpecSchema:
    GOOD = {
        "name": "night_mode",
        "rules": [
            {"match": {"type": "Character"}, "set": {"scale": 0.8}},
            {"set": {"visible": True}},
        ],
    }

    def test_good_spec_accepted_by_both(self, spec_validator):
        spec_validator.validate(self.GOOD)
        layer = layer_from_spec(self.GOOD)
        assert layer.name == "night_mode"

    @pytest.mark.parametrize(
        "spec",
        [
            {"name": "x", "rules": []},
            {"name": "x", "rules": [{"match": {}, "set": {}}]},
            {"name": "x", "rules": [{"match": {"type": "Blob"}, "set": {"a": 1}}]},
            {"name": "x", "rules": [{"match": {}, "set": {"a": 1}}], "when": "now"},
        ],
    )
    def test_schema_and_compiler_agree_on_rejects(self, spec_validator, spec):
        assert not spec_validator.is_valid(spec)
        with pytest.raises(InvalidValue):
            layer_from_spec(spec)
