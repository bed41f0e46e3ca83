"""Arousal scoring: project sentiment labels onto emotion anchors.

Anchor emotions carry a coarse arousal value (high=1, medium=0, low=-1).
Each sentiment label is embedded, compared to every anchor, reduced to its
two nearest anchors, and scored by a distance-weighted blend of their
values; the resulting raw scores are min-max normalized onto [-1, 1].

Two blend modes exist. ``inverse`` (the default) weights the *nearer*
anchor more, so a label sitting on top of an anchor inherits its value.
``literal`` applies the weights the other way around, which pulls scores
toward the farther anchor; it is kept selectable for comparison runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidValue, UnknownLabel

AROUSAL_CLASS_VALUES = {"high": 1, "medium": 0, "low": -1}


@dataclass(frozen=True)
class EmotionAnchor:
    label: str
    arousal_class: str
    value: int

    def __post_init__(self) -> None:
        expected = AROUSAL_CLASS_VALUES.get(self.arousal_class)
        if expected is None:
            raise InvalidValue(f"unknown arousal class {self.arousal_class!r}")
        if self.value != expected:
            raise InvalidValue(
                f"anchor {self.label!r}: class {self.arousal_class!r} implies value {expected}"
            )

    @classmethod
    def of(cls, label: str, arousal_class: str) -> "EmotionAnchor":
        return cls(label, arousal_class, AROUSAL_CLASS_VALUES[arousal_class])


@dataclass
class ArousalTable:
    """Per-label arousal scores, all within [-1, 1]."""

    entries: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label, score in self.entries.items():
            if not -1.0 <= score <= 1.0:
                raise InvalidValue(f"arousal score for {label!r} outside [-1, 1]: {score}")

    def __getitem__(self, label: str) -> float:
        return self.entries[label]

    def __contains__(self, label: str) -> bool:
        return label in self.entries

    def labels(self) -> list[str]:
        return list(self.entries)


class EmbeddingProvider(Protocol):
    def embed(self, label: str) -> np.ndarray: ...


class SentimentProvider(Protocol):
    def classify(self, text: str) -> dict[str, float]: ...


def load_anchors(path=None) -> list[EmotionAnchor]:
    """Anchor set from a JSON file; defaults to the bundled circumplex set."""
    if path is None:
        text = resources.files("panelsmith.data").joinpath("anchors.json").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    return [EmotionAnchor.of(label, cls) for cls, labels in data.items() for label in labels]


def distance_matrix(
    labels: Sequence[str],
    anchors: Sequence[EmotionAnchor],
    embed: EmbeddingProvider,
) -> np.ndarray:
    """Pairwise Euclidean distances, one row per label, one column per anchor."""
    if len(labels) < 1 or len(anchors) < 2:
        raise InvalidValue("need at least one label and two anchors")
    label_vecs = [np.asarray(embed.embed(s), dtype=float) for s in labels]
    anchor_vecs = [np.asarray(embed.embed(a.label), dtype=float) for a in anchors]
    dims = {v.shape for v in (*label_vecs, *anchor_vecs)}
    if len(dims) != 1:
        raise DimensionMismatch(f"embedding dimensions disagree: {sorted(dims)}")
    S = np.stack(label_vecs)
    A = np.stack(anchor_vecs)
    return np.linalg.norm(S[:, None, :] - A[None, :, :], axis=2)


def mask_two_nearest(row: np.ndarray) -> np.ndarray:
    """Keep the two smallest entries; everything else becomes NaN.

    Ties break toward the lower index (stable sort). Length-2 rows pass
    through unchanged.
    """
    row = np.asarray(row, dtype=float)
    if row.ndim != 1 or row.size < 2:
        raise InvalidValue("row must be a vector of length >= 2")
    keep = np.argsort(row, kind="stable")[:2]
    masked = np.full_like(row, np.nan)
    masked[keep] = row[keep]
    return masked


def arousal_scores(
    masked: np.ndarray,
    anchors: Sequence[EmotionAnchor],
    mode: str = "inverse",
) -> np.ndarray:
    """Blend the two retained anchor values per row into one raw score.

    With retained distances (d1, d2) at anchor values (v1, v2), in index
    order: ``literal`` computes (d1*v1 + d2*v2)/(d1+d2), ``inverse``
    computes (d2*v1 + d1*v2)/(d1+d2). Coincident labels (d1+d2 == 0) take
    the first retained anchor's value.
    """
    if mode not in ("inverse", "literal"):
        raise InvalidValue(f"unknown mode {mode!r}")
    masked = np.atleast_2d(np.asarray(masked, dtype=float))
    if masked.shape[1] != len(anchors):
        raise DimensionMismatch("masked matrix width must equal the anchor count")
    values = np.array([a.value for a in anchors], dtype=float)
    out = np.empty(masked.shape[0])
    for i, row in enumerate(masked):
        retained = np.flatnonzero(~np.isnan(row))
        if retained.size != 2:
            raise InvalidValue(f"row {i} retains {retained.size} entries, expected 2")
        (j1, j2) = retained
        d1, d2 = row[j1], row[j2]
        v1, v2 = values[j1], values[j2]
        total = d1 + d2
        if total == 0:
            out[i] = v1
        elif mode == "literal":
            out[i] = (d1 * v1 + d2 * v2) / total
        else:
            out[i] = (d2 * v1 + d1 * v2) / total
    return out


def normalize_scores(raw: Iterable[float]) -> np.ndarray:
    """Affine min-max map onto [-1, 1]; a constant vector maps to zeros."""
    raw = np.asarray(list(raw), dtype=float)
    if raw.size == 0:
        raise InvalidValue("cannot normalize an empty score vector")
    lo, hi = raw.min(), raw.max()
    if lo == hi:
        return np.zeros_like(raw)
    return -1.0 + 2.0 * (raw - lo) / (hi - lo)


def build_arousal_table(
    labels: Sequence[str],
    anchors: Sequence[EmotionAnchor],
    embed: EmbeddingProvider,
    mode: str = "inverse",
) -> ArousalTable:
    """Full pipeline over a whole label set, normalized once at build time."""
    matrix = distance_matrix(labels, anchors, embed)
    masked = np.stack([mask_two_nearest(row) for row in matrix])
    raw = arousal_scores(masked, anchors, mode=mode)
    normalized = normalize_scores(raw)
    return ArousalTable(entries={s: float(v) for s, v in zip(labels, normalized)})


def action_arousal(
    action_text: str,
    sentiment: SentimentProvider,
    table: ArousalTable | Mapping[str, float],
) -> float:
    """Probability-weighted arousal of a piece of action text, in [-1, 1]."""
    probs = sentiment.classify(action_text)
    score = 0.0
    for label, prob in probs.items():
        if label not in table:
            raise UnknownLabel(f"sentiment label {label!r} missing from the arousal table")
        score += prob * table[label]
    return float(min(1.0, max(-1.0, score)))
