"""Named visual sets and semantic-to-visual resolution.

A visual property on a node is the string "set/label" (for example
"scenes/garden"). The pool maps it to an image entry; misses come back as
flagged placeholder entries rather than failures so a render can always
complete and visibly marks what is missing.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import glyphs
from .errors import InvalidValue, PathNotFound, UnknownSet, UnsupportedFormat

PNG_SUFFIXES = {".png"}

SYMBOL_CATEGORIES = (
    "anger",
    "quick_moving",
    "slow_moving",
    "anxious",
    "collision",
    "relieved",
    "shock",
    "big_shock",
)

_PLACEHOLDER_SIZE = 128


def normalize_label(stem: str) -> str:
    return stem.strip().lower().replace(" ", "_")


def parse_visual_ref(value: str) -> tuple[str, str]:
    """Split a "set/label" visual reference."""
    if not isinstance(value, str) or "/" not in value:
        raise InvalidValue(f"visual reference {value!r} is not of the form set/label")
    set_name, _, label = value.partition("/")
    if not set_name or not label:
        raise InvalidValue(f"visual reference {value!r} is not of the form set/label")
    return set_name, normalize_label(label)


def visual_ref(set_name: str, label: str) -> str:
    return f"{set_name}/{label}"


@dataclass(frozen=True)
class VisualEntry:
    label: str
    set_name: str
    source: bytes | Path | None = None
    anchor: tuple[float, float] = (0.5, 0.5)
    scale: float = 1.0
    placeholder: bool = False

    def load_image(self) -> Image.Image:
        """Decode to RGBA; placeholders draw their own labeled gray box."""
        if self.placeholder or self.source is None:
            return _placeholder_image(self.label)
        if isinstance(self.source, bytes):
            with Image.open(io.BytesIO(self.source)) as img:
                return img.convert("RGBA")
        with Image.open(self.source) as img:
            return img.convert("RGBA")


def _placeholder_image(label: str) -> Image.Image:
    side = _PLACEHOLDER_SIZE
    array = np.full((side, side, 4), (176, 176, 176, 255), dtype=np.uint8)
    array[0:3, :] = array[-3:, :] = (96, 96, 96, 255)
    array[:, 0:3] = array[:, -3:] = (96, 96, 96, 255)
    text = label[:10] if label else "?"
    x = max(4, (side - glyphs.text_width(text, scale=2)) // 2)
    glyphs.stamp(array, text, (x, side // 2 - glyphs.GLYPH_HEIGHT), scale=2, color=(40, 40, 40, 255))
    return Image.fromarray(array, mode="RGBA")


@dataclass
class VisualSet:
    name: str
    entries: dict[str, VisualEntry] = field(default_factory=dict)

    def labels(self) -> list[str]:
        return sorted(self.entries)


class AssetPool:
    """All visual sets known to one engine instance."""

    def __init__(self) -> None:
        self._sets: dict[str, VisualSet] = {}
        self.warnings: list[str] = []

    def set_names(self) -> list[str]:
        return sorted(self._sets)

    def get_set(self, set_name: str) -> VisualSet:
        try:
            return self._sets[set_name]
        except KeyError:
            raise UnknownSet(f"no visual set named {set_name!r}") from None

    def labels(self, set_name: str) -> list[str]:
        return self.get_set(set_name).labels()

    def _ensure_set(self, set_name: str) -> VisualSet:
        return self._sets.setdefault(set_name, VisualSet(name=set_name))

    def add_entry(
        self,
        set_name: str,
        label: str,
        source: bytes | Path,
        anchor: tuple[float, float] = (0.5, 0.5),
        scale: float = 1.0,
    ) -> VisualEntry:
        label = normalize_label(label)
        if isinstance(source, bytes):
            if not source.startswith(b"\x89PNG\r\n\x1a\n"):
                raise UnsupportedFormat(f"{set_name}/{label}: payload is not a PNG")
        vset = self._ensure_set(set_name)
        if label in vset.entries:
            self.warnings.append(f"overwrote {set_name}/{label}")
        entry = VisualEntry(label=label, set_name=set_name, source=source, anchor=anchor, scale=scale)
        vset.entries[label] = entry
        return entry

    def add_visuals(self, set_name: str, path: str | Path) -> int:
        """Import a PNG file or every PNG in a directory; returns entry count."""
        target = Path(path)
        if not target.exists():
            raise PathNotFound(f"no such path: {target}")
        if target.is_dir():
            files = sorted(
                f for f in target.iterdir() if f.is_file() and f.suffix.lower() in PNG_SUFFIXES
            )
        else:
            if target.suffix.lower() not in PNG_SUFFIXES:
                raise UnsupportedFormat(f"{target.name}: only PNG images are supported")
            files = [target]
        count = 0
        for file in files:
            try:
                with Image.open(file) as img:
                    img.verify()
            except (UnidentifiedImageError, OSError) as exc:
                raise UnsupportedFormat(f"{file.name}: not a decodable image") from exc
            self.add_entry(set_name, file.stem, file.resolve())
            count += 1
        return count

    def resolve(self, label: str, set_name: str) -> VisualEntry:
        """Entry for a label, or a flagged placeholder when unmapped."""
        vset = self.get_set(set_name)
        entry = vset.entries.get(normalize_label(label))
        if entry is not None:
            return entry
        return VisualEntry(label=normalize_label(label), set_name=set_name, placeholder=True)

    def resolve_ref(self, ref: str) -> VisualEntry:
        set_name, label = parse_visual_ref(ref)
        return self.resolve(label, set_name)


_symbol_table: dict[str, str] | None = None


def symbol_table() -> dict[str, str]:
    global _symbol_table
    if _symbol_table is None:
        text = resources.files("panelsmith.data").joinpath("symbol_map.json").read_text()
        _symbol_table = json.loads(text)
    return dict(_symbol_table)


def symbol_for(action: str, mapping: dict[str, str] | None = None) -> str | None:
    """Symbol label for an action; None when the action carries no symbol."""
    table = mapping if mapping is not None else symbol_table()
    return table.get(action)


def builtin_pool() -> AssetPool:
    """Pool preloaded with the bundled symbol, character, scene and object art."""
    pool = AssetPool()
    root = resources.files("panelsmith.data").joinpath("sets")
    for set_dir in root.iterdir():
        if not set_dir.is_dir():
            continue
        for file in sorted(set_dir.iterdir(), key=lambda f: f.name):
            if not file.name.lower().endswith(".png"):
                continue
            label = normalize_label(file.name[: -len(".png")])
            pool.add_entry(set_dir.name, label, file.read_bytes())
    return pool
