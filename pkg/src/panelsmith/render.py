"""Panel composition and deterministic rasterization.

Each panel is four layers drawn back to front: background scene,
foreground characters and objects, then symbols, with a viewport
crop-and-scale applied to the composed canvas at the end. Nearest
neighbor resampling keeps output bytes identical across runs; bilinear
is available behind a flag for softer results.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from PIL import Image

from . import graph as g
from .assets import AssetPool, VisualEntry
from .errors import InvalidValue

PANEL_SIZE = 512
GUTTER = 8

RESAMPLING = {
    "nearest": Image.NEAREST,
    "bilinear": Image.BILINEAR,
}


@dataclass
class ForegroundItem:
    entry: VisualEntry
    node_id: int
    position: tuple[float, float] = (0.5, 0.5)
    scale: float = 1.0
    flip: bool = False
    visible: bool = True


@dataclass
class SymbolItem:
    entry: VisualEntry
    node_id: int
    owner_id: int | None = None
    offset: tuple[float, float] = (0.0, 0.0)


@dataclass
class Viewport:
    dx: float = 0.0
    dy: float = 0.0
    zoom: float = 1.0

    @property
    def is_identity(self) -> bool:
        return self.dx == 0.0 and self.dy == 0.0 and self.zoom == 1.0


@dataclass
class PanelLayers:
    background: VisualEntry | None = None
    foreground: list[ForegroundItem] = field(default_factory=list)
    viewport: Viewport = field(default_factory=Viewport)
    symbols: list[SymbolItem] = field(default_factory=list)


def _pair(value, default=(0.0, 0.0)) -> tuple[float, float]:
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return (float(value[0]), float(value[1]))
    return default


def compose_panel(seq: g.SequenceModel, panel_id: int, pool: AssetPool) -> PanelLayers:
    """Collect a panel subtree into drawable layers.

    The first Scene child supplies the background; Character and Object
    nodes become foreground items in traversal order; Symbol nodes anchor
    to their parent character. Visual misses resolve to placeholders so
    composition is total.
    """
    panel = seq.node(panel_id)
    if panel.type != g.PANEL:
        raise InvalidValue(f"node {panel_id} is not a panel")
    layers = PanelLayers(
        viewport=Viewport(
            dx=float(panel.get("viewport_dx", 0.0)),
            dy=float(panel.get("viewport_dy", 0.0)),
            zoom=float(panel.get("viewport_zoom", 1.0)),
        )
    )
    for node in seq.walk(panel_id):
        if node.id == panel_id:
            continue
        visual = node.get("visual")
        if node.type == g.SCENE:
            if layers.background is None and isinstance(visual, str):
                layers.background = pool.resolve_ref(visual)
            continue
        if node.type == g.SYMBOL:
            parent = seq.node(node.parent) if node.parent is not None else None
            if isinstance(visual, str):
                entry = pool.resolve_ref(visual)
            else:
                entry = VisualEntry(label=node.name, set_name="symbols", placeholder=True)
            layers.symbols.append(
                SymbolItem(
                    entry=entry,
                    node_id=node.id,
                    owner_id=parent.id if parent is not None and parent.type == g.CHARACTER else None,
                    offset=_pair(node.get("offset")),
                )
            )
            continue
        is_character = node.type == g.CHARACTER
        if not is_character and not isinstance(visual, str):
            continue
        if isinstance(visual, str):
            entry = pool.resolve_ref(visual)
        else:
            entry = VisualEntry(label=node.name, set_name="characters", placeholder=True)
        layers.foreground.append(
            ForegroundItem(
                entry=entry,
                node_id=node.id,
                position=_pair(node.get("position"), (0.5, 0.5)),
                scale=float(node.get("scale", 1.0)),
                flip=bool(node.get("flip", False)),
                visible=bool(node.get("visible", True)),
            )
        )
    return layers


def _clamp01(value: float) -> float:
    return min(1.0, max(0.0, value))


def _sprite_box(entry: VisualEntry, center: tuple[float, float], scale: float, size: int) -> tuple[int, int, int, int]:
    """Destination (px, py, w, h) for a sprite, before viewport."""
    with entry.load_image() as img:
        native = img.size
    factor = scale * entry.scale * (size / PANEL_SIZE)
    w = max(1, round(native[0] * factor))
    h = max(1, round(native[1] * factor))
    px = round(center[0] * size - w / 2)
    py = round(center[1] * size - h / 2)
    return px, py, w, h


def _composite(canvas: Image.Image, sprite: Image.Image, px: int, py: int) -> None:
    x0, y0 = max(px, 0), max(py, 0)
    x1 = min(px + sprite.width, canvas.width)
    y1 = min(py + sprite.height, canvas.height)
    if x1 <= x0 or y1 <= y0:
        return
    region = sprite.crop((x0 - px, y0 - py, x1 - px, y1 - py))
    canvas.alpha_composite(region, (x0, y0))


def _symbol_center(item: SymbolItem, layers: PanelLayers) -> tuple[float, float]:
    base = (0.5, 0.5)
    if item.owner_id is not None:
        for fg in layers.foreground:
            if fg.node_id == item.owner_id:
                base = fg.position
                break
    return (_clamp01(base[0] + item.offset[0]), _clamp01(base[1] + item.offset[1]))


def rasterize_panel(
    layers: PanelLayers,
    size: int = PANEL_SIZE,
    resample: str = "nearest",
) -> Image.Image:
    """Alpha-over compositing in declared order onto a white canvas."""
    if size < 1:
        raise InvalidValue("panel size must be positive")
    method = RESAMPLING.get(resample)
    if method is None:
        raise InvalidValue(f"unknown resampling mode {resample!r}")
    canvas = Image.new("RGBA", (size, size), (255, 255, 255, 255))
    if layers.background is not None:
        background = layers.background.load_image().resize((size, size), method)
        canvas.alpha_composite(background)
    for item in layers.foreground:
        if not item.visible:
            continue
        px, py, w, h = _sprite_box(item.entry, item.position, item.scale, size)
        sprite = item.entry.load_image()
        if sprite.size != (w, h):
            sprite = sprite.resize((w, h), method)
        if item.flip:
            sprite = sprite.transpose(Image.FLIP_LEFT_RIGHT)
        _composite(canvas, sprite, px, py)
    for item in layers.symbols:
        center = _symbol_center(item, layers)
        px, py, w, h = _sprite_box(item.entry, center, 1.0, size)
        sprite = item.entry.load_image()
        if sprite.size != (w, h):
            sprite = sprite.resize((w, h), method)
        _composite(canvas, sprite, px, py)
    if not layers.viewport.is_identity:
        canvas = _apply_viewport(canvas, layers.viewport, method)
    return canvas.convert("RGB")


def _apply_viewport(canvas: Image.Image, viewport: Viewport, method: int) -> Image.Image:
    size = canvas.width
    window = max(1, round(size / viewport.zoom))
    cx = (0.5 + viewport.dx / 2.0) * size
    cy = (0.5 + viewport.dy / 2.0) * size
    left = round(cx - window / 2)
    top = round(cy - window / 2)
    left = min(max(left, 0), size - window)
    top = min(max(top, 0), size - window)
    cropped = canvas.crop((left, top, left + window, top + window))
    return cropped.resize((size, size), method)


def foreground_bboxes(layers: PanelLayers, size: int = PANEL_SIZE) -> dict[int, tuple[int, int, int, int]]:
    """Pre-viewport pixel boxes (x0, y0, x1, y1) per drawable node id."""
    boxes: dict[int, tuple[int, int, int, int]] = {}
    for item in layers.foreground:
        if not item.visible:
            continue
        px, py, w, h = _sprite_box(item.entry, item.position, item.scale, size)
        boxes[item.node_id] = (max(px, 0), max(py, 0), min(px + w, size), min(py + h, size))
    for item in layers.symbols:
        center = _symbol_center(item, layers)
        px, py, w, h = _sprite_box(item.entry, center, 1.0, size)
        boxes[item.node_id] = (max(px, 0), max(py, 0), min(px + w, size), min(py + h, size))
    return boxes


@dataclass(frozen=True)
class StripLayout:
    panel_size: int = PANEL_SIZE
    gutter: int = GUTTER

    def __post_init__(self) -> None:
        if self.panel_size < 1:
            raise InvalidValue("panel size must be positive")
        if self.gutter < 0:
            raise InvalidValue("gutter must be non-negative")

    def strip_width(self, panel_count: int) -> int:
        if panel_count < 1:
            return 0
        return panel_count * self.panel_size + (panel_count - 1) * self.gutter


@dataclass
class RenderResult:
    strip: Image.Image | None
    panels: dict[int, Image.Image]
    document: dict


def render_sequence(
    seq: g.SequenceModel,
    pool: AssetPool,
    layout: StripLayout | None = None,
    resample: str = "nearest",
) -> RenderResult:
    """Rasterize every panel and concatenate them with gutters."""
    layout = layout or StripLayout()
    panels: dict[int, Image.Image] = {}
    for panel_id in seq.panel_ids():
        layers = compose_panel(seq, panel_id, pool)
        panels[panel_id] = rasterize_panel(layers, layout.panel_size, resample)
    document = seq.to_document()
    if not panels:
        return RenderResult(strip=None, panels={}, document=document)
    width = layout.strip_width(len(panels))
    strip = Image.new("RGB", (width, layout.panel_size), (255, 255, 255))
    x = 0
    for image in panels.values():
        strip.paste(image, (x, 0))
        x += layout.panel_size + layout.gutter
    return RenderResult(strip=strip, panels=panels, document=document)


def png_bytes(image: Image.Image) -> bytes:
    buffer = io.BytesIO()
    image.save(buffer, format="PNG")
    return buffer.getvalue()
