"""Tiny 5x7 bitmap font for deterministic text stamping.

Rendering labels through a real font engine would tie output bytes to
whatever font files and rasterizer versions the host happens to have.
Placeholder art and stub images must be byte-stable across machines, so
the glyphs are hardcoded bitmaps instead.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7

# Each glyph is seven rows of five bits, most significant bit leftmost.
_FONT: dict[str, tuple[int, ...]] = {
    "A": (0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001),
    "B": (0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110),
    "C": (0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110),
    "D": (0b11110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b11110),
    "E": (0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111),
    "F": (0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000),
    "G": (0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111),
    "H": (0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001),
    "I": (0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110),
    "J": (0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100),
    "K": (0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001),
    "L": (0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111),
    "M": (0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001),
    "N": (0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001, 0b10001),
    "O": (0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110),
    "P": (0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000),
    "Q": (0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101),
    "R": (0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001),
    "S": (0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110),
    "T": (0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100),
    "U": (0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110),
    "V": (0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100),
    "W": (0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b11011, 0b10001),
    "X": (0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001),
    "Y": (0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100),
    "Z": (0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111),
    "0": (0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110),
    "1": (0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110),
    "2": (0b01110, 0b10001, 0b00001, 0b00110, 0b01000, 0b10000, 0b11111),
    "3": (0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110),
    "4": (0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010),
    "5": (0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110),
    "6": (0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110),
    "7": (0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000),
    "8": (0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110),
    "9": (0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100),
    " ": (0, 0, 0, 0, 0, 0, 0),
    "_": (0, 0, 0, 0, 0, 0, 0b11111),
    "-": (0, 0, 0, 0b01110, 0, 0, 0),
    "/": (0b00001, 0b00010, 0b00010, 0b00100, 0b01000, 0b01000, 0b10000),
    ".": (0, 0, 0, 0, 0, 0b00100, 0b00100),
    ":": (0, 0b00100, 0b00100, 0, 0b00100, 0b00100, 0),
    "?": (0b01110, 0b10001, 0b00001, 0b00110, 0b00100, 0b00000, 0b00100),
}


def glyph_rows(char: str) -> tuple[int, ...]:
    """Return the 7-row bitmap for a character, '?' for anything unknown."""
    return _FONT.get(char.upper(), _FONT["?"])


def text_pixels(
    text: str,
    origin: tuple[int, int] = (0, 0),
    scale: int = 1,
    tracking: int = 1,
) -> Iterator[tuple[int, int]]:
    """Yield (x, y) coordinates of every lit pixel of `text`.

    `tracking` is the blank column count between glyph cells, in glyph
    units (it scales with `scale`).
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    ox, oy = origin
    advance = (GLYPH_WIDTH + tracking) * scale
    for index, char in enumerate(text):
        rows = glyph_rows(char)
        cell_x = ox + index * advance
        for row_y, row in enumerate(rows):
            for col in range(GLYPH_WIDTH):
                if not (row >> (GLYPH_WIDTH - 1 - col)) & 1:
                    continue
                for dy in range(scale):
                    for dx in range(scale):
                        yield cell_x + col * scale + dx, oy + row_y * scale + dy


def text_width(text: str, scale: int = 1, tracking: int = 1) -> int:
    if not text:
        return 0
    return (len(text) * (GLYPH_WIDTH + tracking) - tracking) * scale


def stamp(
    array: np.ndarray,
    text: str,
    origin: tuple[int, int],
    scale: int = 1,
    color: tuple[int, ...] = (255, 255, 255),
) -> None:
    """Write `text` into an HxWxC uint8 array in place, clipping at edges."""
    height, width = array.shape[:2]
    pixel = np.asarray(color, dtype=array.dtype)
    for x, y in text_pixels(text, origin, scale):
        if 0 <= x < width and 0 <= y < height:
            array[y, x, ...] = pixel
