"""Regenerate the bundled placeholder art under src/panelsmith/data/sets/.

All drawings are original minimal shapes (no fonts, no external images) so
the files are safe to redistribute and cheap to regenerate. Run from the
repository root:

    python3 scripts/make_placeholder_art.py
"""

from __future__ import annotations

import math
from pathlib import Path

from PIL import Image, ImageDraw

ROOT = Path(__file__).resolve().parents[1] / "src" / "panelsmith" / "data" / "sets"


def canvas(size: tuple[int, int], color=(0, 0, 0, 0)) -> tuple[Image.Image, ImageDraw.ImageDraw]:
    img = Image.new("RGBA", size, color)
    return img, ImageDraw.Draw(img)


def save(img: Image.Image, set_name: str, label: str) -> None:
    target = ROOT / set_name / f"{label}.png"
    target.parent.mkdir(parents=True, exist_ok=True)
    img.save(target, format="PNG")
    print(f"wrote {target.relative_to(ROOT.parents[3])}")


def star_points(cx, cy, outer, inner, spikes, rotation=-math.pi / 2):
    points = []
    for i in range(spikes * 2):
        radius = outer if i % 2 == 0 else inner
        angle = rotation + i * math.pi / spikes
        points.append((cx + radius * math.cos(angle), cy + radius * math.sin(angle)))
    return points


def symbol_anger() -> Image.Image:
    # Four rounded lobes in a cross: the classic comic "anger vein".
    img, draw = canvas((128, 128))
    red = (220, 40, 40, 255)
    for angle in (45, 135, 225, 315):
        rad = math.radians(angle)
        cx, cy = 64 + 30 * math.cos(rad), 64 + 30 * math.sin(rad)
        draw.ellipse((cx - 22, cy - 22, cx + 22, cy + 22), fill=red)
    draw.ellipse((44, 44, 84, 84), fill=(0, 0, 0, 0))
    return img


def symbol_quick_moving() -> Image.Image:
    img, draw = canvas((128, 128))
    ink = (40, 60, 200, 255)
    for i, y in enumerate((34, 64, 94)):
        draw.polygon([(120, y - 6), (120, y + 6), (18 + i * 14, y)], fill=ink)
    return img


def symbol_slow_moving() -> Image.Image:
    img, draw = canvas((128, 128))
    ink = (110, 110, 130, 255)
    for i in range(4):
        x = 18 + i * 28
        r = 6 + i * 2
        draw.ellipse((x - r, 64 - r, x + r, 64 + r), fill=ink)
    return img


def symbol_anxious() -> Image.Image:
    # Sweat drop with two small echo drops.
    img, draw = canvas((128, 128))
    blue = (70, 150, 235, 255)
    draw.polygon([(64, 18), (92, 74), (36, 74)], fill=blue)
    draw.ellipse((36, 52, 92, 108), fill=blue)
    draw.ellipse((20, 28, 34, 42), fill=blue)
    draw.ellipse((98, 22, 108, 32), fill=blue)
    return img


def symbol_collision() -> Image.Image:
    img, draw = canvas((128, 128))
    draw.polygon(star_points(64, 64, 60, 26, 10), fill=(245, 150, 20, 255))
    draw.polygon(star_points(64, 64, 40, 17, 10), fill=(255, 230, 60, 255))
    return img


def symbol_relieved() -> Image.Image:
    # A drifting sigh puff.
    img, draw = canvas((128, 128))
    gray = (200, 210, 220, 255)
    for cx, cy, r in ((50, 70, 26), (74, 60, 20), (92, 76, 14), (106, 58, 8)):
        draw.ellipse((cx - r, cy - r, cx + r, cy + r), fill=gray)
    return img


def _bolt(draw, points, fill, outline=None):
    draw.polygon(points, fill=fill, outline=outline)


def symbol_shock() -> Image.Image:
    img, draw = canvas((128, 128))
    yellow = (250, 210, 40, 255)
    _bolt(draw, [(70, 8), (38, 66), (58, 66), (44, 120), (92, 52), (68, 52), (88, 8)], yellow)
    return img


def symbol_big_shock() -> Image.Image:
    img, draw = canvas((128, 128))
    for spike in star_points(64, 64, 62, 50, 12):
        draw.line([(64, 64), spike], fill=(230, 60, 60, 255), width=3)
    yellow = (250, 210, 40, 255)
    _bolt(draw, [(66, 4), (30, 70), (54, 70), (38, 124), (98, 50), (70, 50), (94, 4)], yellow)
    return img


def character(body_color, accent) -> Image.Image:
    img, draw = canvas((160, 224))
    # Head, torso, feet: a deliberately plain mascot silhouette.
    draw.ellipse((40, 8, 120, 88), fill=body_color)
    draw.rounded_rectangle((48, 84, 112, 192), radius=24, fill=body_color)
    draw.ellipse((44, 188, 76, 216), fill=accent)
    draw.ellipse((84, 188, 116, 216), fill=accent)
    # Face: two eyes and a mouth line keep orientation readable when flipped.
    draw.ellipse((58, 36, 72, 50), fill=(20, 20, 30, 255))
    draw.ellipse((88, 36, 102, 50), fill=(20, 20, 30, 255))
    draw.arc((62, 50, 98, 74), start=20, end=160, fill=(20, 20, 30, 255), width=4)
    draw.ellipse((52, 108, 68, 124), fill=accent)
    return img


def scene_garden() -> Image.Image:
    img, draw = canvas((512, 512), (170, 220, 255, 255))
    draw.rectangle((0, 320, 512, 512), fill=(110, 190, 90, 255))
    draw.ellipse((380, 40, 470, 130), fill=(255, 220, 80, 255))
    for i in range(7):
        x = 30 + i * 70
        draw.ellipse((x, 380 + (i % 3) * 30, x + 22, 402 + (i % 3) * 30), fill=(235, 90, 140, 255))
        draw.rectangle((x + 9, 402 + (i % 3) * 30, x + 13, 430 + (i % 3) * 30), fill=(60, 130, 60, 255))
    return img.convert("RGB").convert("RGBA")


def scene_forest() -> Image.Image:
    img, draw = canvas((512, 512), (200, 230, 235, 255))
    draw.rectangle((0, 360, 512, 512), fill=(90, 120, 70, 255))
    for i in range(6):
        x = 20 + i * 85
        draw.polygon([(x, 380), (x + 70, 380), (x + 35, 160 + (i % 2) * 60)], fill=(40, 110 + (i % 3) * 15, 55, 255))
        draw.rectangle((x + 28, 380, x + 42, 430), fill=(100, 70, 40, 255))
    return img.convert("RGB").convert("RGBA")


def scene_beach() -> Image.Image:
    img, draw = canvas((512, 512), (150, 210, 250, 255))
    draw.rectangle((0, 250, 512, 380), fill=(60, 140, 220, 255))
    draw.polygon([(0, 380), (512, 360), (512, 512), (0, 512)], fill=(240, 215, 150, 255))
    draw.ellipse((60, 40, 140, 120), fill=(255, 250, 200, 255))
    for i in range(4):
        y = 270 + i * 26
        draw.arc((40 + i * 90, y, 140 + i * 90, y + 24), start=180, end=360, fill=(220, 240, 255, 255), width=4)
    return img.convert("RGB").convert("RGBA")


def scene_city() -> Image.Image:
    img, draw = canvas((512, 512), (215, 225, 240, 255))
    draw.rectangle((0, 420, 512, 512), fill=(90, 95, 105, 255))
    heights = (160, 230, 120, 280, 190, 250)
    for i, h in enumerate(heights):
        x = i * 86
        draw.rectangle((x + 8, 420 - h, x + 78, 420), fill=(120 + (i % 3) * 25, 125 + (i % 3) * 25, 140, 255))
        for wy in range(420 - h + 16, 404, 28):
            for wx in range(x + 18, x + 66, 20):
                draw.rectangle((wx, wy, wx + 8, wy + 12), fill=(245, 235, 160, 255))
    return img.convert("RGB").convert("RGBA")


def scene_room() -> Image.Image:
    img, draw = canvas((512, 512), (235, 225, 205, 255))
    draw.rectangle((0, 365, 512, 512), fill=(175, 130, 90, 255))
    for x in range(0, 512, 64):
        draw.line([(x, 365), (x - 40, 512)], fill=(150, 108, 74, 255), width=3)
    draw.rectangle((330, 90, 470, 230), fill=(170, 215, 250, 255), outline=(120, 95, 70, 255), width=8)
    draw.line([(400, 90), (400, 230)], fill=(120, 95, 70, 255), width=6)
    draw.line([(330, 160), (470, 160)], fill=(120, 95, 70, 255), width=6)
    return img.convert("RGB").convert("RGBA")


def object_apple() -> Image.Image:
    img, draw = canvas((96, 96))
    draw.ellipse((14, 24, 82, 88), fill=(210, 40, 50, 255))
    draw.rectangle((45, 8, 51, 28), fill=(100, 70, 40, 255))
    draw.ellipse((52, 10, 74, 26), fill=(90, 170, 70, 255))
    draw.ellipse((28, 36, 44, 56), fill=(240, 120, 120, 255))
    return img


def object_ball() -> Image.Image:
    img, draw = canvas((96, 96))
    draw.ellipse((8, 8, 88, 88), fill=(250, 250, 250, 255), outline=(40, 40, 40, 255), width=4)
    draw.chord((8, 8, 88, 88), start=200, end=340, fill=(230, 70, 60, 255))
    draw.line([(12, 40), (84, 40)], fill=(40, 40, 40, 255), width=4)
    return img


def object_book() -> Image.Image:
    img, draw = canvas((96, 96))
    draw.polygon([(10, 26), (48, 16), (86, 26), (86, 74), (48, 84), (10, 74)], fill=(90, 110, 200, 255))
    draw.line([(48, 16), (48, 84)], fill=(245, 245, 245, 255), width=5)
    for y in (34, 46, 58):
        draw.line([(18, y + 4), (42, y)], fill=(225, 230, 250, 255), width=3)
        draw.line([(54, y), (78, y + 4)], fill=(225, 230, 250, 255), width=3)
    return img


def object_tree() -> Image.Image:
    img, draw = canvas((96, 96))
    draw.rectangle((42, 56, 54, 90), fill=(100, 70, 40, 255))
    draw.polygon([(48, 4), (86, 56), (10, 56)], fill=(40, 130, 60, 255))
    draw.polygon([(48, 22), (78, 66), (18, 66)], fill=(55, 150, 70, 255))
    return img


def object_rock() -> Image.Image:
    img, draw = canvas((96, 96))
    draw.polygon([(16, 78), (10, 52), (34, 28), (66, 24), (88, 48), (80, 78)], fill=(130, 130, 140, 255))
    draw.polygon([(34, 28), (52, 40), (66, 24)], fill=(160, 160, 170, 255))
    return img


def main() -> None:
    symbols = {
        "anger": symbol_anger,
        "quick_moving": symbol_quick_moving,
        "slow_moving": symbol_slow_moving,
        "anxious": symbol_anxious,
        "collision": symbol_collision,
        "relieved": symbol_relieved,
        "shock": symbol_shock,
        "big_shock": symbol_big_shock,
    }
    for label, build in symbols.items():
        save(build(), "symbols", label)
    save(character((90, 180, 170, 255), (50, 120, 115, 255)), "characters", "char_a")
    save(character((235, 160, 80, 255), (180, 105, 45, 255)), "characters", "char_b")
    scenes = {
        "garden": scene_garden,
        "forest": scene_forest,
        "beach": scene_beach,
        "city": scene_city,
        "room": scene_room,
    }
    for label, build in scenes.items():
        save(build(), "scenes", label)
    objects = {
        "apple": object_apple,
        "ball": object_ball,
        "book": object_book,
        "tree": object_tree,
        "rock": object_rock,
    }
    for label, build in objects.items():
        save(build(), "objects", label)


if __name__ == "__main__":
    main()
