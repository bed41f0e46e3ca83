"""Model adapters: deterministic offline stubs and remote HTTP clients.

The wire format is our own minimal JSON contract (POST /generate, POST
/classify), not any vendor's. Adapters for specific hosted models belong
behind these classes; nothing else in the package talks to the network.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import io
import json
import re
import time
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

import httpx
import numpy as np
from PIL import Image

from . import glyphs
from .errors import BadResponse, ExhaustedRetries, Timeout

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"

_TOKEN_RE = re.compile(r"[a-z']+")


class ImageProvider(Protocol):
    def generate(self, prompt: str, base: bytes | None = None) -> bytes: ...


def _load_bundled(name: str) -> dict:
    text = resources.files("panelsmith.data").joinpath(name).read_text("utf-8")
    return json.loads(text)


class StaticEmbeddings:
    """Bundled 2-D valence/arousal coordinates for emotion labels.

    Labels outside the bundled table get a stable hash-derived vector so
    the pipeline never stalls on vocabulary drift; those vectors are
    arbitrary but reproducible.
    """

    def __init__(self, path: str | None = None) -> None:
        if path is None:
            payload = _load_bundled("embeddings.json")
        else:
            with open(path, encoding="utf-8") as handle:
                payload = json.load(handle)
        self.dimensions = int(payload["dimensions"])
        self._vectors = {
            label: np.asarray(coords, dtype=float)
            for label, coords in payload["vectors"].items()
        }
        for label, vector in self._vectors.items():
            if vector.shape != (self.dimensions,):
                raise ValueError(f"vector for {label!r} is not {self.dimensions}-dimensional")

    def known_labels(self) -> list[str]:
        return sorted(self._vectors)

    def embed(self, label: str) -> np.ndarray:
        key = label.strip().lower()
        vector = self._vectors.get(key)
        if vector is not None:
            return vector.copy()
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        coords = []
        for index in range(self.dimensions):
            chunk = digest[4 * index : 4 * index + 4]
            value = int.from_bytes(chunk, "big") / 0xFFFFFFFF
            coords.append(2.0 * value - 1.0)
        return np.asarray(coords, dtype=float)


class LexiconSentiment:
    """Keyword-count classifier over the bundled emotion lexicon.

    Each keyword occurrence adds one unit of weight to its label; the
    neutral label always receives the smoothing mass so empty or
    out-of-vocabulary text still yields a valid distribution.
    """

    def __init__(self, path: str | None = None, smoothing: float = 0.01) -> None:
        if smoothing <= 0:
            raise ValueError("smoothing must be positive")
        if path is None:
            lexicon = _load_bundled("lexicon.json")
        else:
            with open(path, encoding="utf-8") as handle:
                lexicon = json.load(handle)
        self._keywords = {label: frozenset(words) for label, words in lexicon.items()}
        if "neutral" not in self._keywords:
            self._keywords["neutral"] = frozenset()
        self._smoothing = smoothing

    def labels(self) -> list[str]:
        return sorted(self._keywords)

    def classify(self, text: str) -> dict[str, float]:
        tokens = _TOKEN_RE.findall(text.lower())
        weights = {label: 0.0 for label in self._keywords}
        for token in tokens:
            for label, words in self._keywords.items():
                if token in words:
                    weights[label] += 1.0
        weights["neutral"] += self._smoothing
        total = sum(weights.values())
        return {label: weight / total for label, weight in weights.items()}


class StubImageProvider:
    """Procedural stand-in for a text-to-image model.

    Output is a hash-seeded color field with the prompt stamped on top:
    same (prompt, base) always produces identical PNG bytes, and any
    change to either input changes the seed.
    """

    def __init__(self, size: tuple[int, int] = (512, 512)) -> None:
        width, height = size
        if width < 1 or height < 1:
            raise ValueError("size must be positive")
        self.size = (int(width), int(height))

    def generate(self, prompt: str, base: bytes | None = None) -> bytes:
        width, height = self.size
        material = hashlib.sha256(prompt.encode("utf-8"))
        material.update(b"\x00")
        material.update(hashlib.sha256(base or b"").digest())
        digest = material.digest()

        xs = np.linspace(0.0, 1.0, width)
        ys = np.linspace(0.0, 1.0, height)
        grid_x, grid_y = np.meshgrid(xs, ys)
        array = np.empty((height, width, 3), dtype=np.uint8)
        for channel in range(3):
            fx, fy, phase, depth = (digest[4 * channel + k] / 255.0 for k in range(4))
            wave = np.sin(
                2.0 * np.pi * ((1.0 + 3.0 * fx) * grid_x + (1.0 + 3.0 * fy) * grid_y + phase)
            )
            field = 0.55 + 0.45 * wave * (0.35 + 0.65 * depth)
            array[:, :, channel] = np.clip(field * 255.0, 0, 255).astype(np.uint8)

        if base is not None:
            with Image.open(io.BytesIO(base)) as blended:
                resized = blended.convert("RGB").resize((width, height), Image.NEAREST)
            array = ((array.astype(np.uint16) + np.asarray(resized, dtype=np.uint16)) // 2).astype(
                np.uint8
            )

        label = prompt[:40] if prompt else "?"
        glyphs.stamp(array, label, (8, 8), scale=2, color=(16, 16, 16))
        glyphs.stamp(array, label, (7, 7), scale=2, color=(250, 250, 250))
        return encode_png(array)


def encode_png(array: np.ndarray) -> bytes:
    buffer = io.BytesIO()
    Image.fromarray(array, mode="RGB").save(buffer, format="PNG")
    return buffer.getvalue()


@dataclass(frozen=True)
class RemoteProviderConfig:
    endpoint: str
    timeout: float = 10.0
    retries: int = 2
    backoff: float = 0.05

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")
        if self.backoff < 0:
            raise ValueError("backoff must be non-negative")


def _post_json(config: RemoteProviderConfig, payload: dict) -> dict:
    """POST once per attempt with exponential backoff between attempts.

    A definitive answer (2xx/3xx/4xx) stops the loop: 4xx and malformed
    bodies raise BadResponse immediately because retrying a rejected
    request cannot help. Connection failures and 5xx are transient and
    consume attempts; a run of nothing but timeouts reports Timeout so
    callers can tell a slow service from a broken one.
    """
    failures: list[str] = []
    for attempt in range(config.retries + 1):
        if attempt:
            time.sleep(config.backoff * (2 ** (attempt - 1)))
        try:
            response = httpx.post(config.endpoint, json=payload, timeout=config.timeout)
        except httpx.TimeoutException:
            failures.append("timeout")
            continue
        except httpx.HTTPError:
            failures.append("transient")
            continue
        if response.status_code >= 500:
            failures.append("transient")
            continue
        if response.status_code >= 400:
            raise BadResponse(f"{config.endpoint} answered {response.status_code}")
        try:
            body = response.json()
        except (json.JSONDecodeError, ValueError) as exc:
            raise BadResponse(f"{config.endpoint} returned an undecodable body") from exc
        if not isinstance(body, dict):
            raise BadResponse(f"{config.endpoint} returned a non-object body")
        return body
    if failures and all(kind == "timeout" for kind in failures):
        raise Timeout(f"{config.endpoint} timed out on {len(failures)} attempt(s)")
    raise ExhaustedRetries(f"{config.endpoint} still failing after {len(failures)} attempt(s)")


class RemoteImageProvider:
    """Client for a POST /generate service speaking the minimal contract."""

    def __init__(self, config: RemoteProviderConfig) -> None:
        self.config = config

    def generate(self, prompt: str, base: bytes | None = None) -> bytes:
        payload: dict = {"prompt": prompt}
        if base is not None:
            payload["base_png_b64"] = base64.b64encode(base).decode("ascii")
        body = _post_json(self.config, payload)
        encoded = body.get("png_b64")
        if not isinstance(encoded, str):
            raise BadResponse("response is missing png_b64")
        try:
            raw = base64.b64decode(encoded, validate=True)
        except binascii.Error as exc:
            raise BadResponse("png_b64 is not valid base64") from exc
        if not raw.startswith(PNG_SIGNATURE):
            raise BadResponse("decoded payload is not a PNG")
        return raw


class RemoteSentimentProvider:
    """Client for a POST /classify service speaking the minimal contract."""

    def __init__(self, config: RemoteProviderConfig) -> None:
        self.config = config

    def classify(self, text: str) -> dict[str, float]:
        body = _post_json(self.config, {"text": text})
        probs = body.get("probs")
        if not isinstance(probs, dict) or not probs:
            raise BadResponse("response is missing probs")
        distribution: dict[str, float] = {}
        for label, value in probs.items():
            if not isinstance(label, str) or not isinstance(value, (int, float)):
                raise BadResponse("probs must map labels to numbers")
            distribution[label] = float(value)
        return distribution
