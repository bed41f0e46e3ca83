"""Runtime configuration shared by the HTTP service and the CLI.

Settings come from an optional TOML or JSON file, then from environment
variables prefixed ``PANELSMITH_``, which win. Everything has a working
offline default, so a bare ``panelsmith serve`` needs no file at all.

Recognized file keys::

    host = "127.0.0.1"
    port = 8750
    artifact_root = "/var/tmp/panelsmith"   # rendered PNGs land here

    [assets]                                 # imported into the pool at boot
    characters = "./art/characters"

    [providers.image]                        # omit to use the offline stub
    endpoint = "http://localhost:9090/generate"
    timeout = 10.0
    retries = 2
    backoff = 0.05

    [providers.sentiment]
    endpoint = "http://localhost:9091/classify"

Environment overrides: ``PANELSMITH_HOST``, ``PANELSMITH_PORT``,
``PANELSMITH_ARTIFACT_ROOT``, ``PANELSMITH_IMAGE_ENDPOINT`` and
``PANELSMITH_SENTIMENT_ENDPOINT``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover - version-dependent import
    import tomli as tomllib  # type: ignore[no-redef]

from .errors import InvalidValue, MalformedDocument, PathNotFound

ENV_PREFIX = "PANELSMITH_"


@dataclass(frozen=True)
class EndpointConfig:
    """Connection settings for one remote provider; no endpoint = offline."""

    endpoint: str | None = None
    timeout: float = 10.0
    retries: int = 2
    backoff: float = 0.05


@dataclass(frozen=True)
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8750
    artifact_root: Path | None = None
    asset_dirs: dict[str, Path] = field(default_factory=dict)
    image: EndpointConfig = field(default_factory=EndpointConfig)
    sentiment: EndpointConfig = field(default_factory=EndpointConfig)


def _parse_file(path: Path) -> dict[str, Any]:
    if not path.exists():
        raise PathNotFound(f"no config file at {path}")
    suffix = path.suffix.lower()
    try:
        if suffix == ".json":
            data = json.loads(path.read_text("utf-8"))
        elif suffix == ".toml":
            with path.open("rb") as fh:
                data = tomllib.load(fh)
        else:
            raise InvalidValue(f"config must be .toml or .json, got {path.name!r}")
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise MalformedDocument(f"unparseable config {path.name}: {exc}") from None
    if not isinstance(data, dict):
        raise MalformedDocument("config root must be a table/object")
    return data


def _as_port(value: Any) -> int:
    try:
        port = int(value)
    except (TypeError, ValueError):
        raise InvalidValue(f"port must be an integer, got {value!r}") from None
    if not 1 <= port <= 65535:
        raise InvalidValue(f"port out of range: {port}")
    return port


def _endpoint_from(table: Any, name: str) -> EndpointConfig:
    if table is None:
        return EndpointConfig()
    if not isinstance(table, Mapping):
        raise InvalidValue(f"providers.{name} must be a table")
    known = {"endpoint", "timeout", "retries", "backoff"}
    unknown = set(table) - known
    if unknown:
        raise InvalidValue(f"providers.{name}: unknown keys {sorted(unknown)}")
    endpoint = table.get("endpoint")
    if endpoint is not None and not isinstance(endpoint, str):
        raise InvalidValue(f"providers.{name}.endpoint must be a string")
    return EndpointConfig(
        endpoint=endpoint,
        timeout=float(table.get("timeout", 10.0)),
        retries=int(table.get("retries", 2)),
        backoff=float(table.get("backoff", 0.05)),
    )


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> AppConfig:
    """Merge file settings (if any) with environment overrides."""
    env = os.environ if env is None else env
    data = _parse_file(Path(path)) if path is not None else {}

    host = data.get("host", "127.0.0.1")
    if not isinstance(host, str) or not host:
        raise InvalidValue("host must be a non-empty string")
    port = _as_port(data.get("port", 8750))

    raw_root = data.get("artifact_root")
    artifact_root = Path(raw_root) if isinstance(raw_root, str) and raw_root else None

    asset_dirs: dict[str, Path] = {}
    raw_assets = data.get("assets", {})
    if not isinstance(raw_assets, Mapping):
        raise InvalidValue("assets must map set names to directories")
    for set_name, directory in raw_assets.items():
        if not isinstance(directory, str):
            raise InvalidValue(f"assets.{set_name} must be a path string")
        asset_dirs[str(set_name)] = Path(directory)

    providers = data.get("providers", {})
    if not isinstance(providers, Mapping):
        raise InvalidValue("providers must be a table")
    image = _endpoint_from(providers.get("image"), "image")
    sentiment = _endpoint_from(providers.get("sentiment"), "sentiment")

    if ENV_PREFIX + "HOST" in env:
        host = env[ENV_PREFIX + "HOST"]
    if ENV_PREFIX + "PORT" in env:
        port = _as_port(env[ENV_PREFIX + "PORT"])
    if ENV_PREFIX + "ARTIFACT_ROOT" in env:
        artifact_root = Path(env[ENV_PREFIX + "ARTIFACT_ROOT"])
    if ENV_PREFIX + "IMAGE_ENDPOINT" in env:
        image = EndpointConfig(
            endpoint=env[ENV_PREFIX + "IMAGE_ENDPOINT"],
            timeout=image.timeout,
            retries=image.retries,
            backoff=image.backoff,
        )
    if ENV_PREFIX + "SENTIMENT_ENDPOINT" in env:
        sentiment = EndpointConfig(
            endpoint=env[ENV_PREFIX + "SENTIMENT_ENDPOINT"],
            timeout=sentiment.timeout,
            retries=sentiment.retries,
            backoff=sentiment.backoff,
        )

    return AppConfig(
        host=host,
        port=port,
        artifact_root=artifact_root,
        asset_dirs=asset_dirs,
        image=image,
        sentiment=sentiment,
    )
