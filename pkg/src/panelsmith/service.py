"""Session-oriented HTTP API over the generation engine.

One session owns one sequence. Every mutation happens under the
session's lock and returns the full document plus its revision, so
clients never compute state locally; they re-render whatever the
server sends back. Rendered artifacts are persisted under
``{root}/{session}/{revision}/`` which makes artifact URLs stable for
as long as that revision (and the asset pool) stands.

Sessions live in memory only. ``snapshot_sessions``/``load_snapshot``
let operators dump them to JSON across restarts; there is no database.
"""

from __future__ import annotations

import json
import re
import secrets
import tempfile
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response, UploadFile
from fastapi import File as FileParam
from fastapi.responses import JSONResponse

from . import graph as g
from .assets import builtin_pool, normalize_label
from .config import AppConfig
from .errors import DuplicateName, LayerFailure, PanelsmithError, UnknownLayer, UnknownNode
from .layers import Engine, layer_from_spec
from .providers import (
    PNG_SIGNATURE,
    LexiconSentiment,
    RemoteImageProvider,
    RemoteProviderConfig,
    RemoteSentimentProvider,
    StaticEmbeddings,
    StubImageProvider,
)
from .render import render_sequence, png_bytes

_SAFE_SEGMENT = re.compile(r"^[A-Za-z0-9_.-]+$")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class Session:
    id: str
    seq: g.SequenceModel
    created: str = field(default_factory=_now)
    modified: str = field(default_factory=_now)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def touch(self) -> None:
        self.modified = _now()


def build_engine(config: AppConfig | None = None) -> Engine:
    """Engine from a config: bundled assets plus any configured imports,
    remote providers when endpoints are set, offline ones otherwise."""
    config = config or AppConfig()
    pool = builtin_pool()
    for set_name, directory in config.asset_dirs.items():
        pool.add_visuals(set_name, directory)
    engine = Engine(assets=pool)
    if config.image.endpoint:
        image: Any = RemoteImageProvider(
            RemoteProviderConfig(
                endpoint=config.image.endpoint,
                timeout=config.image.timeout,
                retries=config.image.retries,
                backoff=config.image.backoff,
            )
        )
    else:
        image = StubImageProvider()
    if config.sentiment.endpoint:
        sentiment: Any = RemoteSentimentProvider(
            RemoteProviderConfig(
                endpoint=config.sentiment.endpoint,
                timeout=config.sentiment.timeout,
                retries=config.sentiment.retries,
                backoff=config.sentiment.backoff,
            )
        )
    else:
        sentiment = LexiconSentiment()
    engine.register_model("image", image)
    engine.register_model("sentiment", sentiment)
    engine.register_model("embeddings", StaticEmbeddings())
    return engine


async def _read_json(request: Request) -> Any:
    body = await request.body()
    if not body:
        return {}
    try:
        return json.loads(body)
    except json.JSONDecodeError:
        return None


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"detail": message}, status_code=status)


def snapshot_sessions(app: FastAPI) -> dict[str, Any]:
    """All live sessions as one JSON-ready payload."""
    sessions: dict[str, Session] = app.state.sessions
    return {
        sid: {
            "created": s.created,
            "modified": s.modified,
            "document": s.seq.to_document(),
        }
        for sid, s in sessions.items()
    }


def load_snapshot(app: FastAPI, payload: dict[str, Any]) -> int:
    """Restore sessions dumped by :func:`snapshot_sessions`; returns count."""
    count = 0
    for sid, record in payload.items():
        seq = g.parse_document(record["document"])
        session = Session(id=sid, seq=seq)
        session.created = record.get("created", session.created)
        session.modified = record.get("modified", session.modified)
        app.state.sessions[sid] = session
        count += 1
    return count


def create_app(
    config: AppConfig | None = None, engine: Engine | None = None
) -> FastAPI:
    config = config or AppConfig()
    if engine is None:
        engine = build_engine(config)
    artifact_root = config.artifact_root or Path(
        tempfile.mkdtemp(prefix="panelsmith_artifacts_")
    )
    artifact_root.mkdir(parents=True, exist_ok=True)

    app = FastAPI(title="panelsmith", docs_url=None, redoc_url=None)
    app.state.engine = engine
    app.state.sessions = {}
    app.state.sessions_lock = threading.Lock()
    app.state.registry_lock = threading.Lock()
    app.state.artifact_root = artifact_root

    def _session_or_none(session_id: str) -> Session | None:
        with app.state.sessions_lock:
            return app.state.sessions.get(session_id)

    # --- sessions ---------------------------------------------------------

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        payload = await _read_json(request)
        if not isinstance(payload, dict):
            return _error(400, "body must be a JSON object")
        length = payload.get("length")
        seed = payload.get("seed", 0)
        if isinstance(length, bool) or not isinstance(length, int):
            return _error(400, "length must be an integer")
        if length < 0:
            return _error(400, "length must be non-negative")
        if isinstance(seed, bool) or not isinstance(seed, int):
            return _error(400, "seed must be an integer")
        session = Session(id=secrets.token_urlsafe(12), seq=g.create_sequence(length, seed))
        with app.state.sessions_lock:
            app.state.sessions[session.id] = session
        return JSONResponse(
            {"session_id": session.id, "document": session.seq.to_document()},
            status_code=201,
        )

    @app.get("/sessions/{session_id}/document")
    def get_document(session_id: str):
        session = _session_or_none(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            return session.seq.to_document()

    # --- editing ----------------------------------------------------------

    @app.post("/sessions/{session_id}/layers/apply")
    async def apply_layers(session_id: str, request: Request):
        session = _session_or_none(session_id)
        if session is None:
            return _error(404, "unknown session")
        payload = await _read_json(request)
        if not isinstance(payload, dict):
            return _error(422, "body must be a JSON object")
        names = payload.get("layers")
        params = payload.get("params", {})
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            return _error(422, "layers must be a list of layer names")
        if not isinstance(params, dict):
            return _error(422, "params must be an object")
        with session.lock:
            seed = params.get("seed", session.seq.seed)
            if isinstance(seed, bool) or not isinstance(seed, int):
                return _error(422, "params.seed must be an integer")
            ctx = engine.context(seed, params)
            try:
                engine.apply_layers(session.seq, names, ctx)
            except (UnknownLayer, LayerFailure) as exc:
                return _error(422, str(exc))
            session.touch()
            return {
                "document": session.seq.to_document(),
                "revision": session.seq.revision,
            }

    @app.patch("/sessions/{session_id}/nodes/{node_id}")
    async def patch_node(session_id: str, node_id: int, request: Request):
        session = _session_or_none(session_id)
        if session is None:
            return _error(404, "unknown session")
        payload = await _read_json(request)
        if not isinstance(payload, dict):
            return _error(422, "body must be a JSON object")
        prop = payload.get("property")
        if not isinstance(prop, str) or not prop:
            return _error(422, "property must be a non-empty string")
        if "value" not in payload:
            return _error(422, "value is required")
        value = payload["value"]
        if isinstance(value, list):
            value = tuple(value)
        with session.lock:
            try:
                session.seq.update_node(node_id, prop, value)
            except UnknownNode:
                return _error(404, "unknown node")
            except PanelsmithError as exc:
                return _error(422, str(exc))
            session.touch()
            return {
                "document": session.seq.to_document(),
                "revision": session.seq.revision,
            }

    # --- rendering --------------------------------------------------------

    @app.post("/sessions/{session_id}/render")
    def render(session_id: str):
        session = _session_or_none(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            result = render_sequence(session.seq, engine.assets)
            revision = session.seq.revision
            target = artifact_root / session.id / str(revision)
            target.mkdir(parents=True, exist_ok=True)
            panel_urls = []
            for index, image in enumerate(result.panels.values()):
                name = f"panel_{index}.png"
                (target / name).write_bytes(png_bytes(image))
                panel_urls.append(f"/artifacts/{session.id}/{revision}/{name}")
            strip_url = None
            if result.strip is not None:
                (target / "strip.png").write_bytes(png_bytes(result.strip))
                strip_url = f"/artifacts/{session.id}/{revision}/strip.png"
            return {
                "strip_url": strip_url,
                "panel_urls": panel_urls,
                "document": result.document,
            }

    @app.get("/artifacts/{session_id}/{revision}/{name}")
    def artifact(session_id: str, revision: str, name: str):
        for segment in (session_id, revision, name):
            if not _SAFE_SEGMENT.match(segment) or ".." in segment:
                return _error(404, "no such artifact")
        path = artifact_root / session_id / revision / name
        if not path.is_file():
            return _error(404, "no such artifact")
        return Response(path.read_bytes(), media_type="image/png")

    # --- registries and assets ---------------------------------------------

    @app.get("/layers")
    def list_layers():
        return {"layers": engine.layer_names()}

    @app.post("/layers", status_code=201)
    async def register_layer(request: Request):
        spec = await _read_json(request)
        if not isinstance(spec, dict):
            return _error(422, "body must be a JSON layer spec object")
        try:
            layer = layer_from_spec(spec)
        except PanelsmithError as exc:
            return _error(422, str(exc))
        with app.state.registry_lock:
            try:
                engine.register_layer(layer)
            except DuplicateName as exc:
                return _error(409, str(exc))
        return {"registered": layer.name, "layers": engine.layer_names()}

    @app.get("/models")
    def list_models():
        return {"models": engine.model_names()}

    @app.get("/assets/sets")
    def list_sets():
        return {
            "sets": {name: engine.assets.labels(name) for name in engine.assets.set_names()}
        }

    @app.post("/assets/sets/{set_name}", status_code=201)
    async def upload_assets(set_name: str, files: list[UploadFile] = FileParam(...)):
        if not _SAFE_SEGMENT.match(set_name):
            return _error(422, "set name may use letters, digits, '_', '-' and '.'")
        staged: list[tuple[str, bytes]] = []
        for index, upload in enumerate(files):
            data = await upload.read()
            filename = Path(upload.filename or f"upload_{index}.png").name
            if not filename.lower().endswith(".png") or not data.startswith(PNG_SIGNATURE):
                return _error(415, f"{filename}: only PNG images are accepted")
            staged.append((filename, data))
        # All files validated before any lands in the pool: uploads are atomic.
        # Files persist for the app's lifetime; the pool resolves them lazily.
        upload_dir = artifact_root / "uploads" / set_name
        upload_dir.mkdir(parents=True, exist_ok=True)
        added = 0
        for filename, data in staged:
            (upload_dir / filename).write_bytes(data)
            try:
                added += engine.assets.add_visuals(set_name, upload_dir / filename)
            except PanelsmithError as exc:
                return _error(415, str(exc))
        labels = sorted(normalize_label(Path(f).stem) for f, _ in staged)
        return JSONResponse({"added": added, "labels": labels}, status_code=201)

    return app


def run(config: AppConfig | None = None) -> None:  # pragma: no cover - boot glue
    """Serve the app with uvicorn; blocks until interrupted."""
    import uvicorn

    config = config or AppConfig()
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
