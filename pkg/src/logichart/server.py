"""HTTP server: health check, the /session WebSocket, and the web UI files.

Each WebSocket connection gets its own SessionHost; requests and responses
are single JSON text frames using the same message schema as pipe mode.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from .diagram import LayoutConstants
from .protocol import SessionHost, msg_error

PLACEHOLDER_PAGE = """<!doctype html>
<html>
<head><meta charset="utf-8"><title>logichart</title></head>
<body>
<h1>logichart</h1>
<p>The web UI build was not found. Connect to <code>/session</code>
with a WebSocket client, or build the frontend and restart.</p>
</body>
</html>
"""


def default_static_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def create_app(
    constants: LayoutConstants | None = None,
    static_dir: str | Path | None = None,
    step_budget: int = 100_000,
) -> FastAPI:
    app = FastAPI(title="logichart")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.websocket("/session")
    async def session_ws(ws: WebSocket) -> None:
        await ws.accept()
        host = SessionHost(constants, step_budget)
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    req = json.loads(raw)
                except json.JSONDecodeError as e:
                    await ws.send_json(msg_error(f"bad JSON: {e}"))
                    continue
                if not isinstance(req, dict):
                    await ws.send_json(msg_error("request must be a JSON object"))
                    continue
                for msg in host.handle(req):
                    await ws.send_json(msg)
        except WebSocketDisconnect:
            pass

    static = Path(static_dir) if static_dir is not None else default_static_dir()
    if static is not None and static.is_dir():
        app.mount("/", StaticFiles(directory=static, html=True), name="ui")
    else:

        @app.get("/")
        def index() -> HTMLResponse:
            return HTMLResponse(PLACEHOLDER_PAGE)

    return app
