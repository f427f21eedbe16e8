"""Threaded HTTP server exposing the search API and the web client.

Endpoints: GET /api/search?q=...&k=...&seed=... plus per-request engine
overrides, GET /api/page/<id>, GET /healthz. Static assets (the browser
client) are served from an optional directory; / maps to index.html.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .service import EmptyQueryError, Engine

_OVERRIDE_KEYS = ("k", "seed", "iexplore", "iconverge", "df", "gamma", "delta", "m", "depth_cap", "strategy")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
}


def _json_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True).encode("utf-8")


class ApiHandler(BaseHTTPRequestHandler):
    engine: Engine = None  # set on the server class
    assets_dir: Path | None = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, payload: dict) -> None:
        self._send(status, _json_bytes(payload), "application/json; charset=utf-8")

    def do_GET(self) -> None:  # noqa: N802 (stdlib naming)
        url = urlsplit(self.path)
        try:
            if url.path == "/healthz":
                self._send(200, b"ok", "text/plain; charset=utf-8")
            elif url.path == "/api/search":
                self._handle_search(url.query)
            elif url.path.startswith("/api/page/"):
                self._handle_page(url.path[len("/api/page/"):])
            else:
                self._handle_static(url.path)
        except BrokenPipeError:
            pass
        except Exception as exc:  # defensive: a handler bug must not kill the thread
            self._send_json(500, {"error": f"internal error: {exc}"})

    def _handle_search(self, query_string: str) -> None:
        args = parse_qs(query_string)
        if "q" not in args:
            self._send_json(400, {"error": "missing query parameter q"})
            return
        overrides = {key: args[key][0] for key in _OVERRIDE_KEYS if key in args}
        try:
            response = self.server.engine.search(args["q"][0], overrides or None)
        except EmptyQueryError:
            self._send_json(400, {"error": "empty query"})
            return
        except ValueError as exc:
            self._send_json(400, {"error": str(exc)})
            return
        self._send_json(200, response)

    def _handle_page(self, raw_id: str) -> None:
        try:
            page_id = int(raw_id)
        except ValueError:
            self._send_json(404, {"error": "not found"})
            return
        payload = self.server.engine.page(page_id)
        if payload is None:
            self._send_json(404, {"error": "not found"})
        else:
            self._send_json(200, payload)

    def _handle_static(self, path: str) -> None:
        assets = self.server.assets_dir
        if assets is None:
            self._send_json(404, {"error": "not found"})
            return
        rel = "index.html" if path in ("", "/") else path.lstrip("/")
        target = (assets / rel).resolve()
        if not target.is_relative_to(assets.resolve()) or not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), ctype)


class TrailServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], engine: Engine, assets_dir: str | Path | None = None):
        super().__init__(address, ApiHandler)
        self.engine = engine
        self.assets_dir = Path(assets_dir) if assets_dir else None


def make_server(engine: Engine, listen: str, assets_dir: str | Path | None = None) -> TrailServer:
    host, _, port = listen.rpartition(":")
    if not host:
        raise ValueError("listen address must be host:port")
    return TrailServer((host, int(port)), engine, assets_dir)
