"""Minimal HTTP query service over an immutable QueryEngine.

Endpoints:
  POST /query   body {"text": "..."} -> QueryResponse JSON
  GET  /health  -> {"status": "ok", "model": "cce-model v1"}

Requests with missing/empty text get a 400; unexpected failures get a 500
carrying only a generic message plus a request id (details are logged
server-side, never sent to the client).  The engine is read-only, so the
threading server can answer concurrent requests safely.
"""

from __future__ import annotations

import json
import logging
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from cce.engine import QueryEngine
from cce.tagger import MAGIC, EmptyQueryError

log = logging.getLogger("cce.service")


class _Handler(BaseHTTPRequestHandler):
    server_version = "cce"

    @property
    def engine(self) -> QueryEngine:
        return self.server.engine  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        log.debug("%s %s", self.address_string(), fmt % args)

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path != "/health":
            self._send(404, {"error": "not found"})
            return
        self._send(200, {"status": "ok", "model": MAGIC.decode().strip()})

    def do_POST(self):
        if self.path != "/query":
            self._send(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length) if length else b""
            payload = json.loads(raw.decode("utf-8")) if raw else {}
        except (ValueError, UnicodeDecodeError):
            self._send(400, {"error": "body must be a JSON object"})
            return
        text = payload.get("text") if isinstance(payload, dict) else None
        if not isinstance(text, str) or not text.strip():
            self._send(400, {"error": "missing or empty 'text'"})
            return
        try:
            response = self.engine.respond(text)
        except EmptyQueryError:
            self._send(400, {"error": "missing or empty 'text'"})
            return
        except Exception:
            request_id = str(uuid.uuid4())
            log.exception("request %s failed", request_id)
            self._send(500, {"error": "internal error", "request_id": request_id})
            return
        self._send(200, response.to_dict())


def make_server(engine: QueryEngine, host: str = "127.0.0.1", port: int = 8756) -> ThreadingHTTPServer:
    """Build (but do not start) the server; port 0 picks a free port."""
    server = ThreadingHTTPServer((host, port), _Handler)
    server.engine = engine  # type: ignore[attr-defined]
    return server


def serve(engine: QueryEngine, host: str = "127.0.0.1", port: int = 8756) -> None:
    server = make_server(engine, host, port)
    log.info("listening on %s:%d", *server.server_address[:2])
    try:
        server.serve_forever()
    finally:
        server.server_close()
