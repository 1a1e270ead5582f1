"""HTTP/JSON service: archive browsing, phylogeny, rendering, sessions.

A thin adapter over the archive, domain and session modules — everything
observable through the API is reproducible through direct module calls.
Built on the stdlib threading HTTP server: the interaction is turn-based
request/response, so nothing fancier is needed.

Routes (all JSON unless noted):
  GET    /api/domains
  GET    /api/artifacts?domain_id=&offset=&limit=
  GET    /api/artifacts/{id}
  GET    /api/artifacts/{id}/ancestry?direction=up|down&depth=N
  GET    /api/artifacts/{id}/phenotype.png?w=&h=
  GET    /api/phylogeny?domain_id=
  POST   /api/sessions
  GET    /api/sessions/{sid}/candidates/{k}/phenotype.png?w=&h=
  POST   /api/sessions/{sid}/select
  POST   /api/sessions/{sid}/publish
  DELETE /api/sessions/{sid}
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qsl, urlsplit

from .archive import Archive, open_store
from .config import ServerConfig
from .domains import Registry
from .errors import (
    InvalidArgument,
    NotFound,
    SessionExpired,
    StemmaError,
)
from .png import encode_gray_png
from .session import SessionManager

log = logging.getLogger("stemma.server")

MAX_RENDER_DIM = 1024
DEFAULT_PAGE_LIMIT = 50

_STATUS_BY_CODE = {
    "UNKNOWN_DOMAIN": 404,
    "NOT_FOUND": 404,
    "INVALID_GENOME": 400,
    "EMPTY_SELECTION": 400,
    "STALE_EPOCH": 409,
    "INVALID_ARGUMENT": 400,
    "SESSION_EXPIRED": 410,
    "CONFLICT": 409,
    "CORRUPT_STORE": 500,
    "INTERNAL": 500,
}

_HEX64 = re.compile(r"^[0-9a-f]{64}$")
_HEX32 = re.compile(r"^[0-9a-f]{32}$")


class _Response:
    def __init__(self, status: int, body: bytes = b"", content_type: str | None = None,
                 headers: dict | None = None):
        self.status = status
        self.body = body
        self.content_type = content_type
        self.headers = headers or {}

    @staticmethod
    def json(payload, status: int = 200, headers: dict | None = None) -> "_Response":
        body = json.dumps(payload, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
        return _Response(status, body, "application/json", headers)

    @staticmethod
    def png(body: bytes, headers: dict | None = None) -> "_Response":
        return _Response(200, body, "image/png", headers)

    @staticmethod
    def error(code: str, message: str) -> "_Response":
        status = _STATUS_BY_CODE.get(code, 500)
        return _Response.json({"error": {"code": code, "message": message}}, status)


class Api:
    """Route table and handlers, independent of the HTTP plumbing."""

    def __init__(self, archive: Archive, sessions: SessionManager,
                 ttl_seconds: int, static_dir: str | None = None):
        self.archive = archive
        self.registry = archive.registry
        self.sessions = sessions
        self.ttl_seconds = ttl_seconds
        self.static_dir = static_dir
        self.routes = [
            ("GET", re.compile(r"^/api/domains$"), self.list_domains),
            ("GET", re.compile(r"^/api/artifacts$"), self.list_artifacts),
            ("GET", re.compile(r"^/api/artifacts/(?P<aid>[^/]+)$"), self.get_artifact),
            ("GET", re.compile(r"^/api/artifacts/(?P<aid>[^/]+)/ancestry$"), self.ancestry),
            ("GET", re.compile(r"^/api/artifacts/(?P<aid>[^/]+)/phenotype\.png$"),
             self.artifact_png),
            ("GET", re.compile(r"^/api/phylogeny$"), self.phylogeny),
            ("POST", re.compile(r"^/api/sessions$"), self.create_session),
            ("GET", re.compile(
                r"^/api/sessions/(?P<sid>[^/]+)/candidates/(?P<k>\d+)/phenotype\.png$"),
             self.candidate_png),
            ("POST", re.compile(r"^/api/sessions/(?P<sid>[^/]+)/select$"), self.select),
            ("POST", re.compile(r"^/api/sessions/(?P<sid>[^/]+)/publish$"), self.publish),
            ("DELETE", re.compile(r"^/api/sessions/(?P<sid>[^/]+)$"), self.delete_session),
        ]

    def dispatch(self, method: str, path: str, query: dict, body: bytes,
                 headers) -> _Response:
        try:
            if path.startswith("/api"):
                for route_method, pattern, handler in self.routes:
                    m = pattern.match(path)
                    if m:
                        if method != route_method:
                            return _Response.error("INVALID_ARGUMENT",
                                                   f"{method} not allowed here")
                        return handler(query=query, body=body, headers=headers,
                                       **m.groupdict())
                return _Response.error("NOT_FOUND", f"no route {path}")
            return self.static(method, path)
        except StemmaError as exc:
            return _Response.error(exc.code, exc.message)
        except Exception:  # noqa: BLE001
            log.exception("unhandled error on %s %s", method, path)
            return _Response.error("INTERNAL", "internal error")

    # -- helpers -------------------------------------------------------------

    @staticmethod
    def _int_param(query, name, default=None, required=False):
        raw = query.get(name)
        if raw is None or raw == "":
            if required:
                raise InvalidArgument(f"missing query parameter {name!r}")
            return default
        try:
            return int(raw)
        except ValueError:
            raise InvalidArgument(f"{name} must be an integer") from None

    def _dims(self, query, domain_id: str) -> tuple[int, int]:
        default_w, default_h = self.registry.descriptor(domain_id).default_render_size
        w = self._int_param(query, "w", default_w)
        h = self._int_param(query, "h", default_h)
        if not (1 <= w <= MAX_RENDER_DIM and 1 <= h <= MAX_RENDER_DIM):
            raise InvalidArgument(f"render size must be 1..{MAX_RENDER_DIM}")
        return w, h

    def _session(self, sid: str):
        if not _HEX32.match(sid):
            raise SessionExpired(f"no session {sid}")
        session = self.sessions.get(sid)
        now = time.time_ns() // 1_000_000
        if session.last_activity + self.ttl_seconds * 1000 < now:
            self.sessions.delete(sid)
            raise SessionExpired(f"session {sid} expired")
        return session

    @staticmethod
    def _body_json(body: bytes, allowed: set, required: set) -> dict:
        try:
            doc = json.loads(body.decode("utf-8")) if body else {}
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise InvalidArgument("request body must be a JSON object") from None
        if not isinstance(doc, dict):
            raise InvalidArgument("request body must be a JSON object")
        unknown = set(doc) - allowed
        if unknown:
            raise InvalidArgument(f"unknown body fields: {sorted(unknown)}")
        missing = required - set(doc)
        if missing:
            raise InvalidArgument(f"missing body fields: {sorted(missing)}")
        return doc

    # -- handlers ------------------------------------------------------------

    def list_domains(self, query, body, headers) -> _Response:
        payload = [
            {"domain_id": d.domain_id, "display_name": d.display_name,
             "default_render_size": list(d.default_render_size)}
            for d in self.registry.descriptors()
        ]
        return _Response.json(payload)

    def list_artifacts(self, query, body, headers) -> _Response:
        domain_id = query.get("domain_id")
        if not domain_id:
            raise InvalidArgument("missing query parameter 'domain_id'")
        offset = self._int_param(query, "offset", 0)
        limit = self._int_param(query, "limit", DEFAULT_PAGE_LIMIT)
        total, records = self.archive.list(domain_id, offset, limit)
        return _Response.json({"total": total, "items": [r.meta() for r in records]})

    def get_artifact(self, query, body, headers, aid: str) -> _Response:
        if not _HEX64.match(aid):
            raise NotFound(f"no artifact {aid}")
        return _Response.json(self.archive.get(aid).full())

    def ancestry(self, query, body, headers, aid: str) -> _Response:
        if not _HEX64.match(aid):
            raise NotFound(f"no artifact {aid}")
        direction = query.get("direction", "up")
        depth = self._int_param(query, "depth", None)
        graph = self.archive.ancestry(aid, direction, depth)
        return _Response.json(graph.to_json())

    def phylogeny(self, query, body, headers) -> _Response:
        domain_id = query.get("domain_id")
        if not domain_id:
            raise InvalidArgument("missing query parameter 'domain_id'")
        return _Response.json(self.archive.phylogeny(domain_id).to_json())

    def artifact_png(self, query, body, headers, aid: str) -> _Response:
        if not _HEX64.match(aid):
            raise NotFound(f"no artifact {aid}")
        record = self.archive.get(aid)
        w, h = self._dims(query, record.domain_id)
        etag = f'"{aid}-{w}x{h}"'
        if headers.get("If-None-Match") == etag:
            return _Response(304, b"", headers={"ETag": etag})
        raster = self.registry.get(record.domain_id).render(record.genome_blob, w, h)
        png = encode_gray_png(raster.pixels, w, h)
        return _Response.png(png, headers={"ETag": etag})

    def candidate_png(self, query, body, headers, sid: str, k: str) -> _Response:
        session = self._session(sid)
        index = int(k)
        if index >= session.pop_size:
            raise NotFound(f"no candidate {index}")
        w, h = self._dims(query, session.domain_id)
        raster = self.registry.get(session.domain_id).render(
            session.candidates[index].genome_blob, w, h)
        return _Response.png(encode_gray_png(raster.pixels, w, h))

    def create_session(self, query, body, headers) -> _Response:
        doc = self._body_json(
            body,
            allowed={"domain_id", "seed_artifact_ids", "pop_size", "rng_seed"},
            required={"domain_id"},
        )
        seeds = doc.get("seed_artifact_ids", [])
        if not isinstance(seeds, list) or not all(isinstance(s, str) for s in seeds):
            raise InvalidArgument("seed_artifact_ids must be a list of ids")
        pop_size = doc.get("pop_size")
        if pop_size is not None and type(pop_size) is not int:
            raise InvalidArgument("pop_size must be an integer")
        rng_seed = doc.get("rng_seed")
        if rng_seed is not None and type(rng_seed) is not int:
            raise InvalidArgument("rng_seed must be an integer")
        session = self.sessions.create(doc["domain_id"], seeds, pop_size, rng_seed)
        return _Response.json(session.summary(), status=201)

    def select(self, query, body, headers, sid: str) -> _Response:
        session = self._session(sid)
        doc = self._body_json(body, allowed={"op_epoch", "selected"},
                              required={"op_epoch", "selected"})
        if type(doc["op_epoch"]) is not int:
            raise InvalidArgument("op_epoch must be an integer")
        if (not isinstance(doc["selected"], list)
                or not all(type(i) is int for i in doc["selected"])):
            raise InvalidArgument("selected must be a list of integers")
        session = self.sessions.step_select(session.session_id, doc["selected"],
                                            doc["op_epoch"])
        return _Response.json(session.summary())

    def publish(self, query, body, headers, sid: str) -> _Response:
        session = self._session(sid)
        doc = self._body_json(body, allowed={"candidate", "author", "tags"},
                              required={"candidate"})
        if type(doc["candidate"]) is not int:
            raise InvalidArgument("candidate must be an integer")
        author = doc.get("author", "")
        tags = doc.get("tags", [])
        if not isinstance(author, str):
            raise InvalidArgument("author must be a string")
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise InvalidArgument("tags must be a list of strings")
        record = self.sessions.publish_candidate(session.session_id, doc["candidate"],
                                                 author=author, tags=tags)
        full = query.get("full") == "1"
        return _Response.json(record.full() if full else record.meta())

    def delete_session(self, query, body, headers, sid: str) -> _Response:
        self._session(sid)
        self.sessions.delete(sid)
        return _Response(204, b"")

    # -- static assets -------------------------------------------------------

    def static(self, method: str, path: str) -> _Response:
        if method != "GET":
            return _Response.error("INVALID_ARGUMENT", f"{method} not allowed here")
        if self.static_dir is None:
            if path == "/":
                body = (b"<!doctype html><title>stemma</title>"
                        b"<p>API is running; see <a href='/api/domains'>/api/domains</a>."
                        b" Configure server.static_dir to serve the web UI.</p>")
                return _Response(200, body, "text/html; charset=utf-8")
            return _Response.error("NOT_FOUND", f"no route {path}")
        rel = path.lstrip("/") or "index.html"
        base = os.path.realpath(self.static_dir)
        target = os.path.realpath(os.path.join(base, rel))
        if not target.startswith(base + os.sep) and target != base:
            return _Response.error("NOT_FOUND", "no such file")
        if os.path.isdir(target):
            target = os.path.join(target, "index.html")
        if not os.path.isfile(target):
            # unknown paths fall back to the SPA entry point
            target = os.path.join(base, "index.html")
            if not os.path.isfile(target):
                return _Response.error("NOT_FOUND", "no such file")
        ctype = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".mjs": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".png": "image/png",
            ".svg": "image/svg+xml",
            ".json": "application/json",
            ".map": "application/json",
        }.get(os.path.splitext(target)[1], "application/octet-stream")
        with open(target, "rb") as fh:
            return _Response(200, fh.read(), ctype)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    api: Api = None  # set by serve()

    def _run(self, method: str) -> None:
        parts = urlsplit(self.path)
        query = dict(parse_qsl(parts.query, keep_blank_values=True))
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        response = self.api.dispatch(method, parts.path, query, body, self.headers)
        self.send_response(response.status)
        if response.content_type:
            self.send_header("Content-Type", response.content_type)
        for key, value in response.headers.items():
            self.send_header(key, value)
        self.send_header("Content-Length", str(len(response.body)))
        self.end_headers()
        if response.body and method != "HEAD":
            self.wfile.write(response.body)

    def do_GET(self):  # noqa: N802
        self._run("GET")

    def do_POST(self):  # noqa: N802
        self._run("POST")

    def do_DELETE(self):  # noqa: N802
        self._run("DELETE")

    def log_message(self, fmt, *args):  # route through logging, not stderr
        log.debug("%s - %s", self.address_string(), fmt % args)


class ServerHandle:
    """Running service: the bound socket, its thread, and the open store."""

    def __init__(self, httpd: ThreadingHTTPServer, thread: threading.Thread,
                 archive: Archive, sessions: SessionManager):
        self.httpd = httpd
        self.thread = thread
        self.archive = archive
        self.sessions = sessions

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    @property
    def host(self) -> str:
        return self.httpd.server_address[0]

    def shutdown(self) -> None:
        """Stop serving and flush the store."""
        self.httpd.shutdown()
        self.thread.join()
        self.httpd.server_close()
        self.archive.close()


def serve(config: ServerConfig, registry: Registry | None = None,
          archive: Archive | None = None) -> ServerHandle:
    """Open the store, bind the socket, and serve until shutdown()."""
    if archive is None:
        archive = open_store(config.storage_path, registry)
    sessions = SessionManager(archive, pop_size_default=config.pop_size_default)
    api = Api(archive, sessions, config.ttl_seconds, config.static_dir)

    handler = type("BoundHandler", (_Handler,), {"api": api})
    try:
        httpd = ThreadingHTTPServer((config.bind, config.port), handler)
    except OSError as exc:
        archive.close()
        raise InvalidArgument(f"cannot bind {config.bind}:{config.port}: {exc}") from None
    httpd.daemon_threads = True
    thread = threading.Thread(target=httpd.serve_forever, name="stemma-http", daemon=True)
    thread.start()
    log.info("serving on %s:%d (store: %s)", config.bind, httpd.server_address[1],
             config.storage_path)
    return ServerHandle(httpd, thread, archive, sessions)


__all__ = ["Api", "ServerHandle", "serve", "MAX_RENDER_DIM"]
