"""HTTP service for the decision-surface explorer.

Endpoints (JSON bodies):

* ``GET /api/health`` -> ``{"status": "ok", "version": ...}``
* ``POST /api/grid`` with ``{"points": [{"x","y","label"}...],
  "config": {"k", "metric"}, "resolution": {"w", "h"}}`` ->
  ``{"cells": [[{"label","confidence","credibility"}...]...]}``, row-major,
  row 0 at the top.
* ``POST /api/predict`` with ``{"points": [...], "config": {...},
  "point": {"x", "y"}}`` -> ``{"label", "confidence", "credibility",
  "p": [...]}`` for the single unlabeled point.

Failures return ``{"error": {"code": ..., "message": ...}}`` with status 400
(validation) or 500 (unexpected).  Requests carry no session state: the same
body always produces the same response.  The server is threading, so requests
run concurrently with private training structures.

Static files (the explorer bundle) are served from ``static_dir`` when given.
"""

from __future__ import annotations

import json
import threading
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from . import __version__
from . import tcm as tcm_mod
from .distance import DistanceSpec, distances_to_point
from .grid import (GridError, GridPoint, evaluate_grid, request_from_dict,
                   response_to_dict, _training_set)
from .tcm import TcmConfig, TcmError

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def _predict_point(body: dict) -> dict:
    try:
        config = body["config"]
        point = body["point"]
        x = float(point["x"])
        y = float(point["y"])
        k = int(config["k"])
        metric = str(config["metric"])
        raw_points = body["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GridError("bad_request", f"malformed predict request: {exc}") from None
    points = tuple(GridPoint(float(p["x"]), float(p["y"]), int(p["label"]))
                   for p in raw_points)
    try:
        spec = DistanceSpec.parse(metric)
    except ValueError as exc:
        raise GridError("bad_metric", str(exc)) from None
    train = _training_set(points)
    try:
        cfg = TcmConfig(k=k, spec=spec)
        cache = tcm_mod.build_cache(train, cfg)
    except TcmError as exc:
        raise GridError("k_too_large", str(exc)) from None
    dist = distances_to_point(train.features_matrix(), np.array([x, y]), spec)
    p = tcm_mod.pvalues_for_distances(cache, dist)
    pred = tcm_mod.prediction_from_pvalues(
        tcm_mod.ClassPValues(tuple(float(v) for v in p)))
    return {"label": pred.label, "confidence": pred.confidence,
            "credibility": pred.credibility, "p": [float(v) for v in p]}


def _make_handler(static_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, status: int, payload: dict):
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(data)

        def _send_error_json(self, status: int, code: str, message: str):
            self._send_json(status, {"error": {"code": code, "message": message}})

        def do_OPTIONS(self):
            self.send_response(HTTPStatus.NO_CONTENT)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            if self.path == "/api/health":
                self._send_json(HTTPStatus.OK,
                                {"status": "ok", "version": __version__})
                return
            if static_dir is not None:
                self._serve_static()
                return
            self._send_error_json(HTTPStatus.NOT_FOUND, "not_found",
                                  f"no handler for {self.path}")

        def _serve_static(self):
            rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
            target = (static_dir / rel).resolve()
            if not str(target).startswith(str(static_dir.resolve())) \
                    or not target.is_file():
                self._send_error_json(HTTPStatus.NOT_FOUND, "not_found",
                                      f"no file {rel}")
                return
            data = target.read_bytes()
            ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            self.send_response(HTTPStatus.OK)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_POST(self):
            try:
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length) or b"{}")
            except (ValueError, json.JSONDecodeError) as exc:
                self._send_error_json(HTTPStatus.BAD_REQUEST, "bad_request",
                                      f"invalid JSON body: {exc}")
                return
            try:
                if self.path == "/api/grid":
                    resp = response_to_dict(evaluate_grid(request_from_dict(body)))
                elif self.path == "/api/predict":
                    resp = _predict_point(body)
                else:
                    self._send_error_json(HTTPStatus.NOT_FOUND, "not_found",
                                          f"no handler for {self.path}")
                    return
            except GridError as exc:
                self._send_error_json(HTTPStatus.BAD_REQUEST, exc.code, exc.message)
                return
            except Exception as exc:  # pragma: no cover - defensive
                self._send_error_json(HTTPStatus.INTERNAL_SERVER_ERROR,
                                      "internal_error", str(exc))
                return
            self._send_json(HTTPStatus.OK, resp)

    return Handler


class TcmService:
    """Embeddable server: ``serve_forever`` blocks, ``start`` runs it on a
    daemon thread (used by the tests)."""

    def __init__(self, host: str = "127.0.0.1", port: int = 8008,
                 static_dir: str | Path | None = None):
        sd = Path(static_dir) if static_dir is not None else None
        if sd is not None and not sd.is_dir():
            raise ValueError(f"static directory {sd} does not exist")
        self._httpd = ThreadingHTTPServer((host, port), _make_handler(sd))
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    def start(self):
        self._thread = threading.Thread(target=self._httpd.serve_forever,
                                        daemon=True)
        self._thread.start()
        return self

    def serve_forever(self):
        self._httpd.serve_forever()

    def shutdown(self):
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)


def serve(port: int = 8008, host: str = "127.0.0.1",
          static_dir: str | Path | None = None):
    """Run the service until interrupted."""
    service = TcmService(host=host, port=port, static_dir=static_dir)
    print(f"tcmnn service listening on http://{host}:{service.port}/",
          flush=True)
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        service.shutdown()
