"""HTTP + server-sent-events boundary over a paced simulation.

One background thread owns the simulation: it drains queued commands and then
advances simulated time by wall-time × time_scale, holding the service lock.
Request handlers either read a consistent snapshot under that lock or submit
commands and wait for the loop to apply them, so no reader ever observes a
half-applied command.
"""

from __future__ import annotations

import json
import mimetypes
import threading
import time
from concurrent.futures import Future, TimeoutError as FutureTimeout
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .agents import build_simulation
from .autonomy import (
    EmptyLog,
    assess_scal,
    characteristics_check,
    classify_region,
    profile_from_scenario,
)
from .events import EventKind, canonical_json
from .model import Role
from .scenario import Scenario

DEFAULT_ADDR = "127.0.0.1:8080"
PACING_INTERVAL_S = 0.05


class Service:
    """Holds the simulation, its pacing thread, and request-facing helpers."""

    def __init__(
        self,
        scenario: Scenario,
        *,
        time_scale: float | None = None,
        token: str | None = None,
        until: float | None = None,
        static_dir: str | Path | None = None,
    ):
        self.scenario = scenario
        self.sim, self.coordinator = build_simulation(scenario)
        self.time_scale = time_scale if time_scale is not None else scenario.time_scale
        self.token = token
        self.until = until
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        self.lock = threading.Lock()
        self.new_events = threading.Condition(self.lock)
        self._stop = threading.Event()
        self._pacer = threading.Thread(target=self._pacing_loop, name="sim-pacer", daemon=True)

    # -- lifecycle ---------------------------------------------------------------

    def start(self) -> None:
        self._pacer.start()

    def stop(self) -> None:
        self._stop.set()
        self._pacer.join(timeout=2.0)

    def _pacing_loop(self) -> None:
        last = time.monotonic()
        while not self._stop.is_set():
            time.sleep(PACING_INTERVAL_S)
            now = time.monotonic()
            dt, last = now - last, now
            with self.new_events:
                ran = self.sim.drain_commands()
                target = self.sim.clock.now + dt * self.time_scale
                if self.until is not None:
                    target = min(target, self.until)
                before = self.sim.log.last_seq
                if target > self.sim.clock.now:
                    self.sim.advance(target)
                if ran or self.sim.log.last_seq != before:
                    self.new_events.notify_all()

    # -- request-facing operations ---------------------------------------------------

    def authorized(self, header_value: str | None) -> bool:
        if not self.token:
            return True
        return header_value == f"Bearer {self.token}"

    def snapshot_json(self) -> str:
        with self.lock:
            return self.sim.state.snapshot_json()

    def events_since(self, since: int) -> list:
        with self.lock:
            return list(self.sim.log.since(since))

    def chat_since(self, since: int) -> list:
        with self.lock:
            return [e for e in self.sim.log.since(since) if e.kind is EventKind.CHAT_MESSAGE]

    def wait_events(self, since: int, timeout: float = 10.0) -> list:
        """Block until events past ``since`` exist (or timeout); [] on timeout."""
        with self.new_events:
            batch = self.sim.log.since(since)
            if batch:
                return list(batch)
            self.new_events.wait(timeout=timeout)
            return list(self.sim.log.since(since))

    def validate_order(self, body) -> tuple[int, dict] | None:
        """Pre-check a place-order request; None when acceptable."""
        if not isinstance(body, dict):
            return 400, {"error": "request body must be a JSON object"}
        buyer = body.get("buyer")
        if not isinstance(buyer, str) or not buyer:
            return 400, {"error": "missing buyer"}
        if buyer not in self.scenario.network.entities:
            return 404, {"error": f"unknown buyer {buyer!r}"}
        if self.scenario.network.entity(buyer).role not in (Role.WHOLESALER, Role.RETAILER):
            return 400, {"error": f"{buyer} cannot place purchase orders"}
        lines = normalize_lines(body.get("lines"))
        if lines is None:
            return 400, {"error": "lines must map products to positive kilograms"}
        for product, kg in lines.items():
            if product not in self.scenario.products:
                return 400, {"error": f"unknown product {product!r}"}
            if not isinstance(kg, (int, float)) or isinstance(kg, bool) or kg <= 0:
                return 400, {"error": f"quantity for {product} must be > 0"}
        return None

    def place_order(self, buyer: str, lines: dict) -> str:
        """Submit through the command queue and wait for the loop to apply it."""
        future: Future = Future()

        def command(sim) -> None:
            try:
                future.set_result(self.coordinator.place_order(buyer, lines))
            except Exception as exc:  # pre-validated; defensive
                future.set_exception(exc)

        self.sim.submit(command)
        return future.result(timeout=5.0)

    def assessment(self) -> dict:
        with self.lock:
            events = list(self.sim.log)
        profile, point = profile_from_scenario(self.scenario, events)
        level = assess_scal(profile)
        region = classify_region(point, self.scenario.manifold)
        return {
            "level": level.level,
            "level_name": level.name,
            "rationale": list(level.rationale),
            "point": {"intelligence": point.intelligence, "automation": point.automation},
            "region": region.value,
            "characteristics": characteristics_check(profile),
        }


def normalize_lines(raw) -> dict | None:
    """Accept {product: kg} or [{product, quantity_kg}] line formats."""
    if isinstance(raw, dict) and raw:
        return dict(raw)
    if isinstance(raw, list) and raw:
        lines = {}
        for item in raw:
            if not isinstance(item, dict) or "product" not in item or "quantity_kg" not in item:
                return None
            lines[item["product"]] = item["quantity_kg"]
        return lines
    return None


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    service: Service  # set by make_handler

    # -- plumbing -----------------------------------------------------------------

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass  # request logging off; the event log is the record that matters

    def _send_json(self, status: int, body) -> None:
        data = (canonical_json(body) + "\n").encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _query(self) -> dict:
        return parse_qs(urlparse(self.path).query)

    def _since(self) -> int:
        try:
            value = int(self._query().get("since", ["0"])[0])
        except ValueError:
            return -1
        return max(value, 0) if value >= 0 else -1

    def _check_auth(self) -> bool:
        if self.service.authorized(self.headers.get("Authorization")):
            return True
        self._send_json(401, {"error": "unauthorized"})
        return False

    # -- methods ------------------------------------------------------------------

    def do_POST(self) -> None:  # noqa: N802 - stdlib naming
        path = urlparse(self.path).path
        if not path.startswith("/api/"):
            self._send_json(404, {"error": "not found"})
            return
        if not self._check_auth():
            return
        if path != "/api/orders":
            self._send_json(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length) or b"{}")
        except (ValueError, json.JSONDecodeError):
            self._send_json(400, {"error": "invalid JSON body"})
            return
        problem = self.service.validate_order(body)
        if problem is not None:
            self._send_json(*problem)
            return
        lines = normalize_lines(body.get("lines"))
        try:
            order_id = self.service.place_order(body["buyer"], lines)
        except FutureTimeout:
            self._send_json(503, {"error": "simulation loop unavailable"})
            return
        except ValueError as exc:
            self._send_json(400, {"error": str(exc)})
            return
        self._send_json(201, {"order_id": order_id})

    def do_GET(self) -> None:  # noqa: N802 - stdlib naming
        path = urlparse(self.path).path
        if not path.startswith("/api/"):
            self._serve_static(path)
            return
        if not self._check_auth():
            return
        if path == "/api/state":
            data = (self.service.snapshot_json() + "\n").encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(data)
        elif path == "/api/events":
            since = self._since()
            if since < 0:
                self._send_json(400, {"error": "since must be a non-negative integer"})
                return
            self._send_json(200, [e.to_dict() for e in self.service.events_since(since)])
        elif path == "/api/chat":
            since = self._since()
            if since < 0:
                self._send_json(400, {"error": "since must be a non-negative integer"})
                return
            self._send_json(200, [e.to_dict() for e in self.service.chat_since(since)])
        elif path == "/api/entities":
            self._send_json(200, self.service.scenario.entities_payload())
        elif path == "/api/assess":
            try:
                self._send_json(200, self.service.assessment())
            except EmptyLog as exc:
                self._send_json(409, {"error": str(exc)})
        elif path == "/api/stream":
            since = self._since()
            if since < 0:
                self._send_json(400, {"error": "since must be a non-negative integer"})
                return
            self._stream(since)
        else:
            self._send_json(404, {"error": "not found"})

    # -- server-sent events -------------------------------------------------------

    def _stream(self, since: int) -> None:
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream; charset=utf-8")
        self.send_header("Cache-Control", "no-cache")
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        cursor = since
        try:
            while True:
                batch = self.service.wait_events(cursor)
                if not batch:
                    self.wfile.write(b": keep-alive\n\n")
                    self.wfile.flush()
                    continue
                for event in batch:
                    frame = f"id: {event.seq}\ndata: {event.to_json()}\n\n"
                    self.wfile.write(frame.encode("utf-8"))
                    cursor = event.seq
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError, OSError):
            return

    # -- static console files -----------------------------------------------------

    def _serve_static(self, path: str) -> None:
        root = self.service.static_dir
        if root is None:
            self._send_json(404, {"error": "not found"})
            return
        relative = path.lstrip("/") or "index.html"
        candidate = (root / relative).resolve()
        if not str(candidate).startswith(str(root)) or not candidate.is_file():
            self._send_json(404, {"error": "not found"})
            return
        content_type = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        data = candidate.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(service: Service, addr: str = DEFAULT_ADDR) -> ThreadingHTTPServer:
    host, _, port = addr.partition(":")
    handler = type("BoundHandler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer((host or "127.0.0.1", int(port or 8080)), handler)
    server.daemon_threads = True
    return server


def serve(service: Service, addr: str = DEFAULT_ADDR) -> None:
    """Run until interrupted; used by the CLI serve subcommand."""
    server = make_server(service, addr)
    service.start()
    try:
        server.serve_forever(poll_interval=0.2)
    except KeyboardInterrupt:
        pass
    finally:
        service.stop()
        server.shutdown()
        server.server_close()
