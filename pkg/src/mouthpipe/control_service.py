"""Live control and telemetry over WebSocket/JSON.

One message per text frame. Inbound commands (tagged by "type"):
set_thresholds, toggle_filter, set_filter_params, set_mapping, calibrate,
get_config. Replies are {"type":"ack","revision":n}, {"type":"rejection",
"reason":...}, or {"type":"config",...}. Telemetry messages stream to every
connected session; per-session buffers are bounded and drop the oldest entry
on overflow so a slow viewer never stalls the frame loop.

All commands funnel into the single pipeline command queue and are applied
at frame boundaries; the Ack already carries the revision the change will
have once applied, and telemetry reports the currently-applied revision.
"""

from __future__ import annotations

import asyncio
import json
import queue
import threading
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import RuntimeConfig
from .frame_io import Frame
from .mapping import Binding, Calibration, CalibrationRejected, PRESETS, guided_ranges
from .pipeline import FrameResult, PipelineState, make_report, process_frame
from .segmentation import Mask
from .shape import ShapeParams


def encode_mask_rle(mask: Mask, factor: int = 1) -> dict:
    """Downscale by OR over factor x factor blocks, then run-length encode the
    flattened row-major bitmap as alternating run lengths starting with a
    (possibly zero-length) 0-run."""
    if factor < 1:
        raise ValueError("downscale factor must be >= 1")
    bits = mask.bits
    h, w = bits.shape
    dh, dw = -(-h // factor), -(-w // factor)
    if factor == 1:
        small = bits
    else:
        padded = np.zeros((dh * factor, dw * factor), dtype=bool)
        padded[:h, :w] = bits
        small = padded.reshape(dh, factor, dw, factor).any(axis=(1, 3))
    flat = small.ravel().astype(np.int8)
    runs = []
    if flat.size:
        change = np.flatnonzero(np.diff(flat)) + 1
        bounds = np.concatenate(([0], change, [flat.size]))
        lengths = np.diff(bounds).tolist()
        if flat[0] == 1:
            runs.append(0)
        runs.extend(lengths)
    else:
        runs = [0]
    return {"width": dw, "height": dh, "factor": factor, "runs": runs}


def decode_mask_rle(rle: dict) -> np.ndarray:
    """Inverse of encode_mask_rle at the downscaled resolution."""
    total = rle["width"] * rle["height"]
    flat = np.zeros(total, dtype=bool)
    pos, val = 0, False
    for run in rle["runs"]:
        if val:
            flat[pos : pos + run] = True
        pos += run
        val = not val
    if pos != total:
        raise ValueError(f"runs sum to {pos}, expected {total}")
    return flat.reshape(rle["height"], rle["width"])


GUIDED_CAPTURE_FRAMES = 30


@dataclass
class _Capture:
    phase: str  # "closed" | "open"
    remaining: int = GUIDED_CAPTURE_FRAMES
    sums: dict[str, float] = field(default_factory=dict)

    def observe(self, shape: ShapeParams):
        for src in ShapeParams.SOURCES:
            self.sums[src] = self.sums.get(src, 0.0) + shape.source(src)
        self.remaining -= 1

    def means(self) -> dict[str, float]:
        n = GUIDED_CAPTURE_FRAMES - self.remaining
        return {k: v / n for k, v in self.sums.items()}


class PipelineRunner(threading.Thread):
    """Owns all mutable pipeline state. Frames come from ``source_factory``
    (re-invoked when the source is exhausted and ``loop_source`` is set);
    commands are drained between frames; telemetry is fanned out to bounded
    per-subscriber queues."""

    def __init__(self, source_factory: Callable[[], Iterable[Frame]],
                 cfg: RuntimeConfig, sinks=(), pace: bool = True,
                 loop_source: bool = True, telemetry_buffer: int = 32):
        super().__init__(daemon=True)
        self.source_factory = source_factory
        self.cfg = cfg
        self.sinks = list(sinks)
        self.pace = pace
        self.loop_source = loop_source
        self.telemetry_buffer = telemetry_buffer
        self.state = PipelineState()
        self.commands: queue.Queue = queue.Queue()
        self.subscribers: list[deque] = []
        self._sub_lock = threading.Lock()
        self._revision = 0
        self._applied_revision = 0
        self._rev_lock = threading.Lock()
        self._stop_event = threading.Event()
        self._closed_means: dict[str, float] | None = None
        self._capture: _Capture | None = None
        self._fps_window: deque = deque(maxlen=30)
        self.calibration_error: str | None = None

    # -- client-facing API (any thread) ------------------------------------

    def subscribe(self) -> deque:
        q: deque = deque(maxlen=self.telemetry_buffer)
        with self._sub_lock:
            self.subscribers.append(q)
        return q

    def unsubscribe(self, q: deque):
        with self._sub_lock:
            if q in self.subscribers:
                self.subscribers.remove(q)

    def handle_command(self, msg: dict) -> dict:
        """Validate and enqueue one command. Returns the Ack/Rejection/config
        reply dict. Unknown input fields are ignored."""
        kind = msg.get("type")
        try:
            if kind == "get_config":
                return {"type": "config", "revision": self._applied_revision,
                        "config": self.cfg.to_dict()}
            mutator = self._build_mutator(kind, msg)
        except (KeyError, TypeError) as exc:
            return {"type": "rejection", "reason": f"malformed command: {exc}"}
        except ValueError as exc:
            return {"type": "rejection", "reason": str(exc)}
        with self._rev_lock:
            self._revision += 1
            rev = self._revision
        self.commands.put((rev, mutator))
        return {"type": "ack", "revision": rev}

    def stop(self):
        self._stop_event.set()

    # -- command construction (validation happens here, pre-Ack) -----------

    def _build_mutator(self, kind: str, msg: dict) -> Callable[[], None]:
        if kind == "set_thresholds":
            i_min, r_max = int(msg["i_min"]), int(msg["r_max"])
            if not (0 <= i_min <= 255):
                raise ValueError("i_min out of range")
            if not (0 <= r_max <= 255):
                raise ValueError("r_max out of range")

            def apply():
                self.cfg.segmentation.i_min = i_min
                self.cfg.segmentation.r_max = r_max
            return apply

        if kind == "toggle_filter":
            which, on = msg["which"], bool(msg["on"])
            if which not in ("A", "B"):
                raise ValueError(f"unknown filter {which!r}")

            def apply():
                if which == "A":
                    self.cfg.filters.a_enabled = on
                else:
                    self.cfg.filters.b_enabled = on
            return apply

        if kind == "set_filter_params":
            t_a = float(msg.get("t_a", self.cfg.filters.t_a))
            alpha = float(msg.get("alpha", self.cfg.filters.alpha))
            k_max = int(msg.get("k_max", self.cfg.filters.k_max))
            if t_a <= 0:
                raise ValueError("t_a out of range")
            if not (0 < alpha <= 1):
                raise ValueError("alpha out of range")
            if k_max < 1:
                raise ValueError("k_max out of range")

            def apply():
                self.cfg.filters.t_a = t_a
                self.cfg.filters.alpha = alpha
                self.cfg.filters.k_max = k_max
            return apply

        if kind == "set_mapping":
            if "preset" in msg:
                name = msg["preset"]
                if name not in PRESETS:
                    raise ValueError(f"unknown preset {name!r}")
                bindings = [Binding(**asdict(b)) for b in PRESETS[name].bindings]
            else:
                bindings = [Binding(source=b["source"],
                                    channel=b.get("channel", 0),
                                    controller=b.get("controller", 1),
                                    curve=b.get("curve", "linear"))
                            for b in msg["bindings"]]
                name = None

            def apply():
                self.cfg.preset = name
                self.cfg.bindings = bindings
            return apply

        if kind == "calibrate":
            phase = msg["phase"]
            if phase not in ("closed", "open"):
                raise ValueError(f"unknown calibration phase {phase!r}")

            def apply():
                self._capture = _Capture(phase)
            return apply

        raise ValueError(f"unknown command type {kind!r}")

    # -- loop internals ------------------------------------------------------

    def _drain_commands(self):
        while True:
            try:
                rev, mutator = self.commands.get_nowait()
            except queue.Empty:
                return
            mutator()
            self._applied_revision = rev

    def _finish_capture(self):
        cap = self._capture
        self._capture = None
        if cap.phase == "closed":
            self._closed_means = cap.means()
            return
        if self._closed_means is None:
            self.calibration_error = "open phase captured before closed phase"
            return
        # Only calibrate the currently bound sources: an unused parameter
        # that barely moved must not reject the whole calibration.
        bound = {b.source for b in self.cfg.bindings}
        try:
            ranges = guided_ranges(
                {s: self._closed_means[s] for s in bound},
                {s: cap.means()[s] for s in bound})
        except CalibrationRejected as exc:
            self.calibration_error = str(exc)
            return
        self.calibration_error = None
        self.cfg.calibration = Calibration(mode="guided", ranges=ranges)
        with self._rev_lock:
            self._revision += 1
            self._applied_revision = self._revision

    def _telemetry(self, result: FrameResult, proc_ms: float) -> dict:
        now = time.perf_counter()
        self._fps_window.append(now)
        fps = 0.0
        if len(self._fps_window) >= 2:
            span = self._fps_window[-1] - self._fps_window[0]
            if span > 0:
                fps = (len(self._fps_window) - 1) / span
        sp = result.shape
        return {
            "type": "telemetry",
            "frame": result.frame_id,
            "t_ms": result.t_ms,
            "blob": result.blob_present,
            "shape": {
                "height": sp.height, "width": sp.width,
                "major": sp.major, "minor": sp.minor,
                "q": sp.q, "m": sp.m, "area": sp.area,
                "cx": sp.centroid[0], "cy": sp.centroid[1],
            },
            "cc": [[e.channel, e.controller, e.value] for e in result.events],
            "mask_rle": encode_mask_rle(result.mask, self.cfg.downscale),
            "stats": {"fps": fps, "proc_ms": proc_ms},
            "revision": self._applied_revision,
        }

    def run(self):
        while not self._stop_event.is_set():
            frames = iter(self.source_factory())
            deadline = None
            prev_t = None
            for frame in frames:
                if self._stop_event.is_set():
                    break
                self._drain_commands()
                t0 = time.perf_counter()
                result = process_frame(frame, self.cfg, self.state)
                if self._capture is not None and result.blob_present:
                    self._capture.observe(result.shape)
                    if self._capture.remaining == 0:
                        self._finish_capture()
                for e in result.events:
                    for sink in self.sinks:
                        sink.send(e)
                proc_ms = (time.perf_counter() - t0) * 1000.0
                msg = self._telemetry(result, proc_ms)
                with self._sub_lock:
                    for q in self.subscribers:
                        q.append(msg)  # deque(maxlen) drops oldest
                if self.pace:
                    # Pace to the source frame rate via the timestamp deltas.
                    if deadline is None:
                        deadline = time.perf_counter()
                    else:
                        deadline += max(frame.t_ms - prev_t, 0.0) / 1000.0
                        delay = deadline - time.perf_counter()
                        if delay > 0:
                            time.sleep(delay)
                prev_t = frame.t_ms
            if not self.loop_source:
                break

    def report(self, wall_s: float):
        return make_report(self.state, wall_s)


def create_app(runner: PipelineRunner):
    """FastAPI app exposing the /ws control+telemetry endpoint."""
    app = FastAPI(title="mouthpipe control service")
    app.state.runner = runner

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        sub = runner.subscribe()
        loop = asyncio.get_running_loop()

        async def pump_telemetry():
            while True:
                try:
                    msg = sub.popleft()
                except IndexError:
                    await asyncio.sleep(0.005)
                    continue
                await ws.send_text(json.dumps(msg))

        pump = asyncio.create_task(pump_telemetry())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    cmd = json.loads(text)
                except json.JSONDecodeError as exc:
                    reply = {"type": "rejection", "reason": f"bad JSON: {exc}"}
                else:
                    reply = await loop.run_in_executor(
                        None, runner.handle_command, cmd)
                await ws.send_text(json.dumps(reply))
        except WebSocketDisconnect:
            pass
        finally:
            pump.cancel()
            runner.unsubscribe(sub)

    return app
