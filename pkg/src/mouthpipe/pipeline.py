"""Per-frame orchestration: threshold -> largest component -> blob PCA ->
shape parameters -> temporal filters -> mapping -> dedup -> sinks.

When no acceptable blob is found the previous good ShapeParams is held and
fed through the filters unchanged, so the emitted control stream never gaps;
an interior run of blank frames produces no CC changes. State is owned by a
single loop; config replacements apply at frame boundaries only.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .config import RuntimeConfig
from .frame_io import Frame
from .mapping import evaluate
from .midi import ControlEvent, Dedup
from .segmentation import Mask, largest_component, threshold
from .shape import ShapeParams, blob_stats, shape_params
from .temporal_filters import FilterBank

STAGES = ("segment", "component", "shape", "filter", "map")


@dataclass
class PipelineState:
    filters: FilterBank = field(default_factory=FilterBank)
    dedup: Dedup = field(default_factory=Dedup)
    last_shape: ShapeParams = field(default_factory=ShapeParams.zero)
    frames_processed: int = 0
    frames_noblob: int = 0
    stage_us: dict[str, list[float]] = field(
        default_factory=lambda: {s: [] for s in STAGES})


@dataclass
class FrameResult:
    frame_id: int
    t_ms: float
    blob_present: bool
    shape: ShapeParams  # held previous value when blob absent
    filtered: dict[str, float]
    events: list[ControlEvent]  # post-dedup
    mask: Mask  # largest component (empty when blob absent), for telemetry
    stage_us: dict[str, float]


def process_frame(f: Frame, cfg: RuntimeConfig, st: PipelineState) -> FrameResult:
    timings = {}
    t0 = time.perf_counter_ns()
    mask = threshold(f, cfg.segmentation)
    t1 = time.perf_counter_ns()
    timings["segment"] = (t1 - t0) / 1000.0

    blob = largest_component(mask, cfg.segmentation.min_blob_px)
    t2 = time.perf_counter_ns()
    timings["component"] = (t2 - t1) / 1000.0

    present = blob is not None
    if present:
        sp = shape_params(blob_stats(blob))
        st.last_shape = sp
    else:
        sp = st.last_shape
        st.frames_noblob += 1
        blob = Mask(f.width, f.height, np.zeros((f.height, f.width), dtype=bool))
    t3 = time.perf_counter_ns()
    timings["shape"] = (t3 - t2) / 1000.0

    filtered = {src: st.filters.step(src, sp.source(src), cfg.filters)
                for src in ShapeParams.SOURCES}
    t4 = time.perf_counter_ns()
    timings["filter"] = (t4 - t3) / 1000.0

    events = evaluate(cfg.bindings, filtered, cfg.calibration, f.t_ms)
    if cfg.dedup_enabled:
        events = [e for e in events if st.dedup.step(e)]
    t5 = time.perf_counter_ns()
    timings["map"] = (t5 - t4) / 1000.0

    frame_id = st.frames_processed
    st.frames_processed += 1
    for stage, us in timings.items():
        st.stage_us[stage].append(us)
    return FrameResult(frame_id, f.t_ms, present, sp, filtered, events, blob, timings)


@dataclass
class SessionReport:
    frames: int
    frames_noblob: int
    fps: float
    wall_s: float
    truncated: bool
    stages: dict[str, dict[str, float]]  # per stage: mean/median/p99 microseconds

    def to_dict(self) -> dict:
        return {
            "frames": self.frames,
            "frames_noblob": self.frames_noblob,
            "fps": self.fps,
            "wall_s": self.wall_s,
            "truncated": self.truncated,
            "stages": self.stages,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _stage_stats(samples: list[float]) -> dict[str, float]:
    if not samples:
        return {"mean_us": 0.0, "median_us": 0.0, "p99_us": 0.0}
    ordered = sorted(samples)
    p99 = ordered[min(len(ordered) - 1, int(0.99 * len(ordered)))]
    return {"mean_us": statistics.fmean(samples),
            "median_us": statistics.median(samples),
            "p99_us": p99}


def make_report(st: PipelineState, wall_s: float, truncated: bool = False) -> SessionReport:
    fps = st.frames_processed / wall_s if wall_s > 0 else 0.0
    return SessionReport(
        frames=st.frames_processed,
        frames_noblob=st.frames_noblob,
        fps=fps,
        wall_s=wall_s,
        truncated=truncated,
        stages={s: _stage_stats(v) for s, v in st.stage_us.items()},
    )


def run(source: Iterable[Frame], cfg: RuntimeConfig, sinks=(),
        on_result=None) -> SessionReport:
    """Process all frames in order, delivering emitted events to each sink.
    Source I/O errors end the session with a truncated report."""
    st = PipelineState()
    truncated = False
    start = time.perf_counter()
    try:
        for frame in source:
            result = process_frame(frame, cfg, st)
            for e in result.events:
                for sink in sinks:
                    sink.send(e)
            if on_result is not None:
                on_result(result)
    except (OSError, IOError):
        truncated = True
    wall_s = time.perf_counter() - start
    return make_report(st, wall_s, truncated)
