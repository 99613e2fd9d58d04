"""Command-line entry point.

Subcommands:
  run        live pipeline + WebSocket control/telemetry service
  offline    batch run: per-frame shape CSV + captured SMF
  bench      throughput/latency report (SessionReport JSON on stdout)
  synth      render a scenario JSON to an MVS1 raw stream
  calibrate  guided two-phase calibration written back to the config file

Sources (--source) are auto-detected: a directory of .ppm files, an .mvs1
raw stream, or a scenario .json. Config resolution: flag > MOUTHPIPE_CONFIG
environment variable > built-in defaults. Exit codes: 1 config error,
2 source error, 3 sink error.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import time
from pathlib import Path
from typing import Iterable, Iterator

from . import frame_io
from .config import ConfigError, RuntimeConfig
from .control_service import PipelineRunner, create_app
from .frame_io import Frame, FrameIOError, Scenario
from .mapping import Calibration, CalibrationRejected, guided_ranges
from .midi import HexSink, SmfSink, UdpSink
from .pipeline import PipelineState, make_report, process_frame
from .shape import ShapeParams

EXIT_CONFIG = 1
EXIT_SOURCE = 2
EXIT_SINK = 3

CSV_COLUMNS = "frame,t_ms,blob,area,cx,cy,height,width,major,minor,q,m"


class SourceError(Exception):
    pass


def open_source(path: str, fps: float = 30.0) -> tuple[callable, bool]:
    """Returns (factory yielding fresh Frame iterators, loopable flag)."""
    p = Path(path)
    if p.is_dir():
        ppms = sorted(p.glob("*.ppm"))
        if not ppms:
            raise SourceError(f"no .ppm files in {p}")

        def factory() -> Iterator[Frame]:
            for k, fp in enumerate(ppms):
                f = frame_io.read_ppm(fp.read_bytes())
                f.t_ms = 1000.0 * k / fps
                yield f
        return factory, False
    if not p.exists():
        raise SourceError(f"source {p} does not exist")
    if p.suffix == ".json":
        scenario = Scenario.from_json(p.read_text())
        return (lambda: frame_io.scenario_frames(scenario)), True
    if p.suffix in (".mvs1", ".raw"):
        data = p.read_bytes()
        return (lambda: frame_io.read_raw_stream(data)), False
    raise SourceError(f"cannot detect source kind of {p}")


def load_config(args) -> RuntimeConfig:
    path = getattr(args, "config", None) or os.environ.get("MOUTHPIPE_CONFIG")
    if path:
        try:
            cfg = RuntimeConfig.from_json(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    else:
        cfg = RuntimeConfig()
    if getattr(args, "listen", None):
        cfg.listen = args.listen
    if getattr(args, "midi_udp", None):
        host, _, port = args.midi_udp.rpartition(":")
        cfg.sink.kind = "udp"
        cfg.sink.udp_host = host or "127.0.0.1"
        cfg.sink.udp_port = int(port)
    cfg.validate()
    return cfg


def make_sinks(cfg: RuntimeConfig):
    if cfg.sink.kind == "udp":
        return [UdpSink(cfg.sink.udp_host, cfg.sink.udp_port)]
    if cfg.sink.kind == "smf":
        return [SmfSink(cfg.sink.smf_path, cfg.sink.smf())]
    if cfg.sink.kind == "stdout_hex":
        return [HexSink()]
    raise ConfigError(f"unknown sink kind {cfg.sink.kind!r}")


def fmt6(x: float) -> str:
    """6 significant digits, stable across runs for byte-identical CSVs."""
    return f"{x:.6g}"


def write_csv_row(out, result) -> None:
    sp = result.shape
    out.write(",".join([
        str(result.frame_id), fmt6(result.t_ms),
        "1" if result.blob_present else "0",
        str(sp.area), fmt6(sp.centroid[0]), fmt6(sp.centroid[1]),
        fmt6(sp.height), fmt6(sp.width), fmt6(sp.major), fmt6(sp.minor),
        fmt6(sp.q), fmt6(sp.m),
    ]) + "\n")


def cmd_offline(args) -> int:
    cfg = load_config(args)
    factory, _ = open_source(args.source, args.fps)
    st = PipelineState()
    events = []
    with open(args.out_csv, "w") as csv_out:
        csv_out.write(CSV_COLUMNS + "\n")
        for frame in factory():
            result = process_frame(frame, cfg, st)
            write_csv_row(csv_out, result)
            events.extend(result.events)
    smf_sink = SmfSink(args.out_smf, cfg.sink.smf())
    smf_sink.events = events
    smf_sink.close()
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args)
    factory, _ = open_source(args.source, args.fps)
    reports = []
    for _ in range(args.repeat):
        st = PipelineState()
        start = time.perf_counter()
        for frame in factory():
            process_frame(frame, cfg, st)
        reports.append(make_report(st, time.perf_counter() - start))
    best = max(reports, key=lambda r: r.fps)
    print(best.to_json())
    return 0


def cmd_synth(args) -> int:
    scenario = Scenario.from_json(Path(args.scenario).read_text())
    frames = list(frame_io.scenario_frames(scenario))
    num, den = _fps_rational(scenario.fps)
    Path(args.out).write_bytes(frame_io.write_raw_stream(frames, num, den))
    print(f"wrote {len(frames)} frames to {args.out}", file=sys.stderr)
    return 0


def _fps_rational(fps: float) -> tuple[int, int]:
    if abs(fps - round(fps)) < 1e-9:
        return int(round(fps)), 1
    # NTSC-style rates: denominator 1001 covers 29.97/59.94
    return int(round(fps * 1001)), 1001


def _parse_range(text: str) -> tuple[int, int]:
    a, _, b = text.partition(":")
    return int(a), int(b)


def cmd_calibrate(args) -> int:
    cfg = load_config(args)
    factory, _ = open_source(args.source, args.fps)
    closed_lo, closed_hi = _parse_range(args.closed_range)
    open_lo, open_hi = _parse_range(args.open_range)
    st = PipelineState()
    sums = {"closed": {}, "open": {}}
    counts = {"closed": 0, "open": 0}
    for k, frame in enumerate(factory()):
        result = process_frame(frame, cfg, st)
        phase = None
        if closed_lo <= k < closed_hi:
            phase = "closed"
        elif open_lo <= k < open_hi:
            phase = "open"
        if phase and result.blob_present:
            counts[phase] += 1
            for src in ShapeParams.SOURCES:
                sums[phase][src] = sums[phase].get(src, 0.0) + result.shape.source(src)
    for phase in ("closed", "open"):
        if counts[phase] == 0:
            print(f"calibrate: no blob frames in {phase} range", file=sys.stderr)
            return EXIT_SOURCE
    bound = {b.source for b in cfg.bindings}
    means = {ph: {s: sums[ph][s] / counts[ph] for s in bound}
             for ph in ("closed", "open")}
    try:
        ranges = guided_ranges(means["closed"], means["open"])
    except CalibrationRejected as exc:
        print(f"calibrate: rejected: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    cfg.calibration = Calibration(mode="guided", ranges=ranges)
    out_path = args.config or os.environ.get("MOUTHPIPE_CONFIG")
    if not out_path:
        print("calibrate: no config file to write back to", file=sys.stderr)
        return EXIT_CONFIG
    Path(out_path).write_text(cfg.to_json())
    for src, r in ranges.items():
        print(f"{src}: [{fmt6(r.p_min)}, {fmt6(r.p_max)}]", file=sys.stderr)
    return 0


def cmd_run(args) -> int:
    import uvicorn

    cfg = load_config(args)
    factory, loopable = open_source(args.source, args.fps)
    sinks = make_sinks(cfg)
    runner = PipelineRunner(factory, cfg, sinks=sinks, pace=True,
                            loop_source=loopable)
    app = create_app(runner)
    host, _, port = cfg.listen.rpartition(":")
    start = time.perf_counter()
    runner.start()
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port),
                    log_level="warning")
    except KeyboardInterrupt:
        pass
    finally:
        runner.stop()
        for sink in sinks:
            sink.close()
        print(runner.report(time.perf_counter() - start).to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mouthpipe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        p.add_argument("--source", required=True,
                       help="ppm directory, .mvs1 stream, or scenario .json")
        p.add_argument("--fps", type=float, default=30.0,
                       help="frame rate for ppm directories (default 30)")
        if config:
            p.add_argument("--config", help="JSON config file")

    p_run = sub.add_parser("run", help="live pipeline + control service")
    add_common(p_run)
    p_run.add_argument("--listen", help="service bind address host:port")
    p_run.add_argument("--midi-udp", help="send MIDI to host:port over UDP")
    p_run.set_defaults(func=cmd_run)

    p_off = sub.add_parser("offline", help="batch analysis to CSV + SMF")
    add_common(p_off)
    p_off.add_argument("--out-csv", required=True)
    p_off.add_argument("--out-smf", required=True)
    p_off.set_defaults(func=cmd_offline)

    p_bench = sub.add_parser("bench", help="throughput benchmark")
    add_common(p_bench)
    p_bench.add_argument("--repeat", type=int, default=1)
    p_bench.set_defaults(func=cmd_bench)

    p_synth = sub.add_parser("synth", help="render scenario to MVS1 stream")
    p_synth.add_argument("--scenario", required=True)
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=cmd_synth)

    p_cal = sub.add_parser("calibrate", help="guided calibration")
    add_common(p_cal)
    p_cal.add_argument("--closed-range", default="0:30",
                       help="frame range A:B of the mouth-closed phase")
    p_cal.add_argument("--open-range", default="30:60",
                       help="frame range A:B of the mouth-open phase")
    p_cal.set_defaults(func=cmd_calibrate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SourceError, FrameIOError, FileNotFoundError) as exc:
        print(f"source error: {exc}", file=sys.stderr)
        return EXIT_SOURCE
    except OSError as exc:
        print(f"sink error: {exc}", file=sys.stderr)
        return EXIT_SINK


if __name__ == "__main__":
    sys.exit(main())
