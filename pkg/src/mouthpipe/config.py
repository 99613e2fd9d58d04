"""Runtime configuration: one JSON file aggregating segmentation thresholds,
filter parameters, calibration, mapping bindings, sink and service settings.

Loaded atomically; live mutations (from the control service) replace whole
sub-structures at frame boundaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

from .mapping import Binding, Calibration, Range, PRESETS
from .midi import SmfConfig
from .segmentation import SegmentationParams
from .temporal_filters import FilterParams


class ConfigError(ValueError):
    pass


@dataclass
class SinkConfig:
    kind: str = "stdout_hex"  # udp | stdout_hex | smf
    udp_host: str = "127.0.0.1"
    udp_port: int = 5004
    smf_path: str = "session.mid"
    ticks_per_quarter: int = 480
    tempo_us_per_quarter: int = 500000

    def smf(self) -> SmfConfig:
        return SmfConfig(self.ticks_per_quarter, self.tempo_us_per_quarter)


@dataclass
class RuntimeConfig:
    segmentation: SegmentationParams = field(default_factory=SegmentationParams)
    filters: FilterParams = field(default_factory=FilterParams)
    calibration: Calibration = field(default_factory=Calibration)
    bindings: list[Binding] = field(
        default_factory=lambda: [Binding(**asdict(b)) for b in PRESETS["wah"].bindings])
    preset: str | None = "wah"
    sink: SinkConfig = field(default_factory=SinkConfig)
    listen: str = "127.0.0.1:8765"
    downscale: int = 2
    dedup_enabled: bool = True

    def validate(self):
        self.segmentation.validate()
        self.filters.validate()
        if self.downscale < 1:
            raise ConfigError("downscale must be >= 1")
        if not self.bindings:
            raise ConfigError("at least one binding required")

    @classmethod
    def from_dict(cls, d: dict) -> "RuntimeConfig":
        try:
            cfg = cls()
            if "segmentation" in d:
                cfg.segmentation = SegmentationParams(**d["segmentation"])
            if "filters" in d:
                cfg.filters = FilterParams(**d["filters"])
            if "calibration" in d:
                c = d["calibration"]
                cfg.calibration = Calibration(
                    mode=c.get("mode", "auto_expand"),
                    ranges={k: Range(*v) for k, v in c.get("ranges", {}).items()})
            if "mapping" in d:
                m = d["mapping"]
                if "preset" in m:
                    name = m["preset"]
                    if name not in PRESETS:
                        raise ConfigError(f"unknown preset {name!r}")
                    cfg.preset = name
                    cfg.bindings = [Binding(**asdict(b)) for b in PRESETS[name].bindings]
                if "bindings" in m:
                    cfg.preset = None
                    cfg.bindings = [Binding(**b) for b in m["bindings"]]
            if "sink" in d:
                cfg.sink = SinkConfig(**d["sink"])
            cfg.listen = d.get("listen", cfg.listen)
            cfg.downscale = d.get("downscale", cfg.downscale)
            cfg.dedup_enabled = d.get("dedup", cfg.dedup_enabled)
            cfg.validate()
            return cfg
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "RuntimeConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        return {
            "segmentation": asdict(self.segmentation),
            "filters": asdict(self.filters),
            "calibration": {
                "mode": self.calibration.mode,
                # auto_expand seeds ranges at +/-inf; skip until observed
                "ranges": {k: [r.p_min, r.p_max]
                           for k, r in self.calibration.ranges.items()
                           if r.p_min <= r.p_max},
            },
            "mapping": ({"preset": self.preset} if self.preset
                        else {"bindings": [asdict(b) for b in self.bindings]}),
            "sink": asdict(self.sink),
            "listen": self.listen,
            "downscale": self.downscale,
            "dedup": self.dedup_enabled,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
