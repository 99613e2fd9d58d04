"""MIDI control-change encoding and delivery.

Messages are always 3 bytes (running status is never used) so golden byte
tests are exact and any receiver copes. Sinks: UDP (one datagram per
message), stdout hex lines, and Standard MIDI File format 0 capture.
"""

from __future__ import annotations

import socket
import sys
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator


class MidiError(Exception):
    pass


class OutOfRange(MidiError):
    pass


class UnsortedEvents(MidiError):
    pass


@dataclass
class ControlEvent:
    t_ms: float
    channel: int  # 0-15
    controller: int  # 0-127
    value: int  # 0-127


def encode_cc(e: ControlEvent) -> bytes:
    """[0xB0 | channel, controller, value]."""
    if not (0 <= e.channel <= 15):
        raise OutOfRange(f"channel {e.channel}")
    if not (0 <= e.controller <= 127):
        raise OutOfRange(f"controller {e.controller}")
    if not (0 <= e.value <= 127):
        raise OutOfRange(f"value {e.value}")
    return bytes((0xB0 | e.channel, e.controller, e.value))


class Dedup:
    """Drops an event iff the previously emitted event for the same
    (channel, controller) carried the same value."""

    def __init__(self):
        self.last: dict[tuple[int, int], int] = {}

    def step(self, e: ControlEvent) -> bool:
        key = (e.channel, e.controller)
        if self.last.get(key) == e.value:
            return False
        self.last[key] = e.value
        return True


def dedup(events: Iterable[ControlEvent]) -> Iterator[ControlEvent]:
    d = Dedup()
    for e in events:
        if d.step(e):
            yield e


def encode_vlq(n: int) -> bytes:
    """MIDI variable-length quantity, 7 bits per byte, high bit = continue."""
    if n < 0:
        raise OutOfRange(f"vlq of negative {n}")
    out = [n & 0x7F]
    n >>= 7
    while n:
        out.append((n & 0x7F) | 0x80)
        n >>= 7
    return bytes(reversed(out))


@dataclass
class SmfConfig:
    ticks_per_quarter: int = 480
    tempo_us_per_quarter: int = 500000

    def __post_init__(self):
        if self.ticks_per_quarter < 1:
            raise ValueError("ticks_per_quarter must be >= 1")


def write_smf(events: list[ControlEvent], cfg: SmfConfig = SmfConfig()) -> bytes:
    """Format-0 SMF: tempo meta event, the CC events, end-of-track.

    Delta times are round(dt_ms * tpq * 1000 / tempo_us); events must be
    sorted by t_ms.
    """
    track = bytearray()
    track += encode_vlq(0)
    track += bytes((0xFF, 0x51, 0x03))
    track += cfg.tempo_us_per_quarter.to_bytes(3, "big")
    prev_ms = 0.0
    for e in events:
        if e.t_ms < prev_ms:
            raise UnsortedEvents(f"event at {e.t_ms} ms after {prev_ms} ms")
        delta = round((e.t_ms - prev_ms) * cfg.ticks_per_quarter * 1000
                      / cfg.tempo_us_per_quarter)
        prev_ms = e.t_ms
        track += encode_vlq(delta)
        track += encode_cc(e)
    track += encode_vlq(0)
    track += bytes((0xFF, 0x2F, 0x00))

    header = (b"MThd" + (6).to_bytes(4, "big")
              + (0).to_bytes(2, "big") + (1).to_bytes(2, "big")
              + cfg.ticks_per_quarter.to_bytes(2, "big"))
    return header + b"MTrk" + len(track).to_bytes(4, "big") + bytes(track)


def read_smf(data: bytes) -> tuple[SmfConfig, list[ControlEvent]]:
    """Minimal format-0 reader (round-trip checks and offline tooling)."""
    if data[:4] != b"MThd":
        raise MidiError("not an SMF")
    tpq = int.from_bytes(data[12:14], "big")
    pos = 14
    if data[pos : pos + 4] != b"MTrk":
        raise MidiError("missing MTrk chunk")
    length = int.from_bytes(data[pos + 4 : pos + 8], "big")
    pos += 8
    end = pos + length
    tempo = 500000
    ticks = 0
    events = []
    while pos < end:
        delta = 0
        while True:
            b = data[pos]
            pos += 1
            delta = (delta << 7) | (b & 0x7F)
            if not (b & 0x80):
                break
        ticks += delta
        status = data[pos]
        if status == 0xFF:
            meta, mlen = data[pos + 1], data[pos + 2]
            payload = data[pos + 3 : pos + 3 + mlen]
            pos += 3 + mlen
            if meta == 0x51:
                tempo = int.from_bytes(payload, "big")
            if meta == 0x2F:
                break
        elif status & 0xF0 == 0xB0:
            t_ms = ticks * tempo / (tpq * 1000)
            events.append(ControlEvent(t_ms, status & 0x0F,
                                       data[pos + 1], data[pos + 2]))
            pos += 3
        else:
            raise MidiError(f"unexpected status byte {status:#x}")
    return SmfConfig(tpq, tempo), events


class UdpSink:
    """One datagram per MIDI message. The socket is non-blocking; a
    would-block drop is counted rather than stalling the frame loop."""

    def __init__(self, host: str, port: int):
        self.addr = (host, port)
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sock.setblocking(False)
        self.dropped = 0

    def send(self, e: ControlEvent):
        try:
            self.sock.sendto(encode_cc(e), self.addr)
        except BlockingIOError:
            self.dropped += 1

    def close(self):
        self.sock.close()


class HexSink:
    """Uppercase space-separated hex, one message per line: t=<ms> B0 4A 64."""

    def __init__(self, out: IO[str] | None = None):
        self.out = out or sys.stdout

    def send(self, e: ControlEvent):
        payload = " ".join(f"{b:02X}" for b in encode_cc(e))
        self.out.write(f"t={e.t_ms:g} {payload}\n")

    def close(self):
        pass


class SmfSink:
    """Accumulates events, writes a format-0 SMF on close."""

    def __init__(self, path: str, cfg: SmfConfig = SmfConfig()):
        self.path = path
        self.cfg = cfg
        self.events: list[ControlEvent] = []

    def send(self, e: ControlEvent):
        self.events.append(e)

    def close(self):
        with open(self.path, "wb") as fh:
            fh.write(write_smf(self.events, self.cfg))
