"""Temporal noise filters for the per-frame shape signals.

Filter A is a spike rejector: a sample that differs from the average of the
two most recently *accepted* outputs by more than t_a is discarded and the
previous output is re-emitted. Because the accepted history never updates
while rejecting, a genuine large step would be rejected forever; a cap of
k_max consecutive rejections force-accepts the next sample.

Filter B is an exponential moving average, y = alpha*x + (1-alpha)*y_prev
(alpha=0.5 is a plain average of current and previous). Both filters can be
independently enabled or disabled while running; order is fixed A then B so
spikes are rejected before they are smoothed into the average.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class FilterParams:
    a_enabled: bool = True
    t_a: float = 20.0
    k_max: int = 5
    b_enabled: bool = True
    alpha: float = 0.5

    def validate(self):
        if self.t_a <= 0:
            raise ValueError("t_a must be > 0")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if not (0 < self.alpha <= 1):
            raise ValueError("alpha must be in (0, 1]")


@dataclass
class FilterState:
    """Per-channel state. a_history holds the last two accepted A-outputs
    (most recent last)."""

    a_history: list = field(default_factory=list)
    rejections: int = 0
    b_prev: float | None = None

    def reset(self):
        self.a_history.clear()
        self.rejections = 0
        self.b_prev = None


def filter_a_step(state: FilterState, x: float, params: FilterParams) -> float:
    hist = state.a_history
    if len(hist) < 2:
        accept = True
    elif abs(x - (hist[-1] + hist[-2]) / 2.0) <= params.t_a:
        accept = True
    elif state.rejections + 1 >= params.k_max:
        accept = True  # escape rule: cap reached, force-accept
    else:
        state.rejections += 1
        return hist[-1]
    state.rejections = 0
    hist.append(x)
    if len(hist) > 2:
        del hist[0]
    return x


def filter_b_step(state: FilterState, x: float, params: FilterParams) -> float:
    if state.b_prev is None:
        state.b_prev = x
    else:
        state.b_prev = params.alpha * x + (1.0 - params.alpha) * state.b_prev
    return state.b_prev


def apply_filters(state: FilterState, x: float, params: FilterParams) -> float:
    y = x
    if params.a_enabled:
        y = filter_a_step(state, y, params)
    if params.b_enabled:
        y = filter_b_step(state, y, params)
    return y


class FilterBank:
    """One FilterState per named signal channel (height, width, m, ...)."""

    def __init__(self):
        self.states: dict[str, FilterState] = {}

    def step(self, channel: str, x: float, params: FilterParams) -> float:
        state = self.states.setdefault(channel, FilterState())
        return apply_filters(state, x, params)

    def reset(self):
        self.states.clear()
