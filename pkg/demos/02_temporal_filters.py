"""Walkthrough: the two temporal noise filters.

Filter A rejects isolated spikes (output differing from the average of the
two most recent accepted outputs by more than t_a); Filter B smooths with an
exponential moving average. Both can be toggled independently at runtime.
Run: python3 demos/02_temporal_filters.py
"""

import random

from mouthpipe.temporal_filters import FilterParams, FilterState, apply_filters

random.seed(1)

# a mouth-opening gesture with lighting-glitch spikes on top
signal = []
for k in range(60):
    base = 6.0 if k < 20 else (6.0 + (k - 20) * 1.2 if k < 40 else 30.0)
    signal.append(base + random.gauss(0, 0.3))
signal[10] += 40.0  # spike
signal[50] -= 35.0  # spike

configs = {
    "raw          ": FilterParams(a_enabled=False, b_enabled=False),
    "A only       ": FilterParams(a_enabled=True, b_enabled=False, t_a=8.0),
    "B only       ": FilterParams(a_enabled=False, b_enabled=True, alpha=0.4),
    "A then B     ": FilterParams(a_enabled=True, b_enabled=True, t_a=8.0, alpha=0.4),
}

outputs = {}
for name, params in configs.items():
    st = FilterState()
    outputs[name] = [apply_filters(st, x, params) for x in signal]

print("frame  " + "  ".join(configs))
for k in (8, 9, 10, 11, 12, 30, 48, 49, 50, 51, 59):
    row = "  ".join(f"{outputs[name][k]:13.2f}" for name in configs)
    print(f"{k:5d}  {row}")

print("\nnote how frame 10 and 50 spikes vanish with Filter A on,")
print("and how Filter B smooths the ramp without losing the step.")
