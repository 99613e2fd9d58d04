"""mouthpipe: vision-based mouth-shape-to-MIDI control pipeline.

Extracts the dark mouth-opening blob from video frames with a colour/intensity
threshold, keeps the largest connected region, characterizes it with a 2x2
PCA (centroid, major/minor axes, orientation), denoises the resulting shape
signals with two toggleable temporal filters, and maps calibrated parameters
to MIDI control-change streams.
"""

from .frame_io import Frame, Scenario, read_ppm, write_ppm, read_raw_stream, write_raw_stream, render_scenario
from .segmentation import SegmentationParams, Mask, threshold, largest_component
from .shape import BlobStats, ShapeParams, blob_stats, shape_params
from .temporal_filters import FilterParams, FilterState, filter_a_step, filter_b_step, apply_filters
from .mapping import Calibration, Binding, MappingPreset, normalize, to_cc, evaluate, PRESETS
from .midi import ControlEvent, encode_cc, dedup, write_smf

__version__ = "0.1.0"
