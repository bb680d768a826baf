# zakframe/types.py
from typing import Dict, List, Tuple

from .errors import SpecValidationError

FAMILIES: List[Tuple[str, str]] = [
    ("indicator", "Indicator of [0,1)"),
    ("gaussian",  "Gaussian"),
    ("hermite",   "Hermite function"),
    ("bspline",   "B-spline"),
    ("tp",        "Totally positive (finite type)"),
    ("sampled",   "Sampled"),
]

KEY_TO_LABEL: Dict[str, str] = {key: label for key, label in FAMILIES}

# Families whose time side is compactly supported (exact finite Zak sums).
COMPACT_FAMILIES = ("indicator", "bspline")

SIDES: Tuple[str, str] = ("time", "frequency")

CONSTANT_MODES: Tuple[str, str] = ("raw", "certified")

EVENT_MODES: List[Tuple[str, str]] = [
    ("raw_grid_event",  "Grid extrema against m*alpha, m*beta"),
    ("certified_event", "Grid extrema with the m*q/2 mesh margins"),
]

VERDICTS: List[Tuple[str, str]] = [
    ("certified_frame",    "Frame bounds certified on all of Q"),
    ("frame_on_grid_only", "Bounds hold on the evaluation grid only"),
    ("fail",               "Bounds fail on the evaluation grid"),
]

VERDICT_KEYS: Tuple[str, ...] = tuple(key for key, _ in VERDICTS)
EVENT_MODE_KEYS: Tuple[str, ...] = tuple(key for key, _ in EVENT_MODES)


def check_side(side: str) -> str:
    if side not in SIDES:
        raise SpecValidationError(f"side must be one of {SIDES}, got {side!r}")
    return side
