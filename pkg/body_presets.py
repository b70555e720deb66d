# Named body definitions accepted wherever a body JSON file is.
# Each entry is the JSON form read by ConvexBody.from_dict.

import os
from typing import Dict, List

from billiard_errors import ConfigError
from convex_body import ConvexBody, load_body

BODY_PRESETS: Dict[str, dict] = {
    "circle": {"kind": "sphere", "dim_m": 1, "radius": 1.0},
    "ellipse-2-1": {"kind": "ellipsoid", "dim_m": 1, "semi_axes": [2.0, 1.0]},
    "sphere-2": {"kind": "sphere", "dim_m": 2, "radius": 1.0},
    "sphere-3": {"kind": "sphere", "dim_m": 3, "radius": 1.0},
    "sphere-4": {"kind": "sphere", "dim_m": 4, "radius": 1.0},
    "ellipsoid-1.1-1-0.9": {"kind": "ellipsoid", "dim_m": 2, "semi_axes": [1.1, 1.0, 0.9]},
    "ellipsoid-1.05-1-0.95": {"kind": "ellipsoid", "dim_m": 2, "semi_axes": [1.05, 1.0, 0.95]},
    # x^4 + y^4 + z^4 + x^2 + y^2 + z^2 = 2
    "quartic-ball": {
        "kind": "implicit",
        "dim_m": 2,
        "terms": [
            [1.0, [4, 0, 0]], [1.0, [0, 4, 0]], [1.0, [0, 0, 4]],
            [1.0, [2, 0, 0]], [1.0, [0, 2, 0]], [1.0, [0, 0, 2]],
            [-2.0, [0, 0, 0]],
        ],
    },
}

# Bodies whose closed-form oracle applies
ROUND_PRESETS = ("circle", "sphere-2", "sphere-3", "sphere-4")


def preset_names() -> List[str]:
    return sorted(BODY_PRESETS)


def preset_body(name: str) -> ConvexBody:
    if name not in BODY_PRESETS:
        raise ConfigError(f"unknown body preset {name!r}; known presets: {', '.join(preset_names())}")
    return ConvexBody.from_dict(BODY_PRESETS[name])


def resolve_body(reference: str) -> ConvexBody:
    """A preset name or the path of a body JSON file"""
    if reference in BODY_PRESETS:
        return preset_body(reference)
    if os.path.exists(reference):
        return load_body(reference)
    raise ConfigError(f"{reference!r} is neither a body preset nor a readable file")
