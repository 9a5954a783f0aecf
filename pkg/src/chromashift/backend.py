"""Selects the compiled pixel kernels when built, NumPy otherwise.

``BACKEND`` names the active implementation ("compiled" or "numpy");
whole-image operations route through this module so the two stay
interchangeable. ``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import numpy as np

from . import _kernels_np, cvd

try:
    from . import _kernels  # compiled extension, built by setup.py

    BACKEND = "compiled"
except ImportError:
    _kernels = None
    BACKEND = "numpy"


def rotate_pixels(rgb: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Per-pixel decode / 3x3 multiply / clip / encode on an (h, w, 3) image."""
    if _kernels is not None:
        return _kernels.rotate_pixels(rgb, np.ascontiguousarray(matrix, dtype=np.float64))
    return _kernels_np.rotate_pixels(rgb, matrix)


def simulate_pixels_once(rgb: np.ndarray, cvd_type: cvd.CvdType) -> np.ndarray:
    """One decode / project / clip / encode pass over an (h, w, 3) image."""
    geo = cvd._GEOMETRY[cvd_type]
    args = (
        np.ascontiguousarray(rgb),
        np.ascontiguousarray(cvd.colorspace.LINEAR_RGB_TO_LMS),
        np.ascontiguousarray(cvd.colorspace.LMS_TO_LINEAR_RGB),
        geo.axis,
        np.ascontiguousarray(geo.n_sep, dtype=np.float64),
        np.ascontiguousarray(geo.wing_normals, dtype=np.float64),
        float(geo.wing_signs[0]),
    )
    if _kernels is not None:
        return _kernels.simulate_pixels(*args)
    return _kernels_np.simulate_pixels(*args)


# The projection replaces a cone coordinate along an oblique direction, so
# re-simulating an 8-bit result can amplify the half-code quantization into
# a wobble of several codes. The quantized dynamics have no cycles, only
# transients (at most 19 passes over the full 8-bit cube), so iterating to
# the code-level fixed point makes simulation stable: feeding the output
# back in reproduces it byte for byte.
_STABLE_MAX_PASSES = 40


def simulate_pixels(rgb: np.ndarray, cvd_type: cvd.CvdType) -> np.ndarray:
    """Per-pixel dichromat simulation, stable under re-simulation."""
    current = simulate_pixels_once(rgb, cvd_type)
    for _ in range(_STABLE_MAX_PASSES - 1):
        nxt = simulate_pixels_once(current, cvd_type)
        if np.array_equal(nxt, current):
            return nxt
        current = nxt
    return current
