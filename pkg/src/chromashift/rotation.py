"""Rotation of colors about the gray axis of linear sRGB.

The transform is the axis-angle rotation about the normalized (1, 1, 1)
direction. Positive angles rotate red toward green (at 120 degrees the
channels permute cyclically r -> g -> b -> r). Rotated colors can leave
the [0, 1] gamut; display paths clip per channel afterwards.
"""

from __future__ import annotations

import numpy as np

from . import backend, colorspace

_U2 = 1.0 / 3.0  # u^2 with u = 1/sqrt(3)
_U = 1.0 / np.sqrt(3.0)


def rotation_matrix(theta: float) -> np.ndarray:
    """3x3 gray-axis rotation for an angle in radians.

    The matrix is orthogonal with determinant +1 and fixes (1, 1, 1).
    """
    c = np.cos(theta)
    s = np.sin(theta)
    diag = c + _U2 * (1.0 - c)
    plus = _U2 * (1.0 - c) + _U * s
    minus = _U2 * (1.0 - c) - _U * s
    return np.array(
        [
            [diag, minus, plus],
            [plus, diag, minus],
            [minus, plus, diag],
        ]
    )


def rotate_color(rgb, theta: float) -> np.ndarray:
    """Rotate linear sRGB color(s) about the gray axis; output is unclipped."""
    return np.asarray(rgb, dtype=np.float64) @ rotation_matrix(theta).T


def clip_to_gamut(rgb) -> np.ndarray:
    """Clamp each channel to [0, 1]; in-range channels are untouched."""
    return np.clip(np.asarray(rgb, dtype=np.float64), 0.0, 1.0)


def rotate_image(pixels: np.ndarray, theta: float) -> np.ndarray:
    """Rotate every pixel of an 8-bit image: decode, rotate, clip, encode.

    ``pixels`` is a (h, w, 3) or (h, w, 4) uint8 array; an alpha channel is
    passed through untouched. Dispatches to the compiled kernel when built.
    """
    pixels = np.ascontiguousarray(pixels)
    if pixels.dtype != np.uint8 or pixels.ndim != 3 or pixels.shape[2] not in (3, 4):
        raise ValueError("expected an (h, w, 3) or (h, w, 4) uint8 image")
    rgb = pixels[:, :, :3]
    out = backend.rotate_pixels(rgb, rotation_matrix(theta))
    if pixels.shape[2] == 4:
        out = np.dstack([out, pixels[:, :, 3]])
    return out


def shift_trajectory(rgb, samples: int) -> list[dict]:
    """Chromaticity trajectory of a color under a full revolution.

    Samples the clipped rotation at ``samples`` uniformly spaced angles over
    [0, 2*pi) and reports, per angle, the xy chromaticity and the clipped
    linear color. Black stays black and has no chromaticity, so it is
    rejected.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    rgb = np.asarray(rgb, dtype=np.float64)
    if np.all(rgb == 0.0):
        raise ValueError("black has no chromaticity trajectory")
    records = []
    for k in range(samples):
        theta = 2.0 * np.pi * k / samples
        rotated = clip_to_gamut(rotate_color(rgb, theta))
        xy = colorspace.xyz_to_xy(colorspace.linear_to_xyz(rotated))
        records.append(
            {
                "theta_deg": np.degrees(theta),
                "x": float(xy[0]),
                "y": float(xy[1]),
                "r": float(rotated[0]),
                "g": float(rotated[1]),
                "b": float(rotated[2]),
            }
        )
    return records
