"""Pure NumPy implementations of the per-pixel kernels.

These mirror the compiled Cython kernels exactly; the backend module picks
whichever is available. Both share the same exact-encode trick: instead of
evaluating the inverse transfer per pixel, a code is recovered by locating
the pixel value among precomputed code-boundary values (the linear values
that decode from half-integer codes), which reproduces
round(inverse_transfer(v) * 255) bit for bit and is much cheaper.
"""

from __future__ import annotations

import numpy as np

from . import colorspace

# Linear value of every 8-bit code, and the boundaries between adjacent
# codes (decode of half-integer codes). searchsorted against the boundaries
# is an exact nearest-code encoder for clipped values.
DECODE_LUT = colorspace.srgb_decode(np.arange(256))
ENCODE_BOUNDARIES = np.asarray(
    ((np.arange(255) + 0.5) / 255.0 + 0.055) / 1.055, dtype=np.float64
) ** 2.4
_lin = (np.arange(255) + 0.5) / 255.0 <= 0.04045
ENCODE_BOUNDARIES[_lin] = ((np.arange(255) + 0.5) / 255.0)[_lin] / 12.92
del _lin


def encode_clipped(linear: np.ndarray) -> np.ndarray:
    """Exact 8-bit encoding of linear values already clipped to [0, 1]."""
    return np.searchsorted(ENCODE_BOUNDARIES, linear, side="left").astype(np.uint8)


def rotate_pixels(rgb: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Decode, apply a 3x3 matrix, clip and re-encode an (h, w, 3) image."""
    linear = DECODE_LUT[rgb]
    rotated = linear @ np.asarray(matrix, dtype=np.float64).T
    np.clip(rotated, 0.0, 1.0, out=rotated)
    return encode_clipped(rotated)


def simulate_pixels(
    rgb: np.ndarray,
    to_lms: np.ndarray,
    from_lms: np.ndarray,
    axis: int,
    n_sep: np.ndarray,
    wing_normals: np.ndarray,
    wing_sign0: float,
    max_iter: int = 512,
    tol: float = 1e-10,
) -> np.ndarray:
    """Dichromat-simulate an (h, w, 3) image (projection iterated with clipping).

    Unclipped pixels finish after one projection; the loop keeps iterating
    only the active (still moving) subset, so heavily clipped images do not
    reprocess every pixel hundreds of times.
    """
    others = [k for k in range(3) if k != axis]

    def project_clip(colors: np.ndarray) -> np.ndarray:
        lms = colors @ to_lms.T
        side = lms @ n_sep
        n = wing_normals[np.where(side * wing_sign0 >= 0.0, 0, 1)]
        lms[..., axis] = -(
            n[..., others[0]] * lms[..., others[0]] + n[..., others[1]] * lms[..., others[1]]
        ) / n[..., axis]
        projected = lms @ from_lms.T
        np.clip(projected, 0.0, 1.0, out=projected)
        return projected

    flat = DECODE_LUT[rgb].reshape(-1, 3)
    out = project_clip(flat)
    moving = np.abs(out - flat).max(axis=-1) >= tol
    active = np.nonzero(moving)[0]
    current = out[active]
    for _ in range(max_iter - 1):
        if len(active) == 0:
            break
        nxt = project_clip(current)
        moved = np.abs(nxt - current).max(axis=-1) >= tol
        current = nxt
        out[active] = current
        active = active[moved]
        current = current[moved]
    return encode_clipped(out.reshape(rgb.shape))
