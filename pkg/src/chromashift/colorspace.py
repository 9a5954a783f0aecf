"""Colorimetric conversions among the spaces the toolkit works in.

Colors are numpy arrays whose last axis holds the three channels; every
function broadcasts over leading axes, so a single color (shape ``(3,)``)
and a whole image (shape ``(h, w, 3)``) go through the same code path.

Spaces and conventions:

- display sRGB: integer codes 0..255 per channel (IEC 61966-2-1 encoding)
- linear sRGB: scene-linear channels, nominal gamut [0, 1]
- XYZ: CIE 1931 tristimulus, Y normalized so the display white has Y = 1
- xy: chromaticity (perspective projection of XYZ)
- LMS: cone excitations from the Smith-Pokorny fundamentals, rescaled so
  D65 white maps to (1, 1, 1)
- CIELAB: D65 reference white, paired with the 1976 delta-E metric

One just-noticeable difference (JND) is taken as 2.3 delta-E.
"""

from __future__ import annotations

import numpy as np

# IEC 61966-2-1 linear sRGB -> XYZ (D65). Row sums give the D65 white point.
LINEAR_RGB_TO_XYZ = np.array(
    [
        [0.4124, 0.3576, 0.1805],
        [0.2126, 0.7152, 0.0722],
        [0.0193, 0.1192, 0.9505],
    ]
)
XYZ_TO_LINEAR_RGB = np.linalg.inv(LINEAR_RGB_TO_XYZ)

D65_XYZ = LINEAR_RGB_TO_XYZ.sum(axis=1)
D65_XY = D65_XYZ[:2] / D65_XYZ.sum()

# Smith-Pokorny cone fundamentals. The unnormalized rows are the published
# matrix; the toolkit rescales each row so D65 maps to LMS (1, 1, 1), which
# keeps the gray axis on the dichromat neutral axis. The implied copunctal
# points (images of the L/M/S axes in xy) are the standard literature values
# (0.7465, 0.2535) / (1.4, -0.4) / (0.1748, 0.0); the Hunt-Pointer-Estevez
# matrix does not reproduce them, so it is not used here.
_SMITH_POKORNY = np.array(
    [
        [0.15514, 0.54312, -0.03286],
        [-0.15514, 0.45684, 0.03286],
        [0.0, 0.0, 0.00801],
    ]
)
XYZ_TO_LMS = _SMITH_POKORNY / (_SMITH_POKORNY @ D65_XYZ)[:, None]
LMS_TO_XYZ = np.linalg.inv(XYZ_TO_LMS)

LINEAR_RGB_TO_LMS = XYZ_TO_LMS @ LINEAR_RGB_TO_XYZ
LMS_TO_LINEAR_RGB = np.linalg.inv(LINEAR_RGB_TO_LMS)

# CIELAB segment constants: delta = 6/29.
_LAB_DELTA3 = (6.0 / 29.0) ** 3
_LAB_SLOPE = (29.0 / 6.0) ** 2 / 3.0

JND_DELTA_E = 2.3


def srgb_decode(rgb8) -> np.ndarray:
    """Decode 8-bit display sRGB codes to linear sRGB in [0, 1].

    Applies the piecewise IEC 61966-2-1 electro-optical transfer function
    (linear segment below the dark threshold, 2.4-power branch above).
    """
    v = np.asarray(rgb8, dtype=np.float64) / 255.0
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


def srgb_encode(rgb) -> np.ndarray:
    """Encode linear sRGB in [0, 1] to 8-bit display codes.

    Inverse transfer followed by rounding to the nearest integer code.
    Raises ValueError for channels outside [0, 1]; callers clip first.
    """
    v = np.asarray(rgb, dtype=np.float64)
    if np.any(v < 0.0) or np.any(v > 1.0):
        raise ValueError("linear sRGB channels must be in [0, 1] before encoding")
    nonlinear = np.where(v <= 0.0031308, v * 12.92, 1.055 * v ** (1.0 / 2.4) - 0.055)
    return np.round(nonlinear * 255.0).astype(np.uint8)


def linear_to_xyz(rgb) -> np.ndarray:
    """Linear sRGB to CIE XYZ. Linear (1,1,1) maps to D65 with Y = 1."""
    return np.asarray(rgb, dtype=np.float64) @ LINEAR_RGB_TO_XYZ.T


def xyz_to_linear(xyz) -> np.ndarray:
    """CIE XYZ to linear sRGB (exact inverse of linear_to_xyz)."""
    return np.asarray(xyz, dtype=np.float64) @ XYZ_TO_LINEAR_RGB.T


def xyz_to_xy(xyz) -> np.ndarray:
    """Project XYZ to xy chromaticity: (X, Y) / (X + Y + Z).

    Raises ValueError when X + Y + Z is zero (black has no chromaticity).
    """
    xyz = np.asarray(xyz, dtype=np.float64)
    s = xyz.sum(axis=-1)
    if np.any(s == 0.0):
        raise ValueError("chromaticity undefined for zero-sum tristimulus")
    return xyz[..., :2] / s[..., None]


def xyy_to_xyz(x, y, big_y) -> np.ndarray:
    """Rebuild XYZ from chromaticity (x, y) and luminance Y. Requires y != 0."""
    x, y, big_y = np.broadcast_arrays(
        np.asarray(x, dtype=np.float64),
        np.asarray(y, dtype=np.float64),
        np.asarray(big_y, dtype=np.float64),
    )
    scale = big_y / y
    return np.stack([x * scale, big_y, (1.0 - x - y) * scale], axis=-1)


def linear_to_lms(rgb) -> np.ndarray:
    """Linear sRGB to normalized LMS. Linear (1,1,1) maps to LMS (1,1,1)."""
    return np.asarray(rgb, dtype=np.float64) @ LINEAR_RGB_TO_LMS.T


def lms_to_linear(lms) -> np.ndarray:
    """Normalized LMS back to linear sRGB."""
    return np.asarray(lms, dtype=np.float64) @ LMS_TO_LINEAR_RGB.T


def _lab_f(t: np.ndarray) -> np.ndarray:
    return np.where(t > _LAB_DELTA3, np.cbrt(t), _LAB_SLOPE * t + 4.0 / 29.0)


def _lab_f_inv(f: np.ndarray) -> np.ndarray:
    return np.where(f > 6.0 / 29.0, f**3, (f - 4.0 / 29.0) / _LAB_SLOPE)


def lab_from_linear(rgb) -> np.ndarray:
    """Linear sRGB to CIELAB with the D65 reference white."""
    ratios = linear_to_xyz(rgb) / D65_XYZ
    f = _lab_f(ratios)
    lightness = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return np.stack([lightness, a, b], axis=-1)


def linear_from_lab(lab) -> np.ndarray:
    """CIELAB back to linear sRGB (may land outside [0, 1] for non-colors)."""
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    ratios = _lab_f_inv(np.stack([fx, fy, fz], axis=-1))
    return xyz_to_linear(ratios * D65_XYZ)


def delta_e76(lab_a, lab_b) -> np.ndarray:
    """CIELAB delta-E 1976: Euclidean distance between Lab coordinates."""
    d = np.asarray(lab_a, dtype=np.float64) - np.asarray(lab_b, dtype=np.float64)
    return np.sqrt((d * d).sum(axis=-1))


def delta_e_to_jnd(delta_e) -> np.ndarray:
    """Convert delta-E 1976 to just-noticeable-difference units (1 JND = 2.3)."""
    d = np.asarray(delta_e, dtype=np.float64)
    if np.any(d < 0.0):
        raise ValueError("delta-E must be non-negative")
    return d / JND_DELTA_E
