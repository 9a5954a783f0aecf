"""Dichromatic vision model: simulation, confusion lines, iso-chrome anchors.

The simulation is the two-half-plane projection in LMS space: the missing
cone's excitation is replaced so the color lands on one of two half-planes
hinged on the neutral (gray) axis, each containing a spectral anchor
(575/475 nm for the red-green deficiencies, 660/485 nm for tritanopia).
Colors on a confusion line share a projection, which is what makes them
indistinguishable to the matching dichromat.

Confusion lines live in xy chromaticity and converge at a per-type
copunctal point; the constants below agree with the cone fundamentals in
:mod:`chromashift.colorspace`, so sampled confusion colors collapse under
the simulation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import colorspace


class CvdType(enum.Enum):
    PROTAN = "protan"
    DEUTAN = "deutan"
    TRITAN = "tritan"


# Chromaticity at which each type's confusion lines converge.
COPUNCTAL_XY = {
    CvdType.PROTAN: np.array([0.7465, 0.2535]),
    CvdType.DEUTAN: np.array([1.4000, -0.4000]),
    CvdType.TRITAN: np.array([0.1748, 0.0000]),
}

# Spectral anchors of the perceived-color half-planes, in nm.
ANCHOR_WAVELENGTHS_NM = {
    CvdType.PROTAN: (575.0, 475.0),
    CvdType.DEUTAN: (575.0, 475.0),
    CvdType.TRITAN: (660.0, 485.0),
}

_MISSING_AXIS = {CvdType.PROTAN: 0, CvdType.DEUTAN: 1, CvdType.TRITAN: 2}

_NEUTRAL_LMS = np.ones(3)


def _load_cmf() -> np.ndarray:
    path = resources.files("chromashift.data") / "cie1931_cmf_5nm.csv"
    with path.open("rb") as fh:
        return np.loadtxt(fh, delimiter=",", skiprows=1)


# CIE 1931 2-degree color matching functions, 5 nm steps, columns
# (wavelength, xbar, ybar, zbar).
CMF_TABLE = _load_cmf()


def cmf_xyz(wavelength_nm: float) -> np.ndarray:
    """XYZ of the spectral color at a wavelength, linearly interpolated."""
    wl = CMF_TABLE[:, 0]
    if not (wl[0] <= wavelength_nm <= wl[-1]):
        raise ValueError(f"wavelength {wavelength_nm} nm outside table range")
    return np.array([np.interp(wavelength_nm, wl, CMF_TABLE[:, k]) for k in (1, 2, 3)])


def spectral_xy(wavelength_nm: float) -> np.ndarray:
    """Chromaticity of the spectral color at a wavelength."""
    return colorspace.xyz_to_xy(cmf_xyz(wavelength_nm))


@dataclass(frozen=True)
class IsochromeAnchors:
    """The two spectral anchors of a type's perceived-color line segments."""

    wavelengths_nm: tuple[float, float]
    first_xy: np.ndarray
    second_xy: np.ndarray


def isochrome_anchors(cvd: CvdType) -> IsochromeAnchors:
    wl_a, wl_b = ANCHOR_WAVELENGTHS_NM[cvd]
    return IsochromeAnchors((wl_a, wl_b), spectral_xy(wl_a), spectral_xy(wl_b))


@dataclass(frozen=True)
class _ProjectionGeometry:
    axis: int  # index of the replaced cone coordinate
    n_sep: np.ndarray  # normal of the wing-separating plane
    wing_normals: np.ndarray  # (2, 3), plane normals for the two half-planes
    wing_signs: np.ndarray  # (2,), side of n_sep each wing's anchor lies on


def _build_geometry(cvd: CvdType) -> _ProjectionGeometry:
    axis = _MISSING_AXIS[cvd]
    e = np.zeros(3)
    e[axis] = 1.0
    n_sep = np.cross(_NEUTRAL_LMS, e)
    normals = []
    signs = []
    for wl in ANCHOR_WAVELENGTHS_NM[cvd]:
        anchor_lms = colorspace.XYZ_TO_LMS @ cmf_xyz(wl)
        normals.append(np.cross(_NEUTRAL_LMS, anchor_lms))
        signs.append(np.sign(anchor_lms @ n_sep))
    if signs[0] == signs[1]:
        raise RuntimeError(f"anchors for {cvd} fall on the same side of the neutral plane")
    return _ProjectionGeometry(axis, n_sep, np.array(normals), np.array(signs))


_GEOMETRY = {t: _build_geometry(t) for t in CvdType}


def _project_lms(lms: np.ndarray, geo: _ProjectionGeometry) -> np.ndarray:
    """Replace the missing cone coordinate so each color lies on its wing."""
    side = lms @ geo.n_sep
    wing = np.where(side * geo.wing_signs[0] >= 0.0, 0, 1)
    n = geo.wing_normals[wing]
    out = lms.copy()
    others = [k for k in range(3) if k != geo.axis]
    out[..., geo.axis] = -(
        n[..., others[0]] * lms[..., others[0]] + n[..., others[1]] * lms[..., others[1]]
    ) / n[..., geo.axis]
    return out


def simulate_dichromat(rgb, cvd: CvdType, max_iter: int = 512, tol: float = 1e-12) -> np.ndarray:
    """Simulate the dichromat percept of linear sRGB color(s) in [0, 1].

    Projects in LMS and clips back to the gamut. Projection and clipping
    are iterated to a fixed point so that clipped outputs are stable:
    simulating an already-simulated color returns it unchanged (within
    ``tol``), which a single projection-then-clip pass does not guarantee
    for saturated colors. Colors whose projection stays in gamut converge
    in one step; clipped ones contract linearly and need a few hundred.
    """
    geo = _GEOMETRY[cvd]
    current = np.clip(np.asarray(rgb, dtype=np.float64), 0.0, 1.0)
    for _ in range(max_iter):
        projected = colorspace.lms_to_linear(_project_lms(colorspace.linear_to_lms(current), geo))
        clipped = np.clip(projected, 0.0, 1.0)
        if np.max(np.abs(clipped - current)) < tol:
            return clipped
        current = clipped
    return current


def simulated_lab(rgb, cvd: CvdType) -> np.ndarray:
    """CIELAB coordinates of the simulated percept (convenience wrapper)."""
    return colorspace.lab_from_linear(simulate_dichromat(rgb, cvd))


def copunctal_point(cvd: CvdType) -> np.ndarray:
    """xy chromaticity where the type's confusion lines converge."""
    return COPUNCTAL_XY[cvd].copy()


@dataclass(frozen=True)
class ConfusionLine:
    """A confusion line in xy: through ``base_xy`` toward the copunctal point."""

    base_xy: np.ndarray
    copunctal_xy: np.ndarray
    direction: np.ndarray  # unit vector from base toward the copunctal point

    def point_at(self, t: float) -> np.ndarray:
        return self.base_xy + t * self.direction


def confusion_line(base_rgb, cvd: CvdType) -> ConfusionLine:
    """Confusion line through a base color's chromaticity."""
    base_xy = colorspace.xyz_to_xy(colorspace.linear_to_xyz(base_rgb))
    copunctal = copunctal_point(cvd)
    delta = copunctal - base_xy
    norm = np.linalg.norm(delta)
    if norm < 1e-9:
        raise ValueError("base color sits at the copunctal point; line undefined")
    return ConfusionLine(base_xy, copunctal, delta / norm)


class GamutError(ValueError):
    """Requested colors do not fit inside the sRGB gamut.

    ``achievable`` reports how many samples would have fit when raised by
    sample_confusion_line.
    """

    def __init__(self, message: str, achievable: int | None = None):
        super().__init__(message)
        self.achievable = achievable


def _in_gamut(rgb: np.ndarray, eps: float = 1e-9) -> bool:
    return bool(np.all(rgb >= -eps) and np.all(rgb <= 1.0 + eps))


class DeltaEPath:
    """A 1-D path of colors through a base color, parametrized by delta-E.

    Subclasses define ``color(param)``; the base class turns that into a
    delta-E arclength parametrization by root-finding, plus gamut-range
    queries. Used for confusion lines and for the study's sampling lines.
    """

    def __init__(self, base_rgb):
        self.base_rgb = np.asarray(base_rgb, dtype=np.float64)
        self.base_lab = colorspace.lab_from_linear(self.base_rgb)

    def color(self, param: float) -> np.ndarray:
        raise NotImplementedError

    def in_gamut(self, param: float) -> bool:
        return _in_gamut(self.color(param))

    def delta_e_from(self, ref_lab: np.ndarray, param: float) -> float:
        lab = colorspace.lab_from_linear(np.clip(self.color(param), 0.0, 1.0))
        return float(colorspace.delta_e76(lab, ref_lab))

    def step_to_delta_e(self, ref_lab, start: float, sign: float, target: float) -> float:
        """Offset beyond ``start`` where delta-E from ref_lab reaches target.

        Expands a bracket outward, backing up to the gamut edge when the
        expansion overshoots it; raises GamutError when the target is not
        reachable inside the gamut.
        """
        gap = lambda t: self.delta_e_from(ref_lab, t) - target
        step = 1e-4
        lo = hi = start
        for _ in range(200):
            hi = hi + sign * step
            if not self.in_gamut(hi):
                inside, outside = lo, hi
                for _ in range(100):
                    mid = 0.5 * (inside + outside)
                    if self.in_gamut(mid):
                        inside = mid
                    else:
                        outside = mid
                if gap(inside) >= 0.0:
                    hi = inside
                    break
                raise GamutError("delta-E target not reachable inside the gamut")
            if gap(hi) >= 0.0:
                break
            lo = hi
            step *= 1.6
        else:
            raise GamutError("could not bracket the delta-E target")
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if gap(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def color_at_delta_e(self, signed_distance: float) -> np.ndarray:
        """In-gamut color at a signed delta-E arclength from the base."""
        if signed_distance == 0.0:
            return self.base_rgb.copy()
        sign = 1.0 if signed_distance > 0.0 else -1.0
        offset = self.step_to_delta_e(self.base_lab, 0.0, sign, abs(signed_distance))
        return np.clip(self.color(offset), 0.0, 1.0)

    def max_delta_e(self, sign: float) -> float:
        """Delta-E from base to the gamut edge in one direction."""
        step = 1e-4
        lo = 0.0
        hi = 0.0
        for _ in range(200):
            hi = hi + sign * step
            if not self.in_gamut(hi):
                break
            lo = hi
            step *= 1.6
        inside, outside = lo, hi
        for _ in range(100):
            mid = 0.5 * (inside + outside)
            if self.in_gamut(mid):
                inside = mid
            else:
                outside = mid
        return self.delta_e_from(self.base_lab, inside)


class ConfusionPath(DeltaEPath):
    """The colors a dichromat confuses with a base color, as a 1-D path.

    In LMS space the path varies only the missing cone's excitation, so
    every point on it projects to the very same percept; its chromaticity
    trace is the xy confusion line through the base. Positive parameters
    move toward the copunctal point.
    """

    def __init__(self, base_rgb, cvd: CvdType):
        super().__init__(base_rgb)
        self.cvd = cvd
        self.base_lms = colorspace.linear_to_lms(self.base_rgb)
        self.axis = _GEOMETRY[cvd].axis

    def color(self, param: float) -> np.ndarray:
        lms = self.base_lms.copy()
        lms[self.axis] += param
        return colorspace.lms_to_linear(lms)


def _sample_offsets(path: ConfusionPath, spacing: float, count: int) -> list[float]:
    per_side = count // 2
    first_offset = spacing if count % 2 == 1 else spacing / 2.0
    sides: dict[float, list[float]] = {}
    for sign in (1.0, -1.0):
        offsets: list[float] = []
        ref_offset = 0.0
        ref_lab = path.base_lab
        for k in range(per_side):
            target = first_offset if k == 0 else spacing
            ref_offset = path.step_to_delta_e(ref_lab, ref_offset, sign, target)
            offsets.append(ref_offset)
            ref_lab = colorspace.lab_from_linear(np.clip(path.color(ref_offset), 0.0, 1.0))
        sides[sign] = offsets
    ordered = list(reversed(sides[-1.0]))
    if count % 2 == 1:
        ordered.append(0.0)
    ordered.extend(sides[1.0])
    return ordered


def sample_confusion_line(base_rgb, cvd: CvdType, spacing: float, count: int) -> np.ndarray:
    """Sample in-gamut colors on the confusion line through a base color.

    The samples are genuinely confusable: they vary only the missing
    cone's excitation, so they all simulate to the base color's percept.
    Consecutive samples are ``spacing`` delta-E apart (trichromatic
    delta-E, found by root-finding), centered on the base: for odd counts
    the base is the middle sample, for even counts the two middle samples
    straddle it at spacing/2. Raises GamutError (carrying the achievable
    count) when the gamut cannot hold all samples.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    if spacing <= 0.0:
        raise ValueError("spacing must be positive")
    path = ConfusionPath(base_rgb, cvd)
    try:
        ordered = _sample_offsets(path, spacing, count)
    except GamutError:
        achievable = 0
        for smaller in range(count - 1, 1, -1):
            try:
                _sample_offsets(path, spacing, smaller)
            except GamutError:
                continue
            achievable = smaller
            break
        raise GamutError(
            f"gamut fits only {achievable} of {count} samples at spacing "
            f"{spacing} delta-E on the {cvd.value} line",
            achievable=achievable,
        ) from None
    return np.clip(np.array([path.color(t) for t in ordered]), 0.0, 1.0)
