"""Quantitative analyses: discriminability under rotation, threshold ellipses.

The discriminability curves answer the question behind the whole approach:
two colors that a dichromat confuses at rest become distinguishable at some
rotation angle. Each curve tracks the simulated-percept difference (in JND)
of one adjacent color pair from a confusion line as the rotation angle
sweeps a full turn.

Threshold ellipses summarize directional discrimination thresholds around a
base color in xy chromaticity, in the tradition of MacAdam's ellipses; the
fit is the direct least-squares conic method with the ellipse constraint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import colorspace, cvd, rotation


@dataclass(frozen=True)
class DiscriminabilityCurve:
    """Simulated-percept difference of one color pair across rotation angles."""

    pair_index: int
    color_a: np.ndarray  # linear sRGB
    color_b: np.ndarray
    thetas_deg: np.ndarray
    jnd: np.ndarray


def _rotation_stack(thetas_rad: np.ndarray) -> np.ndarray:
    return np.stack([rotation.rotation_matrix(t) for t in thetas_rad])


def discriminability_curves(
    base_rgb,
    cvd_type: cvd.CvdType,
    spacing: float = 5.0,
    count: int = 13,
    angle_step_deg: float = 1.0,
) -> list[DiscriminabilityCurve]:
    """Curves for all adjacent pairs sampled on a confusion line.

    Samples ``count`` colors ``spacing`` delta-E apart on the base color's
    confusion line, forms the ``count - 1`` adjacent pairs, and for every
    angle on the grid computes the JND between the two colors after
    rotate, clip and dichromat simulation.
    """
    colors = cvd.sample_confusion_line(base_rgb, cvd_type, spacing, count)
    thetas_deg = np.arange(0.0, 360.0, angle_step_deg)
    matrices = _rotation_stack(np.radians(thetas_deg))

    # (angles, colors, 3): rotate everything in one shot, then simulate.
    rotated = np.einsum("aij,cj->aci", matrices, colors)
    clipped = np.clip(rotated, 0.0, 1.0)
    lab = colorspace.lab_from_linear(cvd.simulate_dichromat(clipped, cvd_type))
    jnd = colorspace.delta_e_to_jnd(colorspace.delta_e76(lab[:, 1:, :], lab[:, :-1, :]))

    return [
        DiscriminabilityCurve(k, colors[k], colors[k + 1], thetas_deg, jnd[:, k])
        for k in range(count - 1)
    ]


def max_discriminability(curve: DiscriminabilityCurve) -> tuple[float, float]:
    """(theta_deg, jnd) of the curve's maximum; ties go to the smallest angle."""
    if len(curve.jnd) == 0:
        raise ValueError("empty curve")
    k = int(np.argmax(curve.jnd))
    return float(curve.thetas_deg[k]), float(curve.jnd[k])


@dataclass(frozen=True)
class ThresholdEllipse:
    """Ellipse in xy chromaticity: center, semi-axes a >= b, orientation [0, pi)."""

    center: np.ndarray
    a: float
    b: float
    orientation: float


class EllipseFitError(ValueError):
    """Points do not determine an ellipse."""


def fit_ellipse(points) -> ThresholdEllipse:
    """Direct least-squares ellipse fit (Fitzgibbon-style conic constraint).

    Uses the numerically stable split-matrix formulation with the data
    centered and scaled first, so tiny chromaticity ellipses recover their
    parameters to machine precision. Raises EllipseFitError for fewer than
    5 points, degenerate configurations, or a non-elliptical best fit.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise EllipseFitError("expected an (n, 2) array of xy points")
    if pts.shape[0] < 5:
        raise EllipseFitError("need at least 5 points to fit an ellipse")

    mean = pts.mean(axis=0)
    centered = pts - mean
    scale = np.sqrt((centered**2).sum(axis=1).mean())
    if scale < 1e-300:
        raise EllipseFitError("points are coincident")
    xn = centered[:, 0] / scale
    yn = centered[:, 1] / scale

    # Halir & Flusser split of the design matrix: quadratic and linear parts.
    d1 = np.stack([xn**2, xn * yn, yn**2], axis=1)
    d2 = np.stack([xn, yn, np.ones_like(xn)], axis=1)
    s1 = d1.T @ d1
    s2 = d1.T @ d2
    s3 = d2.T @ d2
    try:
        t = -np.linalg.solve(s3, s2.T)
    except np.linalg.LinAlgError as err:
        raise EllipseFitError("degenerate point configuration") from err
    m = s1 + s2 @ t
    # Premultiplied inverse of the constraint matrix for 4AC - B^2 = 1.
    reduced = np.array([m[2] / 2.0, -m[1], m[0] / 2.0])
    eigval, eigvec = np.linalg.eig(reduced)
    real = np.abs(eigval.imag) < 1e-9 * (1.0 + np.abs(eigval.real))
    vecs = eigvec.real
    cond = 4.0 * vecs[0] * vecs[2] - vecs[1] ** 2
    candidates = np.where(real & (cond > 0))[0]
    if len(candidates) == 0:
        raise EllipseFitError("best-fitting conic is not an ellipse")
    k = candidates[np.argmin(np.abs(eigval.real[candidates]))]
    a1 = vecs[:, k]
    coeffs = np.concatenate([a1, t @ a1])  # A, B, C, D, E, F in normalized frame

    ellipse = _conic_to_ellipse(coeffs)
    center = ellipse.center * scale + mean
    return ThresholdEllipse(center, ellipse.a * scale, ellipse.b * scale, ellipse.orientation)


def _conic_to_ellipse(coeffs: np.ndarray) -> ThresholdEllipse:
    """Convert conic coefficients (A, B, C, D, E, F) to geometric form."""
    a, b, c, d, e, f = coeffs
    disc = b * b - 4.0 * a * c
    if disc >= 0.0:
        raise EllipseFitError("conic is not an ellipse")
    cx = (2.0 * c * d - b * e) / disc
    cy = (2.0 * a * e - b * d) / disc
    # Constant term after translating to the center.
    f0 = f + (d * cx + e * cy) / 2.0
    quad = np.array([[a, b / 2.0], [b / 2.0, c]])
    eigval, eigvec = np.linalg.eigh(quad / -f0)
    if np.any(eigval <= 0.0):
        raise EllipseFitError("conic is not a real ellipse")
    semi = 1.0 / np.sqrt(eigval)  # eigh sorts ascending, so semi is descending
    major_axis = eigvec[:, 0]
    orientation = np.arctan2(major_axis[1], major_axis[0]) % np.pi
    return ThresholdEllipse(np.array([cx, cy]), float(semi[0]), float(semi[1]), float(orientation))


def ellipse_area(ellipse: ThresholdEllipse) -> float:
    """Area enclosed by the ellipse: pi * a * b."""
    return float(np.pi * ellipse.a * ellipse.b)
