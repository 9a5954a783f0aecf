# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled per-pixel kernels: gray-axis rotation and dichromat simulation.

Same contracts as the NumPy fallback in ``_kernels_np``; pixels are
processed in parallel rows with OpenMP. Encoding goes through the
code-boundary table, so results match the scalar transfer functions
exactly.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange

from . import _kernels_np

cdef double[::1] DECODE = np.ascontiguousarray(_kernels_np.DECODE_LUT)
cdef double[::1] BOUNDS = np.ascontiguousarray(_kernels_np.ENCODE_BOUNDARIES)

# Coarse index into BOUNDS: for a linear value v, codes below
# COARSE[int(v * 4096)] are ruled out, so encoding is a 1-2 step forward
# scan. uint8 keeps the table L1-resident.
def _build_coarse():
    grid = np.arange(4098) / 4096.0
    return np.searchsorted(np.asarray(BOUNDS), grid, side="left").astype(np.uint8)

cdef unsigned char[::1] COARSE = np.ascontiguousarray(_build_coarse())


cdef inline unsigned char _encode(double v) noexcept nogil:
    cdef int k = COARSE[<int>(v * 4096.0)]
    while k < 255 and v >= BOUNDS[k]:
        k += 1
    return <unsigned char>k


def rotate_pixels(cnp.ndarray[cnp.uint8_t, ndim=3] rgb not None,
                  cnp.ndarray[cnp.float64_t, ndim=2] matrix not None):
    """Decode, apply a 3x3 matrix, clip and re-encode an (h, w, 3) image."""
    cdef Py_ssize_t h = rgb.shape[0], w = rgb.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=3] out = np.empty((h, w, 3), dtype=np.uint8)
    cdef const unsigned char[:, :, ::1] src = np.ascontiguousarray(rgb)
    cdef unsigned char[:, :, ::1] dst = out
    # Fold decode and the matrix into nine per-code product tables, so a
    # pixel costs three table rows, six adds, clipping and the encode scan.
    cdef cnp.ndarray[cnp.float64_t, ndim=2] prod = (
        np.asarray(matrix)[:, :, None] * np.asarray(DECODE)[None, None, :]
    ).reshape(9, 256)
    cdef double[:, ::1] P = np.ascontiguousarray(prod)
    cdef Py_ssize_t i, j
    cdef int r, g, b
    cdef double x, y, z
    with nogil:
        for i in prange(h, schedule='static'):
            for j in range(w):
                r = src[i, j, 0]
                g = src[i, j, 1]
                b = src[i, j, 2]
                x = P[0, r] + P[1, g] + P[2, b]
                y = P[3, r] + P[4, g] + P[5, b]
                z = P[6, r] + P[7, g] + P[8, b]
                if x < 0.0: x = 0.0
                elif x > 1.0: x = 1.0
                if y < 0.0: y = 0.0
                elif y > 1.0: y = 1.0
                if z < 0.0: z = 0.0
                elif z > 1.0: z = 1.0
                dst[i, j, 0] = _encode(x)
                dst[i, j, 1] = _encode(y)
                dst[i, j, 2] = _encode(z)
    return out


def simulate_pixels(cnp.ndarray[cnp.uint8_t, ndim=3] rgb not None,
                    cnp.ndarray[cnp.float64_t, ndim=2] to_lms not None,
                    cnp.ndarray[cnp.float64_t, ndim=2] from_lms not None,
                    int axis,
                    cnp.ndarray[cnp.float64_t, ndim=1] n_sep not None,
                    cnp.ndarray[cnp.float64_t, ndim=2] wing_normals not None,
                    double wing_sign0,
                    int max_iter=512,
                    double tol=1e-10):
    """Dichromat-simulate an (h, w, 3) image (projection iterated with clipping)."""
    cdef Py_ssize_t h = rgb.shape[0], w = rgb.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=3] out = np.empty((h, w, 3), dtype=np.uint8)
    cdef const unsigned char[:, :, ::1] src = np.ascontiguousarray(rgb)
    cdef unsigned char[:, :, ::1] dst = out
    cdef double[:, ::1] A = np.ascontiguousarray(to_lms)
    cdef double[:, ::1] B = np.ascontiguousarray(from_lms)
    cdef double[:, ::1] N = np.ascontiguousarray(wing_normals)
    cdef double[::1] S = np.ascontiguousarray(n_sep)
    cdef int o0 = 0, o1 = 0
    if axis == 0:
        o0 = 1; o1 = 2
    elif axis == 1:
        o0 = 0; o1 = 2
    else:
        o0 = 0; o1 = 1
    cdef Py_ssize_t i, j
    cdef int it, wing
    cdef double c0, c1, c2, l0, l1, l2, p0, p1, p2, side, proj, change
    with nogil:
        for i in prange(h, schedule='static'):
            for j in range(w):
                c0 = DECODE[src[i, j, 0]]
                c1 = DECODE[src[i, j, 1]]
                c2 = DECODE[src[i, j, 2]]
                for it in range(max_iter):
                    l0 = A[0, 0] * c0 + A[0, 1] * c1 + A[0, 2] * c2
                    l1 = A[1, 0] * c0 + A[1, 1] * c1 + A[1, 2] * c2
                    l2 = A[2, 0] * c0 + A[2, 1] * c1 + A[2, 2] * c2
                    side = S[0] * l0 + S[1] * l1 + S[2] * l2
                    wing = 0 if side * wing_sign0 >= 0.0 else 1
                    if axis == 0:
                        l0 = -(N[wing, o0] * l1 + N[wing, o1] * l2) / N[wing, 0]
                    elif axis == 1:
                        l1 = -(N[wing, o0] * l0 + N[wing, o1] * l2) / N[wing, 1]
                    else:
                        l2 = -(N[wing, o0] * l0 + N[wing, o1] * l1) / N[wing, 2]
                    p0 = B[0, 0] * l0 + B[0, 1] * l1 + B[0, 2] * l2
                    p1 = B[1, 0] * l0 + B[1, 1] * l1 + B[1, 2] * l2
                    p2 = B[2, 0] * l0 + B[2, 1] * l1 + B[2, 2] * l2
                    if p0 < 0.0: p0 = 0.0
                    elif p0 > 1.0: p0 = 1.0
                    if p1 < 0.0: p1 = 0.0
                    elif p1 > 1.0: p1 = 1.0
                    if p2 < 0.0: p2 = 0.0
                    elif p2 > 1.0: p2 = 1.0
                    change = p0 - c0 if p0 > c0 else c0 - p0
                    if p1 - c1 > change: change = p1 - c1
                    elif c1 - p1 > change: change = c1 - p1
                    if p2 - c2 > change: change = p2 - c2
                    elif c2 - p2 > change: change = c2 - p2
                    c0 = p0; c1 = p1; c2 = p2
                    if change < tol:
                        break
                dst[i, j, 0] = _encode(c0)
                dst[i, j, 1] = _encode(c1)
                dst[i, j, 2] = _encode(c2)
    return out
