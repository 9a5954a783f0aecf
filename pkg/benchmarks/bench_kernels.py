"""Compare the compiled and NumPy pixel kernels on a 1080p frame.

Usage: python benchmarks/bench_kernels.py [--size WxH] [--repeats N]

The interactive target is one frame in under 16.7 ms (60 FPS). The
compiled kernel parallelizes across rows with OpenMP, so throughput
scales with cores; the NumPy fallback is single-threaded.
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from chromashift import _kernels_np, backend, cvd, rotation

TARGET_MS = 16.7


def _time(fn, repeats: int) -> float:
    fn()  # warm up caches and lazy setup
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1000.0)
    return float(np.median(samples))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", default="1920x1080", help="frame size as WxH")
    parser.add_argument("--repeats", type=int, default=9)
    args = parser.parse_args()
    w, h = (int(v) for v in args.size.split("x"))

    rng = np.random.default_rng(0)
    frame = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    matrix = rotation.rotation_matrix(np.radians(77.0))
    geo = cvd._GEOMETRY[cvd.CvdType.DEUTAN]
    sim_args = (
        cvd.colorspace.LINEAR_RGB_TO_LMS,
        cvd.colorspace.LMS_TO_LINEAR_RGB,
        geo.axis,
        np.ascontiguousarray(geo.n_sep),
        np.ascontiguousarray(geo.wing_normals),
        float(geo.wing_signs[0]),
    )

    print(f"frame {w}x{h}, active backend: {backend.BACKEND}, "
          f"cpus: {os.cpu_count()}, target: {TARGET_MS} ms/frame")

    rows = []
    if backend.BACKEND == "compiled":
        rows.append(("rotate/compiled",
                     _time(lambda: backend._kernels.rotate_pixels(frame, matrix), args.repeats)))
        rows.append(("simulate/compiled",
                     _time(lambda: backend._kernels.simulate_pixels(frame, *sim_args), args.repeats)))
    rows.append(("rotate/numpy",
                 _time(lambda: _kernels_np.rotate_pixels(frame, matrix), args.repeats)))
    rows.append(("simulate/numpy",
                 _time(lambda: _kernels_np.simulate_pixels(frame, *sim_args), max(1, args.repeats // 3))))

    for label, ms in rows:
        fps = 1000.0 / ms if ms > 0 else float("inf")
        marker = "meets 60 FPS" if ms <= TARGET_MS else f"{ms / TARGET_MS:.1f}x over target"
        print(f"{label:20s} {ms:9.2f} ms/frame  ({fps:6.1f} FPS, {marker})")


if __name__ == "__main__":
    main()
