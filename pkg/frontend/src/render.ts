/**
 * Pure pixel pipeline for the rotation view: RGBA buffers in, RGBA out.
 *
 * Kept free of DOM types so the same code runs in the page, in workers
 * and under node tests. Alpha passes through untouched. The output is
 * always recomputed from the source buffer, never from a previous
 * frame, so repeated slider moves cannot accumulate quantization.
 */

import {
  clip01,
  DECODE_LUT,
  Mat3,
  rotationMatrix,
  srgbEncodeChannel,
} from "./color.js";

/** Rotate a band of RGBA pixels [start, end) rows of a width-w image. */
export function rotateRgbaBand(
  src: Uint8ClampedArray,
  dst: Uint8ClampedArray,
  width: number,
  startRow: number,
  endRow: number,
  matrix: Mat3,
): void {
  const [m00, m01, m02, m10, m11, m12, m20, m21, m22] = matrix;
  let i = startRow * width * 4;
  const stop = endRow * width * 4;
  while (i < stop) {
    const r = DECODE_LUT[src[i]];
    const g = DECODE_LUT[src[i + 1]];
    const b = DECODE_LUT[src[i + 2]];
    dst[i] = srgbEncodeChannel(clip01(m00 * r + m01 * g + m02 * b));
    dst[i + 1] = srgbEncodeChannel(clip01(m10 * r + m11 * g + m12 * b));
    dst[i + 2] = srgbEncodeChannel(clip01(m20 * r + m21 * g + m22 * b));
    dst[i + 3] = src[i + 3];
    i += 4;
  }
}

/** Rotate a whole RGBA frame by an angle in degrees; returns a new buffer. */
export function rotateRgbaFrame(
  src: Uint8ClampedArray,
  width: number,
  height: number,
  thetaDeg: number,
): Uint8ClampedArray<ArrayBuffer> {
  const dst = new Uint8ClampedArray(src.length);
  const matrix = rotationMatrix((thetaDeg * Math.PI) / 180);
  rotateRgbaBand(src, dst, width, 0, height, matrix);
  return dst;
}
