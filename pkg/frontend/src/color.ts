/**
 * Client-side color math, mirroring the service's core bit for bit.
 *
 * The viewer rotates pixels locally so the camera view stays at frame
 * rate and no image data leaves the machine; naming and simulation go
 * through the service. For the two sides to agree, the transfer
 * functions, the rotation matrix and the encode rounding below follow
 * the service's published definitions exactly: decode is the IEC
 * 61966-2-1 piecewise EOTF, encode recovers the nearest 8-bit code via
 * the precomputed code-boundary table, and the rotation is the axis
 * rotation about (1,1,1)/sqrt(3).
 */

export type Rgb = [number, number, number];
export type Mat3 = [number, number, number, number, number, number, number, number, number];

export function srgbDecodeChannel(code: number): number {
  const v = code / 255;
  return v <= 0.04045 ? v / 12.92 : Math.pow((v + 0.055) / 1.055, 2.4);
}

/** Linear value of every 8-bit code. */
export const DECODE_LUT: Float64Array = (() => {
  const lut = new Float64Array(256);
  for (let c = 0; c < 256; c++) lut[c] = srgbDecodeChannel(c);
  return lut;
})();

/** Boundaries between adjacent codes: decode of half-integer codes. */
export const ENCODE_BOUNDARIES: Float64Array = (() => {
  const bounds = new Float64Array(255);
  for (let c = 0; c < 255; c++) {
    const v = (c + 0.5) / 255;
    bounds[c] = v <= 0.04045 ? v / 12.92 : Math.pow((v + 0.055) / 1.055, 2.4);
  }
  return bounds;
})();

/** Nearest 8-bit code for a linear value already clipped to [0, 1]. */
export function srgbEncodeChannel(linear: number): number {
  let lo = 0;
  let hi = 255;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (linear >= ENCODE_BOUNDARIES[mid]) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

const U2 = 1 / 3;
const U = 1 / Math.sqrt(3);

/** Gray-axis rotation matrix (row major) for an angle in radians. */
export function rotationMatrix(thetaRad: number): Mat3 {
  const c = Math.cos(thetaRad);
  const s = Math.sin(thetaRad);
  const diag = c + U2 * (1 - c);
  const plus = U2 * (1 - c) + U * s;
  const minus = U2 * (1 - c) - U * s;
  return [diag, minus, plus, plus, diag, minus, minus, plus, diag];
}

export function rotateLinear(rgb: Rgb, m: Mat3): Rgb {
  return [
    m[0] * rgb[0] + m[1] * rgb[1] + m[2] * rgb[2],
    m[3] * rgb[0] + m[4] * rgb[1] + m[5] * rgb[2],
    m[6] * rgb[0] + m[7] * rgb[1] + m[8] * rgb[2],
  ];
}

export function clip01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

/** Rotate one 8-bit sRGB color through decode/rotate/clip/encode. */
export function rotateSrgb(rgb: Rgb, thetaDeg: number): Rgb {
  const m = rotationMatrix((thetaDeg * Math.PI) / 180);
  const lin: Rgb = [DECODE_LUT[rgb[0]], DECODE_LUT[rgb[1]], DECODE_LUT[rgb[2]]];
  const rot = rotateLinear(lin, m);
  return [
    srgbEncodeChannel(clip01(rot[0])),
    srgbEncodeChannel(clip01(rot[1])),
    srgbEncodeChannel(clip01(rot[2])),
  ];
}

// CIELAB with the D65 white of the sRGB matrix (row sums), for the
// practice quiz's perturbations and distance checks.
const RGB_TO_XYZ = [
  0.4124, 0.3576, 0.1805,
  0.2126, 0.7152, 0.0722,
  0.0193, 0.1192, 0.9505,
];
const WHITE = [0.9505, 1.0, 1.089];
const LAB_DELTA3 = Math.pow(6 / 29, 3);
const LAB_SLOPE = Math.pow(29 / 6, 2) / 3;

function labF(t: number): number {
  return t > LAB_DELTA3 ? Math.cbrt(t) : LAB_SLOPE * t + 4 / 29;
}

function labFInv(f: number): number {
  return f > 6 / 29 ? f * f * f : (f - 4 / 29) / LAB_SLOPE;
}

export type Lab = [number, number, number];

export function labFromLinear(rgb: Rgb): Lab {
  const x = RGB_TO_XYZ[0] * rgb[0] + RGB_TO_XYZ[1] * rgb[1] + RGB_TO_XYZ[2] * rgb[2];
  const y = RGB_TO_XYZ[3] * rgb[0] + RGB_TO_XYZ[4] * rgb[1] + RGB_TO_XYZ[5] * rgb[2];
  const z = RGB_TO_XYZ[6] * rgb[0] + RGB_TO_XYZ[7] * rgb[1] + RGB_TO_XYZ[8] * rgb[2];
  const fx = labF(x / WHITE[0]);
  const fy = labF(y / WHITE[1]);
  const fz = labF(z / WHITE[2]);
  return [116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)];
}

export function linearFromLab(lab: Lab): Rgb {
  const fy = (lab[0] + 16) / 116;
  const fx = fy + lab[1] / 500;
  const fz = fy - lab[2] / 200;
  const x = labFInv(fx) * WHITE[0];
  const y = labFInv(fy) * WHITE[1];
  const z = labFInv(fz) * WHITE[2];
  return [
    3.240625477320054 * x - 1.537207972210319 * y - 0.4986285986982478 * z,
    -0.9689307147293196 * x + 1.8757560608852415 * y + 0.04151752384295395 * z,
    0.05571012044551064 * x - 0.20402105059848671 * y + 1.0569959422543882 * z,
  ];
}

export function labFromSrgb(rgb: Rgb): Lab {
  return labFromLinear([DECODE_LUT[rgb[0]], DECODE_LUT[rgb[1]], DECODE_LUT[rgb[2]]]);
}

export function deltaE76(a: Lab, b: Lab): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}
