/**
 * Practice mode model: training pairs, the 20-question naming quiz and
 * its scoring.
 *
 * Training shows four pairs of mutually confusable colors side by side
 * on the neutral gray background; rotating all eight patches at once
 * teaches the shift patterns. The quiz then asks for names: every
 * training color appears twice, and one color per pair appears a third
 * time perturbed by 4 delta-E in a random Lab direction, so rote
 * memorization of exact pixels cannot pass.
 */

import { clip01, deltaE76, Lab, labFromSrgb, linearFromLab, Rgb, srgbEncodeChannel } from "./color.js";

export interface TrainingPair {
  label: string;
  first: Rgb;
  second: Rgb;
}

/** Default pairs: dark red / dark green, light pink / turquoise, dark violet / blue, light green / yellow. */
export const TRAINING_PAIRS: TrainingPair[] = [
  { label: "dark red vs dark green", first: [140, 0, 0], second: [0, 70, 0] },
  { label: "light pink vs turquoise", first: [255, 217, 224], second: [64, 224, 208] },
  { label: "dark violet vs blue", first: [79, 0, 140], second: [0, 0, 255] },
  { label: "light green vs yellow", first: [102, 179, 102], second: [255, 255, 0] },
];

/** Neutral study background, linear (0.5, 0.5, 0.5) encoded for display. */
export const BACKGROUND_SRGB: Rgb = [
  srgbEncodeChannel(0.5),
  srgbEncodeChannel(0.5),
  srgbEncodeChannel(0.5),
];

export const QUIZ_LENGTH = 20;
export const PERTURB_DELTA_E = 4;

export interface QuizQuestion {
  /** Displayed color (8-bit sRGB). */
  rgb: Rgb;
  /** Index into the flattened training colors (pair * 2 + side). */
  answer: number;
  perturbed: boolean;
}

/** Deterministic 32-bit generator so a seed reproduces a whole quiz. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function gaussian(rand: () => number): number {
  let u = 0;
  while (u === 0) u = rand();
  return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * rand());
}

/** A color a fixed delta-E away in a uniformly random Lab direction, in gamut. */
export function perturbSrgb(rgb: Rgb, distance: number, rand: () => number): Rgb {
  const lab = labFromSrgb(rgb);
  for (let attempt = 0; attempt < 256; attempt++) {
    const d: Lab = [gaussian(rand), gaussian(rand), gaussian(rand)];
    const norm = Math.hypot(d[0], d[1], d[2]);
    if (norm < 1e-12) continue;
    const target: Lab = [
      lab[0] + (distance * d[0]) / norm,
      lab[1] + (distance * d[1]) / norm,
      lab[2] + (distance * d[2]) / norm,
    ];
    const linear = linearFromLab(target);
    if (linear.every((v) => v >= 0 && v <= 1)) {
      const encoded: Rgb = [
        srgbEncodeChannel(clip01(linear[0])),
        srgbEncodeChannel(clip01(linear[1])),
        srgbEncodeChannel(clip01(linear[2])),
      ];
      // Quantization moves the point slightly; keep only draws that
      // still sit within the documented 4 +- 0.1 delta-E band.
      if (Math.abs(deltaE76(labFromSrgb(encoded), lab) - distance) <= 0.1) return encoded;
    }
  }
  throw new RangeError(`no in-gamut color ${distance} delta-E from ${rgb}`);
}

/**
 * Build the randomized 20-question quiz: each training color twice plus
 * one perturbed question per pair.
 */
export function buildQuiz(seed: number, pairs: TrainingPair[] = TRAINING_PAIRS): QuizQuestion[] {
  if (pairs.length !== 4) throw new RangeError("practice mode expects 4 pairs");
  const rand = mulberry32(seed);
  const colors: Rgb[] = pairs.flatMap((p) => [p.first, p.second]);
  const questions: QuizQuestion[] = [];
  colors.forEach((rgb, index) => {
    questions.push({ rgb: [...rgb] as Rgb, answer: index, perturbed: false });
    questions.push({ rgb: [...rgb] as Rgb, answer: index, perturbed: false });
  });
  pairs.forEach((_, pairIndex) => {
    const side = rand() < 0.5 ? 0 : 1;
    const index = pairIndex * 2 + side;
    questions.push({
      rgb: perturbSrgb(colors[index], PERTURB_DELTA_E, rand),
      answer: index,
      perturbed: true,
    });
  });
  // Fisher-Yates with the same stream, so order is seed-reproducible.
  for (let i = questions.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [questions[i], questions[j]] = [questions[j], questions[i]];
  }
  return questions;
}

/** Number of correctly named questions. */
export function scoreQuiz(questions: QuizQuestion[], answers: number[]): number {
  if (answers.length !== questions.length) {
    throw new RangeError("answer count does not match question count");
  }
  return questions.reduce((acc, q, i) => acc + (answers[i] === q.answer ? 1 : 0), 0);
}

// Warm-up gate: before the quiz, pick the odd patch out of four, six
// times in a row. The odd color comes from a different training pair, so
// the two colors are immediately distinct and the warm-up only teaches
// the interaction, not discrimination.

export const WARMUP_STREAK = 6;

export interface WarmupTrial {
  patches: [Rgb, Rgb, Rgb, Rgb];
  oddPosition: number;
}

export interface WarmupState {
  streak: number;
  passed: boolean;
}

export function warmupStart(): WarmupState {
  return { streak: 0, passed: false };
}

export function warmupTrial(rand: () => number, pairs: TrainingPair[] = TRAINING_PAIRS): WarmupTrial {
  const basePair = Math.floor(rand() * pairs.length);
  let oddPair = Math.floor(rand() * pairs.length);
  while (oddPair === basePair) oddPair = Math.floor(rand() * pairs.length);
  const pick = (pairIndex: number): Rgb => {
    const pair = pairs[pairIndex];
    return [...(rand() < 0.5 ? pair.first : pair.second)] as Rgb;
  };
  const base = pick(basePair);
  const odd = pick(oddPair);
  const oddPosition = Math.floor(rand() * 4);
  const patches = [base, base, base, base].map((c) => [...c] as Rgb) as WarmupTrial["patches"];
  patches[oddPosition] = odd;
  return { patches, oddPosition };
}

export function warmupAnswer(state: WarmupState, correct: boolean): WarmupState {
  if (state.passed) return state;
  const streak = correct ? state.streak + 1 : 0;
  return { streak, passed: streak >= WARMUP_STREAK };
}
