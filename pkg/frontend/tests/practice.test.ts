import { describe, expect, it } from "vitest";

import { deltaE76, labFromSrgb } from "../src/color.js";
import {
  buildQuiz,
  mulberry32,
  PERTURB_DELTA_E,
  perturbSrgb,
  QUIZ_LENGTH,
  scoreQuiz,
  TRAINING_PAIRS,
} from "../src/practice.js";

describe("quiz construction", () => {
  it("has exactly 20 questions", () => {
    expect(buildQuiz(7)).toHaveLength(QUIZ_LENGTH);
  });

  it("repeats each training color twice and perturbs one per pair", () => {
    const quiz = buildQuiz(13);
    const plain = quiz.filter((q) => !q.perturbed);
    const perturbed = quiz.filter((q) => q.perturbed);
    expect(plain).toHaveLength(16);
    expect(perturbed).toHaveLength(4);
    const counts = new Map<number, number>();
    for (const q of plain) counts.set(q.answer, (counts.get(q.answer) ?? 0) + 1);
    expect([...counts.values()]).toEqual([2, 2, 2, 2, 2, 2, 2, 2]);
    const pairsCovered = new Set(perturbed.map((q) => Math.floor(q.answer / 2)));
    expect(pairsCovered.size).toBe(4);
  });

  it("perturbs by 4 delta-E within 0.1", () => {
    const colors = TRAINING_PAIRS.flatMap((p) => [p.first, p.second]);
    for (const seed of [1, 2, 3, 4, 5]) {
      for (const q of buildQuiz(seed).filter((q) => q.perturbed)) {
        const original = colors[q.answer];
        const d = deltaE76(labFromSrgb(q.rgb), labFromSrgb(original));
        expect(d).toBeGreaterThanOrEqual(PERTURB_DELTA_E - 0.1);
        expect(d).toBeLessThanOrEqual(PERTURB_DELTA_E + 0.1);
      }
    }
  });

  it("is reproducible from the seed", () => {
    expect(buildQuiz(42)).toEqual(buildQuiz(42));
    expect(buildQuiz(42)).not.toEqual(buildQuiz(43));
  });
});

describe("perturbSrgb", () => {
  it("lands at the requested distance from mid gray", () => {
    const rand = mulberry32(9);
    for (let k = 0; k < 50; k++) {
      const moved = perturbSrgb([136, 136, 136], 4, rand);
      const d = deltaE76(labFromSrgb(moved), labFromSrgb([136, 136, 136]));
      expect(Math.abs(d - 4)).toBeLessThanOrEqual(0.1);
    }
  });

  it("rejects impossible distances", () => {
    expect(() => perturbSrgb([136, 136, 136], 500, mulberry32(1))).toThrow(RangeError);
  });
});

describe("scoring", () => {
  it("counts correct answers", () => {
    const quiz = buildQuiz(3);
    const perfect = quiz.map((q) => q.answer);
    expect(scoreQuiz(quiz, perfect)).toBe(QUIZ_LENGTH);
    const wrong = quiz.map((q) => (q.answer + 1) % 8);
    expect(scoreQuiz(quiz, wrong)).toBe(0);
    const half = quiz.map((q, i) => (i % 2 === 0 ? q.answer : (q.answer + 1) % 8));
    expect(scoreQuiz(quiz, half)).toBe(QUIZ_LENGTH / 2);
  });

  it("rejects mismatched answer sheets", () => {
    expect(() => scoreQuiz(buildQuiz(3), [0, 1])).toThrow(RangeError);
  });
});

describe("warm-up gate", () => {
  it("passes after six consecutive correct picks", async () => {
    const { warmupAnswer, warmupStart, WARMUP_STREAK } = await import("../src/practice.js");
    let state = warmupStart();
    for (let k = 0; k < WARMUP_STREAK; k++) {
      expect(state.passed).toBe(false);
      state = warmupAnswer(state, true);
    }
    expect(state.passed).toBe(true);
    expect(state.streak).toBe(WARMUP_STREAK);
  });

  it("resets the streak on a miss", async () => {
    const { warmupAnswer, warmupStart } = await import("../src/practice.js");
    let state = warmupStart();
    for (let k = 0; k < 5; k++) state = warmupAnswer(state, true);
    state = warmupAnswer(state, false);
    expect(state.streak).toBe(0);
    expect(state.passed).toBe(false);
  });

  it("builds trials with one odd patch from a different pair", async () => {
    const { mulberry32, warmupTrial } = await import("../src/practice.js");
    const rand = mulberry32(5);
    for (let k = 0; k < 50; k++) {
      const trial = warmupTrial(rand);
      const odd = trial.patches[trial.oddPosition];
      const others = trial.patches.filter((_, i) => i !== trial.oddPosition);
      for (const p of others) expect(p).toEqual(others[0]);
      expect(odd).not.toEqual(others[0]);
    }
  });
});
