/**
 * Viewer app: image/camera view with gray-axis rotation driven by
 * swiping or the slider, a reset control, a naming probe and the
 * practice mode. Rotation runs locally (workers when available); the
 * service is only asked for names, simulation previews and
 * trajectories, so camera frames never leave the machine.
 */

import { ServiceClient, ServiceError } from "./api.js";
import { Rgb, rotateSrgb } from "./color.js";
import {
  BACKGROUND_SRGB,
  buildQuiz,
  mulberry32,
  QuizQuestion,
  scoreQuiz,
  TRAINING_PAIRS,
  WARMUP_STREAK,
  warmupAnswer,
  warmupStart,
  WarmupState,
  warmupTrial,
} from "./practice.js";
import { rotateRgbaFrame } from "./render.js";
import { initialState, resetTheta, setTheta, swipeToTheta, ViewerState } from "./state.js";

const service = new ServiceClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const view = el<HTMLCanvasElement>("view");
const viewCtx = view.getContext("2d", { willReadFrequently: true })!;
const slider = el<HTMLInputElement>("theta-slider");
const thetaLabel = el<HTMLSpanElement>("theta-label");
const statusLine = el<HTMLParagraphElement>("status");
const probePanel = el<HTMLDivElement>("probe-panel");
const trajectoryCanvas = el<HTMLCanvasElement>("trajectory");

let state: ViewerState = initialState();
let source: ImageData | null = null;
let cameraStream: MediaStream | null = null;
let probeArmed = false;

// ---------------------------------------------------------------------------
// Worker pool for frame rendering; falls back to synchronous rendering.

const workerCount = Math.max(1, Math.min(8, navigator.hardwareConcurrency || 1));
let workers: Worker[] = [];
let renderSeq = 0;

function resetWorkers(img: ImageData): void {
  workers.forEach((w) => w.terminate());
  workers = [];
  if (typeof Worker === "undefined") return;
  for (let k = 0; k < workerCount; k++) {
    const worker = new Worker(new URL("./worker.js", import.meta.url), { type: "module" });
    const copy = img.data.slice().buffer;
    worker.postMessage({ kind: "init", buffer: copy, width: img.width, height: img.height }, [copy]);
    workers.push(worker);
  }
}

function renderFrame(thetaDeg: number): void {
  if (!source) return;
  const img = source;
  if (workers.length === 0) {
    const out = rotateRgbaFrame(img.data, img.width, img.height, thetaDeg);
    viewCtx.putImageData(new ImageData(out, img.width, img.height), 0, 0);
    return;
  }
  const requestId = ++renderSeq;
  const out = new Uint8ClampedArray(img.data.length);
  const rowsPer = Math.ceil(img.height / workers.length);
  let pending = 0;
  workers.forEach((worker, index) => {
    const startRow = index * rowsPer;
    const endRow = Math.min(img.height, startRow + rowsPer);
    if (startRow >= endRow) return;
    pending += 1;
    worker.onmessage = (event: MessageEvent) => {
      const msg = event.data as { requestId: number; startRow: number; buffer: ArrayBuffer };
      if (msg.requestId !== requestId) return;
      out.set(new Uint8ClampedArray(msg.buffer), msg.startRow * img.width * 4);
      pending -= 1;
      if (pending === 0 && requestId === renderSeq) {
        viewCtx.putImageData(new ImageData(out, img.width, img.height), 0, 0);
      }
    };
    worker.postMessage({ kind: "render", requestId, thetaDeg, startRow, endRow });
  });
}

// ---------------------------------------------------------------------------
// State plumbing

function applyState(next: ViewerState): void {
  state = next;
  slider.value = state.thetaDeg.toFixed(1);
  thetaLabel.textContent = `${state.thetaDeg.toFixed(1)} deg`;
  renderFrame(state.thetaDeg);
  renderPractice();
}

function setSource(img: ImageData, label: string): void {
  source = img;
  view.width = img.width;
  view.height = img.height;
  resetWorkers(img);
  statusLine.textContent = label;
  applyState(resetTheta(state));
}

// ---------------------------------------------------------------------------
// Image upload and camera

el<HTMLInputElement>("file-input").addEventListener("change", async (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  stopCamera();
  const bitmap = await createImageBitmap(file);
  const scratch = document.createElement("canvas");
  scratch.width = bitmap.width;
  scratch.height = bitmap.height;
  const ctx = scratch.getContext("2d")!;
  ctx.drawImage(bitmap, 0, 0);
  setSource(ctx.getImageData(0, 0, bitmap.width, bitmap.height), `image: ${file.name}`);
});

function stopCamera(): void {
  cameraStream?.getTracks().forEach((t) => t.stop());
  cameraStream = null;
}

el<HTMLButtonElement>("camera-button").addEventListener("click", async () => {
  try {
    cameraStream = await navigator.mediaDevices.getUserMedia({ video: true });
  } catch (err) {
    statusLine.textContent = "camera unavailable (permission denied?); image upload still works";
    return;
  }
  const video = document.createElement("video");
  video.srcObject = cameraStream;
  await video.play();
  statusLine.textContent = "live camera";
  const scratch = document.createElement("canvas");
  const pump = () => {
    if (!cameraStream) return;
    scratch.width = video.videoWidth;
    scratch.height = video.videoHeight;
    const ctx = scratch.getContext("2d")!;
    ctx.drawImage(video, 0, 0);
    source = ctx.getImageData(0, 0, scratch.width, scratch.height);
    if (view.width !== source.width) {
      view.width = source.width;
      view.height = source.height;
    }
    const out = rotateRgbaFrame(source.data, source.width, source.height, state.thetaDeg);
    viewCtx.putImageData(new ImageData(out, source.width, source.height), 0, 0);
    requestAnimationFrame(pump);
  };
  requestAnimationFrame(pump);
});

// ---------------------------------------------------------------------------
// Gestures, slider, reset

let dragStartX: number | null = null;
let dragStartTheta = 0;

view.addEventListener("pointerdown", (event) => {
  if (probeArmed) {
    void probePixel(event);
    return;
  }
  dragStartX = event.clientX;
  dragStartTheta = state.thetaDeg;
  view.setPointerCapture(event.pointerId);
});

view.addEventListener("pointermove", (event) => {
  if (dragStartX === null) return;
  const fraction = (event.clientX - dragStartX) / view.clientWidth;
  applyState(swipeToTheta({ ...state, thetaDeg: dragStartTheta }, fraction));
});

view.addEventListener("pointerup", () => {
  dragStartX = null;
});

slider.addEventListener("input", () => applyState(setTheta(state, Number(slider.value))));
el<HTMLButtonElement>("reset-button").addEventListener("click", () => applyState(resetTheta(state)));

el<HTMLInputElement>("gain-input").addEventListener("change", (event) => {
  const gain = Number((event.target as HTMLInputElement).value);
  if (gain > 0) applyState({ ...state, swipeGain: gain });
});

window.addEventListener("keydown", (event) => {
  if (event.key === "ArrowRight") applyState(setTheta(state, state.thetaDeg + 2));
  if (event.key === "ArrowLeft") applyState(setTheta(state, state.thetaDeg - 2));
});

// ---------------------------------------------------------------------------
// Naming probe (always on the source pixel: names attach to original colors)

el<HTMLButtonElement>("probe-button").addEventListener("click", () => {
  probeArmed = !probeArmed;
  el<HTMLButtonElement>("probe-button").textContent = probeArmed ? "probe: click a pixel" : "probe";
});

async function probePixel(event: PointerEvent): Promise<void> {
  if (!source) return;
  const rect = view.getBoundingClientRect();
  const x = Math.floor(((event.clientX - rect.left) / rect.width) * source.width);
  const y = Math.floor(((event.clientY - rect.top) / rect.height) * source.height);
  if (x < 0 || y < 0 || x >= source.width || y >= source.height) return;
  const offset = (y * source.width + x) * 4;
  const rgb: Rgb = [source.data[offset], source.data[offset + 1], source.data[offset + 2]];
  try {
    const named = await service.nameColor(rgb[0], rgb[1], rgb[2], 3);
    const runnerUps = named.nearest.slice(1).map((n) => n.display_name).join(", ");
    probePanel.textContent =
      `(${x}, ${y}) rgb(${rgb.join(", ")}) -> ${named.display_name}` +
      (runnerUps ? ` (then: ${runnerUps})` : "");
    drawTrajectory(await service.trajectory(rgb[0], rgb[1], rgb[2], 90));
  } catch (err) {
    const detail = err instanceof ServiceError ? err.message : "service unreachable";
    probePanel.textContent = `probe disabled: ${detail} (rotation keeps working offline)`;
  }
}

function drawTrajectory(records: { x: number; y: number }[]): void {
  const ctx = trajectoryCanvas.getContext("2d")!;
  const { width, height } = trajectoryCanvas;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#333";
  ctx.beginPath();
  records.forEach((rec, i) => {
    const px = rec.x * width * 1.2;
    const py = height - rec.y * height * 1.2;
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.closePath();
  ctx.stroke();
}

// ---------------------------------------------------------------------------
// Simulation preview through the service

el<HTMLSelectElement>("sim-select").addEventListener("change", async (event) => {
  const kind = (event.target as HTMLSelectElement).value;
  const preview = el<HTMLImageElement>("sim-preview");
  if (!kind || !source) {
    preview.removeAttribute("src");
    return;
  }
  const scratch = document.createElement("canvas");
  scratch.width = source.width;
  scratch.height = source.height;
  scratch.getContext("2d")!.putImageData(source, 0, 0);
  const blob: Blob = await new Promise((resolve) => scratch.toBlob((b) => resolve(b!), "image/png"));
  try {
    const simulated = await service.simulatePng(blob, kind);
    preview.src = URL.createObjectURL(simulated);
  } catch (err) {
    statusLine.textContent = `simulation preview failed: ${err}`;
  }
});

// ---------------------------------------------------------------------------
// Practice mode

const practiceSection = el<HTMLDivElement>("practice");
const patchRow = el<HTMLDivElement>("patch-row");
const warmupArea = el<HTMLDivElement>("warmup-area");
const quizArea = el<HTMLDivElement>("quiz-area");
const quizButton = el<HTMLButtonElement>("quiz-button");
let quiz: QuizQuestion[] | null = null;
let quizAnswers: number[] = [];
let quizCursor = 0;
let warmup: WarmupState = warmupStart();
const warmupRand = mulberry32(Date.now() >>> 0);

el<HTMLButtonElement>("practice-button").addEventListener("click", () => {
  practiceSection.hidden = !practiceSection.hidden;
  renderPractice();
  renderWarmup();
});

// Familiarization gate: the quiz unlocks after six correct odd-patch
// picks in a row on clearly distinct colors.
function renderWarmup(): void {
  warmupArea.replaceChildren();
  if (warmup.passed) {
    quizButton.disabled = false;
    const done = document.createElement("p");
    done.textContent = "warm-up complete; the quiz is unlocked";
    warmupArea.appendChild(done);
    return;
  }
  quizButton.disabled = true;
  const prompt = document.createElement("p");
  prompt.textContent =
    `warm-up: click the odd patch (${warmup.streak} of ${WARMUP_STREAK} in a row)`;
  warmupArea.appendChild(prompt);
  const trial = warmupTrial(warmupRand);
  const row = document.createElement("div");
  row.className = "pair";
  trial.patches.forEach((rgb, index) => {
    const patch = document.createElement("button");
    patch.className = "patch";
    patch.style.background = `rgb(${rotateSrgb(rgb, state.thetaDeg).join(",")})`;
    patch.addEventListener("click", () => {
      warmup = warmupAnswer(warmup, index === trial.oddPosition);
      renderWarmup();
    });
    row.appendChild(patch);
  });
  warmupArea.appendChild(row);
}

function renderPractice(): void {
  if (practiceSection.hidden) return;
  patchRow.replaceChildren();
  patchRow.style.background = `rgb(${BACKGROUND_SRGB.join(",")})`;
  for (const pair of TRAINING_PAIRS) {
    const group = document.createElement("div");
    group.className = "pair";
    for (const color of [pair.first, pair.second]) {
      const patch = document.createElement("div");
      patch.className = "patch";
      const shifted = rotateSrgb(color, state.thetaDeg);
      patch.style.background = `rgb(${shifted.join(",")})`;
      group.appendChild(patch);
    }
    patchRow.appendChild(group);
  }
}

el<HTMLButtonElement>("quiz-button").addEventListener("click", () => {
  quiz = buildQuiz(Date.now() >>> 0);
  quizAnswers = [];
  quizCursor = 0;
  renderQuiz();
});

function renderQuiz(): void {
  quizArea.replaceChildren();
  if (!quiz) return;
  if (quizCursor >= quiz.length) {
    const score = scoreQuiz(quiz, quizAnswers);
    const done = document.createElement("p");
    done.textContent = `score: ${score} / ${quiz.length}`;
    quizArea.appendChild(done);
    return;
  }
  const question = quiz[quizCursor];
  const swatch = document.createElement("div");
  swatch.className = "patch quiz-swatch";
  swatch.style.background = `rgb(${rotateSrgb(question.rgb, state.thetaDeg).join(",")})`;
  quizArea.appendChild(swatch);
  const prompt = document.createElement("p");
  prompt.textContent = `question ${quizCursor + 1} of ${quiz.length}: which training color is this?`;
  quizArea.appendChild(prompt);
  TRAINING_PAIRS.forEach((pair, pairIndex) => {
    [pair.first, pair.second].forEach((color, side) => {
      const button = document.createElement("button");
      button.textContent = `${pair.label.split(" vs ")[side]}`;
      button.addEventListener("click", () => {
        quizAnswers.push(pairIndex * 2 + side);
        quizCursor += 1;
        renderQuiz();
      });
      quizArea.appendChild(button);
    });
  });
}

// ---------------------------------------------------------------------------

statusLine.textContent = "load an image or start the camera, then swipe or slide to rotate";
