/**
 * Render worker: rotates a band of rows so frames can be computed on
 * every core. The source frame is sent once; each render request only
 * carries the angle and the band, and returns a transferable buffer.
 */

import { rotationMatrix } from "./color.js";
import { rotateRgbaBand } from "./render.js";

interface InitMessage {
  kind: "init";
  buffer: ArrayBuffer;
  width: number;
  height: number;
}

interface RenderMessage {
  kind: "render";
  requestId: number;
  thetaDeg: number;
  startRow: number;
  endRow: number;
}

let src: Uint8ClampedArray | null = null;
let width = 0;

self.onmessage = (event: MessageEvent<InitMessage | RenderMessage>) => {
  const msg = event.data;
  if (msg.kind === "init") {
    src = new Uint8ClampedArray(msg.buffer);
    width = msg.width;
    return;
  }
  if (!src) return;
  const rows = msg.endRow - msg.startRow;
  const band = new Uint8ClampedArray(rows * width * 4);
  const shifted = new Uint8ClampedArray(src.buffer, msg.startRow * width * 4, rows * width * 4);
  rotateRgbaBand(shifted, band, width, 0, rows, rotationMatrix((msg.thetaDeg * Math.PI) / 180));
  (self as unknown as Worker).postMessage(
    { requestId: msg.requestId, startRow: msg.startRow, buffer: band.buffer },
    [band.buffer],
  );
};
