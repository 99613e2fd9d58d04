// Run-length mask decoding. Runs alternate 0s/1s starting with a (possibly
// zero-length) 0-run, row-major over the downscaled bitmap.

import type { MaskRle } from "./protocol.js";

export class RleError extends Error {}

export function decodeMaskRle(rle: MaskRle): Uint8Array {
  const total = rle.width * rle.height;
  const out = new Uint8Array(total);
  let pos = 0;
  let val = 0;
  for (const run of rle.runs) {
    if (run < 0 || !Number.isInteger(run)) {
      throw new RleError(`bad run length ${run}`);
    }
    if (pos + run > total) {
      throw new RleError(`runs overflow bitmap (${pos + run} > ${total})`);
    }
    if (val === 1) out.fill(1, pos, pos + run);
    pos += run;
    val = 1 - val;
  }
  if (pos !== total) {
    throw new RleError(`runs sum to ${pos}, expected ${total}`);
  }
  return out;
}

// Cell rectangles to paint for the set bits, in downscaled grid units.
export function setCells(rle: MaskRle): { x: number; y: number }[] {
  const bits = decodeMaskRle(rle);
  const cells: { x: number; y: number }[] = [];
  for (let i = 0; i < bits.length; i++) {
    if (bits[i]) cells.push({ x: i % rle.width, y: Math.floor(i / rle.width) });
  }
  return cells;
}
