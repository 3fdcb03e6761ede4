// Tile placement.  The canvas painter draws decoded tiles at their frame
// coordinates; these helpers carry the same placement rules in a form the
// test suite can byte-compare, and track coverage so a finished stream can
// be recognized (tiles must exactly partition the image).

import type { TileFrame } from "./frames.js";

export interface PixelBuffer {
  width: number;
  height: number;
  /** RGBA, row-major from the top-left. */
  data: Uint8ClampedArray;
}

export function makeBuffer(width: number, height: number): PixelBuffer {
  return { width, height, data: new Uint8ClampedArray(width * height * 4) };
}

export class TilePlacementError extends Error {}

/** Copy a decoded tile into the image at the frame's offset. */
export function blitTile(dst: PixelBuffer, frame: TileFrame, tile: PixelBuffer): void {
  if (tile.width !== frame.width || tile.height !== frame.height) {
    throw new TilePlacementError(
      `tile pixels are ${tile.width}x${tile.height} but the frame claims ` +
        `${frame.width}x${frame.height}`,
    );
  }
  if (
    frame.x + frame.width > dst.width ||
    frame.y + frame.height > dst.height
  ) {
    throw new TilePlacementError(
      `tile at (${frame.x}, ${frame.y}) size ${frame.width}x${frame.height} ` +
        `lies outside the ${dst.width}x${dst.height} image`,
    );
  }
  for (let row = 0; row < frame.height; row++) {
    const src = tile.data.subarray(row * tile.width * 4, (row + 1) * tile.width * 4);
    dst.data.set(src, ((frame.y + row) * dst.width + frame.x) * 4);
  }
}

/** Marks tile rectangles and notices overlap; complete when every pixel is covered. */
export class CoverageTracker {
  private covered: Uint8Array;
  private count = 0;

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.covered = new Uint8Array(width * height);
  }

  add(x: number, y: number, w: number, h: number): void {
    if (x + w > this.width || y + h > this.height) {
      throw new TilePlacementError(
        `tile at (${x}, ${y}) size ${w}x${h} lies outside the ` +
          `${this.width}x${this.height} image`,
      );
    }
    for (let row = y; row < y + h; row++) {
      const base = row * this.width;
      for (let col = x; col < x + w; col++) {
        if (this.covered[base + col]) {
          throw new TilePlacementError(`tiles overlap at pixel (${col}, ${row})`);
        }
        this.covered[base + col] = 1;
      }
    }
    this.count += w * h;
  }

  get complete(): boolean {
    return this.count === this.width * this.height;
  }

  get coveredPixels(): number {
    return this.count;
  }
}
