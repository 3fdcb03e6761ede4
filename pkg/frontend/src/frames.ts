// Tile-stream frame parser.  The service framing, big-endian throughout:
//
//   u32  length   -- byte count of everything after this field
//   u8   type     -- 0 = tile, 1 = error
//   tile:  x, y, width, height as four u32, then the tile's PNG bytes
//   error: UTF-8 message
//
// Chunks off the wire split frames arbitrarily, so the parser buffers and
// emits complete frames as they close.

export interface TileFrame {
  type: "tile";
  x: number;
  y: number;
  width: number;
  height: number;
  png: Uint8Array;
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type StreamFrame = TileFrame | ErrorFrame;

export class StreamFramingError extends Error {}

const LENGTH_BYTES = 4;
const TILE_HEADER_BYTES = 1 + 4 * 4; // type byte + x, y, width, height

export class FrameParser {
  private buffer = new Uint8Array(0);
  private decoder = new TextDecoder("utf-8", { fatal: true });

  /** Feed a chunk; returns every frame completed by it. */
  push(chunk: Uint8Array): StreamFrame[] {
    if (chunk.length > 0) {
      const joined = new Uint8Array(this.buffer.length + chunk.length);
      joined.set(this.buffer, 0);
      joined.set(chunk, this.buffer.length);
      this.buffer = joined;
    }
    const frames: StreamFrame[] = [];
    for (;;) {
      const frame = this.takeFrame();
      if (frame === null) break;
      frames.push(frame);
    }
    return frames;
  }

  /** Bytes sitting in the buffer that do not yet form a complete frame. */
  get pendingBytes(): number {
    return this.buffer.length;
  }

  /** Call when the stream closes; leftover partial bytes mean truncation. */
  end(): void {
    if (this.buffer.length > 0) {
      throw new StreamFramingError(
        `stream ended mid-frame with ${this.buffer.length} undecoded bytes`,
      );
    }
  }

  private takeFrame(): StreamFrame | null {
    if (this.buffer.length < LENGTH_BYTES) return null;
    const view = new DataView(this.buffer.buffer, this.buffer.byteOffset, this.buffer.length);
    const length = view.getUint32(0, false);
    if (length < 1) {
      throw new StreamFramingError("frame length must cover at least the type byte");
    }
    if (this.buffer.length < LENGTH_BYTES + length) return null;

    const type = view.getUint8(LENGTH_BYTES);
    let frame: StreamFrame;
    if (type === 0) {
      if (length < TILE_HEADER_BYTES) {
        throw new StreamFramingError(
          `tile frame of ${length} bytes is shorter than its ${TILE_HEADER_BYTES}-byte header`,
        );
      }
      frame = {
        type: "tile",
        x: view.getUint32(LENGTH_BYTES + 1, false),
        y: view.getUint32(LENGTH_BYTES + 5, false),
        width: view.getUint32(LENGTH_BYTES + 9, false),
        height: view.getUint32(LENGTH_BYTES + 13, false),
        png: this.buffer.slice(LENGTH_BYTES + TILE_HEADER_BYTES, LENGTH_BYTES + length),
      };
    } else if (type === 1) {
      const raw = this.buffer.slice(LENGTH_BYTES + 1, LENGTH_BYTES + length);
      frame = { type: "error", message: this.decoder.decode(raw) };
    } else {
      throw new StreamFramingError(`unknown frame type ${type}`);
    }
    this.buffer = this.buffer.slice(LENGTH_BYTES + length);
    return frame;
  }
}
