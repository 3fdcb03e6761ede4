// HTTP client for the render service.  Everything the explorer knows about
// the backend goes through this file: one-shot renders, the progressive tile
// stream, orbit probes, the preset catalog, and health.

import { FrameParser, type StreamFrame } from "./frames.js";
import type { SceneDocument } from "./scene.js";

export interface PresetEntry {
  name: string;
  description: string;
  scene: SceneDocument;
}

export interface HealthInfo {
  version: string;
  build: string;
}

export interface ProbeStage {
  iteration: number;
  boxfold: number[];
  shapefold: number[];
  update: number[];
  magnitude: number;
  escaped: boolean;
}

export interface ProbeRecord {
  point: number[];
  dimension: number;
  scale: number;
  offset: number[];
  stages: ProbeStage[];
  result: {
    escaped: boolean;
    escape_iteration: number;
    trap_origin: number;
    trap_axes: number[];
    final_magnitude: number;
  };
}

export interface RenderResult {
  png: Uint8Array;
  sceneHash: string | null;
}

export interface StreamResult {
  tiles: number;
  /** Message of the error frame that ended the stream, if any. */
  error: string | null;
}

/** A structured failure from the service: HTTP status plus its diagnostic. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly path: string,
    message: string,
  ) {
    super(message);
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let path = "";
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body = (await resp.json()) as { error?: { path?: string; message?: string } };
    if (body.error) {
      path = body.error.path ?? "";
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ServiceError(resp.status, path, message);
}

export class ServiceClient {
  readonly base: string;

  constructor(base: string) {
    this.base = base.replace(/\/+$/, "");
  }

  async health(): Promise<HealthInfo> {
    const resp = await fetch(`${this.base}/healthz`);
    await raiseForStatus(resp);
    return (await resp.json()) as HealthInfo;
  }

  async presets(): Promise<PresetEntry[]> {
    const resp = await fetch(`${this.base}/api/v1/presets`);
    await raiseForStatus(resp);
    const body = (await resp.json()) as { presets: PresetEntry[] };
    return body.presets;
  }

  async renderOnce(scene: SceneDocument, signal?: AbortSignal): Promise<RenderResult> {
    const resp = await fetch(`${this.base}/api/v1/render`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(scene),
      signal,
    });
    await raiseForStatus(resp);
    const png = new Uint8Array(await resp.arrayBuffer());
    return { png, sceneHash: resp.headers.get("X-Scene-Hash") };
  }

  /**
   * Progressive render: `onFrame` fires for every decoded frame in arrival
   * order.  Resolves once the stream closes cleanly; an error frame still
   * resolves (reported in the result) since the stream itself ended properly.
   */
  async renderStream(
    scene: SceneDocument,
    onFrame: (frame: StreamFrame) => void,
    signal?: AbortSignal,
  ): Promise<StreamResult> {
    const resp = await fetch(`${this.base}/api/v1/render/stream`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(scene),
      signal,
    });
    await raiseForStatus(resp);
    if (resp.body === null) throw new Error("stream response has no body");

    const parser = new FrameParser();
    const result: StreamResult = { tiles: 0, error: null };
    const reader = resp.body.getReader();
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      for (const frame of parser.push(value)) {
        if (frame.type === "tile") result.tiles += 1;
        else result.error = frame.message;
        onFrame(frame);
      }
    }
    parser.end();
    return result;
  }

  async probe(
    scene: SceneDocument,
    point: number[],
    maxIterations?: number,
  ): Promise<ProbeRecord> {
    const payload: Record<string, unknown> = { scene, point };
    if (maxIterations !== undefined) payload.max_iterations = maxIterations;
    const resp = await fetch(`${this.base}/api/v1/probe`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    await raiseForStatus(resp);
    return (await resp.json()) as ProbeRecord;
  }
}
