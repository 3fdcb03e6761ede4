// Editor state.  The document is held as plain JSON; every edit goes through
// a clone so render requests can carry immutable snapshots, and a dirty flag
// marks divergence from the loaded preset.  The scheduler below enforces the
// interaction contract: gestures debounce into render requests and at most
// one stream is ever in flight per canvas.

import { cloneScene, type SceneDocument } from "./scene.js";

export const RENDER_DEBOUNCE_MS = 200;

export interface RenderMeta {
  sceneHash: string | null;
  tiles: number;
  elapsedMs: number;
}

function deepFreeze<T>(value: T): T {
  if (typeof value === "object" && value !== null && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

export class ExplorerState {
  private doc: SceneDocument | null = null;
  dirty = false;
  lastRender: RenderMeta | null = null;

  get hasDocument(): boolean {
    return this.doc !== null;
  }

  get document(): SceneDocument {
    if (this.doc === null) throw new Error("no scene loaded");
    return this.doc;
  }

  /** Replace the document (preset load); clears the dirty flag. */
  load(doc: SceneDocument): void {
    this.doc = cloneScene(doc);
    this.dirty = false;
  }

  /** Clone-edit-swap; the previous document object is never mutated. */
  edit(mutate: (doc: SceneDocument) => void): void {
    const next = cloneScene(this.document);
    mutate(next);
    this.doc = next;
    this.dirty = true;
  }

  /** Deep-frozen copy for a render request; later edits cannot touch it. */
  snapshot(): SceneDocument {
    return deepFreeze(cloneScene(this.document));
  }

  exportJson(): string {
    return JSON.stringify(this.document, null, 2);
  }
}

type RenderRun = (scene: SceneDocument, signal: AbortSignal) => Promise<void>;

/**
 * Debounces render requests and cancels the in-flight stream as soon as a
 * newer request arrives.  Runs are serialized: a new run starts only after
 * the aborted one has actually settled.
 */
export class RenderScheduler {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private chain: Promise<void> = Promise.resolve();
  private pending: SceneDocument | null = null;

  constructor(
    private readonly run: RenderRun,
    private readonly debounceMs: number = RENDER_DEBOUNCE_MS,
  ) {}

  /** True while a render stream is running (or about to). */
  get busy(): boolean {
    return this.controller !== null || this.timer !== null;
  }

  /** Queue a render of `scene`; any stream already running is cancelled now. */
  request(scene: SceneDocument): void {
    this.controller?.abort();
    this.controller = null;
    this.pending = scene;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.start();
    }, this.debounceMs);
  }

  /** Skip the debounce delay for whatever is queued (initial load, tests). */
  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
      this.start();
    }
  }

  /** Drop any queued request and cancel the in-flight stream. */
  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pending = null;
    this.controller?.abort();
    this.controller = null;
  }

  private start(): void {
    const scene = this.pending;
    if (scene === null) return;
    this.pending = null;
    const controller = new AbortController();
    this.controller = controller;
    this.chain = this.chain
      .then(() => {
        if (controller.signal.aborted) return;
        return this.run(scene, controller.signal);
      })
      .catch(() => {
        // Abort errors and render failures are the runner's to report; the
        // scheduler only cares that the slot is free again.
      })
      .finally(() => {
        if (this.controller === controller) this.controller = null;
      });
  }
}
