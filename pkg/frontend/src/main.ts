// Explorer entry point: wires the service client, editor state, parameter
// panel, canvas, and probe panel together.  Serve this directory statically
// and point it at a running render service (default loopback port 8642, or
// ?api=http://host:port).

import { ServiceClient, ServiceError, type PresetEntry } from "./api.js";
import { CoverageTracker } from "./assemble.js";
import { ControlPanel } from "./panel.js";
import { renderProbePanel } from "./probe.js";
import { cloneScene, imageSize, sceneView, validateSceneClient, type SceneDocument } from "./scene.js";
import { ExplorerState, RenderScheduler } from "./state.js";
import { dollyCamera, orbitCamera, panView, pixelToWorld, zoomView } from "./view.js";

const DEFAULT_API = "http://127.0.0.1:8642";
const WHEEL_ZOOM_FACTOR = Math.SQRT2; // two notches double the magnification
const ORBIT_RADIANS_PER_PIXEL = 0.008;
const DRAG_RESOLUTION_DIVISOR = 2; // 3D renders at half size while dragging
const MIN_DRAG_PIXELS = 32;

class ExplorerApp {
  private state = new ExplorerState();
  private presets: PresetEntry[] = [];
  private scheduler: RenderScheduler;
  private canvas: HTMLCanvasElement;
  private ctx: CanvasRenderingContext2D;
  private panel: ControlPanel;
  private banner: HTMLElement;
  private status: HTMLElement;
  private probeBox: HTMLElement;
  private dragging = false;
  private dragMoved = false;
  private lastPointer: [number, number] = [0, 0];

  constructor(
    private client: ServiceClient,
    root: HTMLElement,
  ) {
    this.banner = document.createElement("div");
    this.banner.className = "banner hidden";
    root.appendChild(this.banner);

    const layout = document.createElement("div");
    layout.className = "layout";
    root.appendChild(layout);

    const left = document.createElement("div");
    layout.appendChild(left);
    this.panel = new ControlPanel(left);
    this.panel.onPresetChange = (name) => void this.loadPreset(name);
    this.panel.onEdit = (mutate) => {
      this.state.edit(mutate);
      this.panel.refresh(this.state.document);
      this.requestRender();
    };

    const center = document.createElement("div");
    center.className = "stage";
    this.canvas = document.createElement("canvas");
    const ctx = this.canvas.getContext("2d");
    if (ctx === null) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
    center.appendChild(this.canvas);
    this.status = document.createElement("div");
    this.status.className = "status";
    center.appendChild(this.status);
    layout.appendChild(center);

    this.probeBox = document.createElement("div");
    this.probeBox.className = "probe";
    layout.appendChild(this.probeBox);

    this.scheduler = new RenderScheduler((scene, signal) => this.paintStream(scene, signal));
    this.bindGestures();
  }

  async start(): Promise<void> {
    const info = await this.client.health();
    this.presets = await this.client.presets();
    this.panel.setPresets(this.presets, this.presets[0]?.name ?? "");
    this.status.textContent = `service ${info.version} (${info.build})`;
    if (this.presets.length > 0) await this.loadPreset(this.presets[0].name);
  }

  private async loadPreset(name: string): Promise<void> {
    const entry = this.presets.find((p) => p.name === name);
    if (entry === undefined) {
      this.showBanner(`unknown preset ${JSON.stringify(name)}`);
      return; // state stays as it was
    }
    this.state.load(entry.scene);
    this.panel.setPresets(this.presets, name);
    this.panel.refresh(this.state.document);
    this.probeBox.replaceChildren();
    this.requestRender();
    this.scheduler.flush();
  }

  /** Snapshot the document (reduced size mid-drag) and queue a render. */
  private requestRender(): void {
    const doc = this.state.document;
    const problems = validateSceneClient(doc);
    if (problems.length > 0) {
      this.showBanner(problems.join("; "));
      return;
    }
    this.clearBanner();
    let scene = this.state.snapshot();
    if (this.dragging && sceneView(doc).kind === "camera3d") {
      const size = imageSize(doc);
      const drag = cloneScene(scene) as SceneDocument;
      drag.image = {
        width: Math.max(MIN_DRAG_PIXELS, Math.round(size.width / DRAG_RESOLUTION_DIVISOR)),
        height: Math.max(MIN_DRAG_PIXELS, Math.round(size.height / DRAG_RESOLUTION_DIVISOR)),
      };
      scene = drag;
    }
    this.scheduler.request(scene);
  }

  /** The render runner: streams tiles into the canvas as they arrive. */
  private async paintStream(scene: SceneDocument, signal: AbortSignal): Promise<void> {
    const size = scene.image ?? { width: 256, height: 256 };
    this.canvas.width = size.width;
    this.canvas.height = size.height;
    this.ctx.clearRect(0, 0, size.width, size.height);
    const coverage = new CoverageTracker(size.width, size.height);
    const started = performance.now();
    try {
      const result = await this.client.renderStream(
        scene,
        (frame) => {
          if (frame.type === "error") {
            this.showBanner(frame.message);
            return;
          }
          coverage.add(frame.x, frame.y, frame.width, frame.height);
          const bytes = new Uint8Array(frame.png); // fresh ArrayBuffer for Blob
          void createImageBitmap(new Blob([bytes], { type: "image/png" })).then((bmp) => {
            if (!signal.aborted) this.ctx.drawImage(bmp, frame.x, frame.y);
          });
        },
        signal,
      );
      if (result.error === null && coverage.complete) {
        const elapsed = performance.now() - started;
        this.state.lastRender = { sceneHash: null, tiles: result.tiles, elapsedMs: elapsed };
        this.status.textContent = `${size.width}x${size.height} · ${result.tiles} tiles · ${elapsed.toFixed(0)} ms`;
      }
    } catch (exc) {
      if ((exc as Error).name === "AbortError") return; // superseded render
      this.showBanner(exc instanceof ServiceError ? `${exc.path}: ${exc.message}` : String(exc));
    }
  }

  // --- gestures -----------------------------------------------------------

  private canvasPixel(ev: MouseEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    const px = ((ev.clientX - rect.left) / rect.width) * this.canvas.width;
    const py = ((ev.clientY - rect.top) / rect.height) * this.canvas.height;
    return [px, py];
  }

  private bindGestures(): void {
    this.canvas.addEventListener("pointerdown", (ev) => {
      this.dragging = true;
      this.dragMoved = false;
      this.lastPointer = [ev.clientX, ev.clientY];
      this.canvas.setPointerCapture(ev.pointerId);
    });

    this.canvas.addEventListener("pointermove", (ev) => {
      if (!this.dragging || !this.state.hasDocument) return;
      const dx = ev.clientX - this.lastPointer[0];
      const dy = ev.clientY - this.lastPointer[1];
      if (dx === 0 && dy === 0) return;
      this.lastPointer = [ev.clientX, ev.clientY];
      this.dragMoved = true;
      const view = sceneView(this.state.document);
      if (view.kind === "camera3d") {
        this.state.edit((doc) => {
          doc.view = orbitCamera(
            view,
            dx * ORBIT_RADIANS_PER_PIXEL,
            dy * ORBIT_RADIANS_PER_PIXEL,
          );
        });
      } else {
        const size = imageSize(this.state.document);
        const scaleX = this.canvas.width / this.canvas.getBoundingClientRect().width;
        this.state.edit((doc) => {
          doc.view = panView(view, size.width, size.height, dx * scaleX, dy * scaleX);
        });
      }
      this.requestRender();
    });

    this.canvas.addEventListener("pointerup", (ev) => {
      const wasDrag = this.dragMoved;
      this.dragging = false;
      this.dragMoved = false;
      this.canvas.releasePointerCapture(ev.pointerId);
      if (wasDrag) {
        this.requestRender(); // full resolution now the drag ended
      } else {
        void this.probeAt(ev);
      }
    });

    this.canvas.addEventListener("wheel", (ev) => {
      if (!this.state.hasDocument) return;
      ev.preventDefault();
      const factor = ev.deltaY < 0 ? WHEEL_ZOOM_FACTOR : 1 / WHEEL_ZOOM_FACTOR;
      const view = sceneView(this.state.document);
      if (view.kind === "camera3d") {
        this.state.edit((doc) => {
          doc.view = dollyCamera(view, factor);
        });
      } else {
        const size = imageSize(this.state.document);
        const [px, py] = this.canvasPixel(ev);
        this.state.edit((doc) => {
          doc.view = zoomView(view, factor, size.width, size.height, px, py);
        });
      }
      this.panel.refresh(this.state.document);
      this.requestRender();
    });
  }

  /** Click: convert the pixel to a world point and show its orbit stages. */
  private async probeAt(ev: MouseEvent): Promise<void> {
    if (!this.state.hasDocument) return;
    const view = sceneView(this.state.document);
    if (view.kind === "camera3d") return; // no world point under a camera pixel
    const size = imageSize(this.state.document);
    const [px, py] = this.canvasPixel(ev);
    const point = pixelToWorld(view, size.width, size.height, px, py);
    try {
      const record = await this.client.probe(this.state.snapshot(), point);
      this.probeBox.replaceChildren(renderProbePanel(record));
    } catch (exc) {
      this.showBanner(
        exc instanceof ServiceError ? `probe: ${exc.message}` : String(exc),
      );
    }
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.classList.remove("hidden");
  }

  private clearBanner(): void {
    this.banner.classList.add("hidden");
  }
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (root === null) throw new Error("missing #app container");
  const api = new URLSearchParams(window.location.search).get("api") ?? DEFAULT_API;
  const app = new ExplorerApp(new ServiceClient(api), root);
  try {
    await app.start();
  } catch (exc) {
    const err = document.createElement("div");
    err.className = "banner";
    err.textContent = `render service unreachable at ${api}: ${String(exc)}`;
    root.prepend(err);
  }
}

void boot();
