// Live-service integration: spawns the real render service and drives it the
// way the explorer does.  The two acceptance checks live here:
//   * a streamed render, assembled tile by tile, is pixel-identical to the
//     one-shot PNG (three presets);
//   * probing the center pixel reaches the view-center world point to 1e-6.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ServiceClient, ServiceError, type PresetEntry } from "../src/api.js";
import { blitTile, CoverageTracker, makeBuffer } from "../src/assemble.js";
import type { StreamFrame } from "../src/frames.js";
import { panelModel } from "../src/panel.js";
import { stageResiduals } from "../src/probe.js";
import { cloneScene, imageSize, sceneView, validateSceneClient, type SceneDocument } from "../src/scene.js";
import { ExplorerState } from "../src/state.js";
import { pixelToWorld, wSliderTarget, zoomView } from "../src/view.js";
import { decodePng } from "./helpers/png.js";
import { startService, type LiveService } from "./helpers/service.js";

const STREAM_PRESETS = ["classic2d", "squircle-hex2d", "negscale2d"];

let service: LiveService;
let client: ServiceClient;
let presets: PresetEntry[];

beforeAll(async () => {
  service = await startService();
  client = new ServiceClient(service.base);
  presets = await client.presets();
});

afterAll(async () => {
  await service?.stop();
});

const preset = (name: string): SceneDocument => {
  const entry = presets.find((p) => p.name === name);
  if (!entry) throw new Error(`preset ${name} missing from catalog`);
  return cloneScene(entry.scene);
};

describe("service basics", () => {
  it("healthz answers with a version and build id", async () => {
    const info = await client.health();
    expect(info.version).toMatch(/^\d+\.\d+/);
    expect(info.build).toMatch(/^[0-9a-f]{12}$/);
  });

  it("the catalog carries the known presets", () => {
    const names = presets.map((p) => p.name);
    for (const name of STREAM_PRESETS) expect(names).toContain(name);
    expect(names).toContain("cube3d");
    expect(names).toContain("hyper4d-cube");
  });

  it("loading a preset round-trips the document unchanged", () => {
    const state = new ExplorerState();
    const doc = preset("classic2d");
    state.load(doc);
    expect(state.dirty).toBe(false);
    expect(JSON.parse(state.exportJson())).toEqual(doc);
    // parameter panel echoes the classic constants
    const model = panelModel(state.document);
    expect(model.foldHalfwidth).toBe(1.0);
    expect(model.scale).toBe(2.0);
  });

  it("surfaces validation diagnostics with their document path", async () => {
    const doc = preset("classic2d");
    (doc.iteration as { scale: number }).scale = 0;
    await expect(client.renderOnce(doc)).rejects.toSatisfy((exc) => {
      expect(exc).toBeInstanceOf(ServiceError);
      const err = exc as ServiceError;
      expect(err.status).toBe(422);
      expect(err.path).toBe("iteration");
      expect(err.message).toContain("scale");
      return true;
    });
  });
});

describe("stream assembly matches the one-shot render", () => {
  it.each(STREAM_PRESETS)("%s", async (name) => {
    const scene = preset(name);
    const size = imageSize(scene);

    const oneShot = await client.renderOnce(scene);
    const reference = decodePng(oneShot.png);
    expect(reference.width).toBe(size.width);
    expect(reference.height).toBe(size.height);

    const canvas = makeBuffer(size.width, size.height);
    const coverage = new CoverageTracker(size.width, size.height);
    const frames: StreamFrame[] = [];
    const result = await client.renderStream(scene, (frame) => {
      frames.push(frame);
      if (frame.type === "tile") {
        coverage.add(frame.x, frame.y, frame.width, frame.height);
        blitTile(canvas, frame, decodePng(frame.png));
      }
    });

    expect(result.error).toBeNull();
    expect(result.tiles).toBe(frames.length);
    expect(coverage.complete).toBe(true);

    expect(canvas.data.length).toBe(reference.data.length);
    let diff = 0;
    for (let i = 0; i < canvas.data.length; i++) {
      if (canvas.data[i] !== reference.data[i]) diff++;
    }
    expect(diff).toBe(0);
    console.log(
      `[PASS] ui stream assembly (${name}): ${result.tiles} tiles -> ` +
        `${size.width}x${size.height}, 0 differing bytes`,
    );
  });

  it("tile rectangles exactly partition a custom tiling", async () => {
    const scene = preset("classic2d");
    scene.image = { width: 70, height: 50 }; // ragged edge tiles
    scene.tile_size = 16;
    const coverage = new CoverageTracker(70, 50);
    const result = await client.renderStream(scene, (frame) => {
      if (frame.type === "tile") coverage.add(frame.x, frame.y, frame.width, frame.height);
    });
    expect(result.error).toBeNull();
    expect(result.tiles).toBe(Math.ceil(70 / 16) * Math.ceil(50 / 16));
    expect(coverage.complete).toBe(true);
  });

  it("a scene problem arrives as a single error frame, not tiles", async () => {
    const scene = preset("classic2d");
    (scene.iteration as { escape_distance: number }).escape_distance = -5;
    const frames: StreamFrame[] = [];
    const result = await client.renderStream(scene, (frame) => frames.push(frame));
    expect(result.tiles).toBe(0);
    expect(frames).toHaveLength(1);
    expect(result.error).toContain("escape_distance");
  });
});

describe("probe correctness", () => {
  it("center-pixel probe hits the view center within 1e-6 (classic2d)", async () => {
    const scene = preset("classic2d");
    const size = imageSize(scene);
    const view = sceneView(scene);
    if (view.kind !== "window2d") throw new Error("classic2d should be a window");
    const point = pixelToWorld(view, size.width, size.height, size.width / 2, size.height / 2);
    const record = await client.probe(scene, point);
    const err = Math.max(
      Math.abs(record.point[0] - view.center[0]),
      Math.abs(record.point[1] - view.center[1]),
    );
    expect(err).toBeLessThanOrEqual(1e-6);
    console.log(`[PASS] ui probe correctness (classic2d): center offset ${err.toExponential(2)}`);
  });

  it("center-pixel probe stays centered under rotation and zoom", async () => {
    let scene = preset("square2d");
    const size = imageSize(scene);
    let view = sceneView(scene);
    if (view.kind !== "window2d") throw new Error("square2d should be a window");
    view = { ...view, rotation: 0.7, center: [0.3, -0.2] };
    view = zoomView(view, 2, size.width, size.height) as typeof view;
    scene = { ...scene, view };
    const point = pixelToWorld(view, size.width, size.height, size.width / 2, size.height / 2);
    const record = await client.probe(scene, point);
    const err = Math.max(
      Math.abs(record.point[0] - 0.3),
      Math.abs(record.point[1] - -0.2),
    );
    expect(err).toBeLessThanOrEqual(1e-6);
    console.log(
      `[PASS] ui probe correctness (rotated+zoomed window): center offset ${err.toExponential(2)}`,
    );
  });

  it("center-pixel probe hits the slice origin on a 4D scene", async () => {
    const scene = preset("hyper4d-blend");
    const size = imageSize(scene);
    const view = sceneView(scene);
    if (view.kind !== "sliceframe") throw new Error("hyper4d-blend should be a sliceframe");
    const point = pixelToWorld(view, size.width, size.height, size.width / 2, size.height / 2);
    const record = await client.probe(scene, point);
    const err = Math.max(...record.point.map((c, k) => Math.abs(c - view.origin[k])));
    expect(err).toBeLessThanOrEqual(1e-6);
    expect(record.dimension).toBe(4);
    console.log(`[PASS] ui probe correctness (hyper4d-blend): origin offset ${err.toExponential(2)}`);
  });

  it("the displayed stage chain is self-consistent on live data", async () => {
    const scene = preset("squircle-hex2d");
    const record = await client.probe(scene, [1.1, 0.4]);
    expect(record.stages.length).toBeGreaterThan(0);
    for (const r of stageResiduals(record)) expect(r).toBeLessThanOrEqual(1e-12);
  });

  it("an origin click on the classic scene shows all-zero stages", async () => {
    const scene = preset("classic2d");
    const record = await client.probe(scene, [0, 0], 5);
    expect(record.result.escaped).toBe(false);
    for (const stage of record.stages) {
      expect(stage.boxfold).toEqual([0, 0]);
      expect(stage.shapefold).toEqual([0, 0]);
      expect(stage.update).toEqual([0, 0]);
    }
  });

  it("probe failures carry the scene path diagnostics", async () => {
    const scene = preset("classic2d");
    scene.iteration.outer_shape.radius = -2;
    await expect(client.probe(scene, [0, 0])).rejects.toSatisfy((exc) => {
      const err = exc as ServiceError;
      expect(err.status).toBe(422);
      expect(err.path).toContain("scene");
      return true;
    });
  });
});

describe("editor exports stay valid server-side", () => {
  // Deterministic LCG so failures reproduce.
  let seed = 0x5eed;
  const rand = () => {
    seed = (seed * 1103515245 + 12345) & 0x7fffffff;
    return seed / 0x7fffffff;
  };
  const uniform = (lo: number, hi: number) => lo + (hi - lo) * rand();

  it("randomized slider positions always pass service validation", async () => {
    const base = preset("classic2d");
    const blend4d = preset("hyper4d-blend");
    for (let trial = 0; trial < 25; trial++) {
      const doc = cloneScene(trial % 2 === 0 ? base : blend4d);
      doc.iteration.fold_halfwidth = uniform(0.2, 3.0);
      doc.iteration.scale = (rand() < 0.5 ? -1 : 1) * uniform(0.5, 4.0);
      doc.iteration.escape_distance = uniform(64, 4096);
      doc.iteration.max_iterations = 1 + Math.floor(uniform(0, 64));
      const w = wSliderTarget(doc.dimension, sceneView(doc));
      if (w !== null && doc.view?.kind === "sliceframe") {
        doc.view.origin[3] = uniform(-2, 2);
      }
      if (doc.iteration.outer_shape.kind === "blend") {
        doc.iteration.outer_shape.t = uniform(0, 1);
      }
      expect(validateSceneClient(doc)).toEqual([]);
      const record = await client.probe(doc, doc.view?.kind === "sliceframe" ? [0, 0, 0, 0] : [0, 0]);
      expect(record.dimension).toBe(doc.dimension);
    }
  });
});
