import { describe, expect, it } from "vitest";
import { panelModel } from "../src/panel.js";
import {
  blendNodes,
  cloneScene,
  getAtPath,
  sceneView,
  validateSceneClient,
  type SceneDocument,
  type ShapeDoc,
} from "../src/scene.js";

const CLASSIC2D: SceneDocument = {
  schema_version: 1,
  dimension: 2,
  iteration: {
    fold_halfwidth: 1.0,
    outer_shape: { kind: "ball", radius: 1.0 },
    min_shape: { kind: "ball", radius: 0.5 },
    scale: 2.0,
    scale_mode: "ratio",
    offset_mode: "mandelbox",
    escape_distance: 1024.0,
    max_iterations: 100,
  },
  view: { kind: "window2d", center: [0.0, 0.0], width: 8.0, rotation: 0.0 },
  image: { width: 256, height: 256 },
  renderer: "sampled",
  threads: "auto",
  tile_size: 32,
};

const BLEND4D: SceneDocument = {
  schema_version: 1,
  dimension: 4,
  iteration: {
    fold_halfwidth: 1.0,
    outer_shape: {
      kind: "blend",
      children: [
        { kind: "ball", radius: 1.0 },
        { kind: "box", half_side: 1.0 },
      ],
      t: 0.5,
    },
    min_shape: { kind: "ball", radius: 0.5 },
    scale: 2.0,
    scale_mode: "ratio",
    offset_mode: "mandelbox",
    escape_distance: 1024.0,
    max_iterations: 100,
  },
  view: {
    kind: "sliceframe",
    origin: [0, 0, 0, 0],
    basis_u: [1, 0, 0, 0],
    basis_v: [0, 1, 0, 0],
    width: 6.0,
  },
};

describe("panelModel", () => {
  it("echoes the classic preset's parameters", () => {
    const model = panelModel(CLASSIC2D);
    expect(model.foldHalfwidth).toBe(1.0);
    expect(model.scale).toBe(2.0);
    expect(model.scaleMode).toBe("ratio");
    expect(model.offsetMode).toBe("mandelbox");
    expect(model.escapeDistance).toBe(1024.0);
    expect(model.maxIterations).toBe(100);
    expect(model.renderer).toBe("sampled");
    expect(model.imageWidth).toBe(256);
    expect(model.blends).toEqual([]);
    expect(model.wSlider).toBeNull();
  });

  it("exposes a w-slider and blend slider for the 4D blend scene", () => {
    const model = panelModel(BLEND4D);
    expect(model.wSlider?.path).toEqual(["view", "origin"]);
    expect(model.wSlider?.field).toBe(3);
    expect(model.blends).toHaveLength(1);
    expect(model.blends[0].t).toBe(0.5);
    expect(model.blends[0].path).toEqual(["iteration", "outer_shape"]);
  });

  it("reports julibox offsets and constant scaling when present", () => {
    const doc = cloneScene(CLASSIC2D);
    doc.iteration.offset_mode = { julibox: [0.1, -0.2] };
    doc.iteration.scale_mode = { constant: 1.5 };
    const model = panelModel(doc);
    expect(model.offsetMode).toBe("julibox");
    expect(model.juliaOffset).toEqual([0.1, -0.2]);
    expect(model.scaleMode).toBe("constant");
    expect(model.scaleConstant).toBe(1.5);
  });
});

describe("blendNodes", () => {
  it("finds nested blends with their document paths", () => {
    const doc = cloneScene(BLEND4D);
    doc.iteration.min_shape = {
      kind: "union",
      children: [
        { kind: "ball", radius: 0.4 },
        {
          kind: "blend",
          children: [
            { kind: "ball", radius: 0.5 },
            { kind: "cross_polytope", radius: 0.5 },
          ],
          t: 0.25,
        },
      ],
    };
    const found = blendNodes(doc);
    expect(found).toHaveLength(2);
    expect(found[0].path).toEqual(["iteration", "outer_shape"]);
    expect(found[1].path).toEqual(["iteration", "min_shape", "children", 1]);
    const node = getAtPath(doc, found[1].path) as ShapeDoc;
    expect(node.t).toBe(0.25);
  });

  it("descends through rotated wrappers", () => {
    const doc = cloneScene(CLASSIC2D);
    doc.iteration.outer_shape = {
      kind: "rotated",
      angles: [0.3],
      child: {
        kind: "blend",
        children: [
          { kind: "ball", radius: 1 },
          { kind: "box", half_side: 1 },
        ],
        t: 0.8,
      },
    };
    const found = blendNodes(doc);
    expect(found).toHaveLength(1);
    expect(found[0].path).toEqual(["iteration", "outer_shape", "child"]);
  });
});

describe("sceneView", () => {
  it("defaults 2D scenes to a centered 8-wide window", () => {
    const doc = cloneScene(CLASSIC2D);
    delete doc.view;
    expect(sceneView(doc)).toEqual({ kind: "window2d", center: [0, 0], width: 8.0, rotation: 0.0 });
  });

  it("refuses to invent a view beyond 2D", () => {
    const doc = cloneScene(BLEND4D);
    delete doc.view;
    expect(() => sceneView(doc)).toThrow(/no default/);
  });
});

describe("validateSceneClient", () => {
  it("accepts the fixtures", () => {
    expect(validateSceneClient(CLASSIC2D)).toEqual([]);
    expect(validateSceneClient(BLEND4D)).toEqual([]);
  });

  const broken = (mutate: (doc: SceneDocument) => void): string[] => {
    const doc = cloneScene(CLASSIC2D);
    mutate(doc);
    return validateSceneClient(doc);
  };

  it("catches bad iteration numbers", () => {
    expect(broken((d) => (d.iteration.fold_halfwidth = 0))).toContainEqual(
      expect.stringContaining("fold_halfwidth"),
    );
    expect(broken((d) => (d.iteration.scale = 0))).toContainEqual(
      expect.stringContaining("scale"),
    );
    expect(broken((d) => (d.iteration.escape_distance = -1))).toContainEqual(
      expect.stringContaining("escape_distance"),
    );
    expect(broken((d) => (d.iteration.max_iterations = 0))).toContainEqual(
      expect.stringContaining("max_iterations"),
    );
  });

  it("catches bad shapes and dimension mismatches", () => {
    expect(broken((d) => (d.iteration.outer_shape = { kind: "ball", radius: -1 }))).toContainEqual(
      expect.stringContaining("radius"),
    );
    expect(broken((d) => (d.iteration.min_shape = { kind: "wedge" }))).toContainEqual(
      expect.stringContaining("unknown shape kind"),
    );
    expect(
      broken((d) => {
        d.dimension = 3;
        d.view = {
          kind: "camera3d",
          eye: [8, 8, 8],
          look_at: [0, 0, 0],
          up: [0, 0, 1],
          vertical_fov: 1,
        };
        d.renderer = "raymarch";
        d.iteration.min_shape = { kind: "hexagon", circumradius: 0.5 };
      }),
    ).toContainEqual(expect.stringContaining("hexagon is 2D only"));
  });

  it("catches blend t outside [0, 1]", () => {
    expect(
      broken((d) => {
        d.iteration.outer_shape = {
          kind: "blend",
          children: [
            { kind: "ball", radius: 1 },
            { kind: "box", half_side: 1 },
          ],
          t: 1.5,
        };
      }),
    ).toContainEqual(expect.stringContaining("blend t"));
  });

  it("enforces the renderer/view pairing", () => {
    expect(broken((d) => (d.renderer = "raymarch"))).toContainEqual(
      expect.stringContaining("requires a camera3d view"),
    );
    const doc = cloneScene(CLASSIC2D);
    doc.dimension = 3;
    doc.view = { kind: "camera3d", eye: [8, 8, 8], look_at: [0, 0, 0], up: [0, 0, 1], vertical_fov: 1 };
    doc.renderer = "sampled";
    expect(validateSceneClient(doc)).toContainEqual(
      expect.stringContaining("requires the raymarch renderer"),
    );
  });

  it("catches bad image sizes and tile sizes", () => {
    expect(broken((d) => (d.image = { width: 0, height: 64 }))).toContainEqual(
      expect.stringContaining("image size"),
    );
    expect(broken((d) => (d.tile_size = 0))).toContainEqual(
      expect.stringContaining("tile_size"),
    );
    expect(broken((d) => (d.threads = 0))).toContainEqual(expect.stringContaining("threads"));
  });

  it("rejects unsupported dimensions outright", () => {
    expect(broken((d) => (d.dimension = 5))).toEqual([
      "dimension must be 2, 3 or 4, got 5",
    ]);
  });
});
