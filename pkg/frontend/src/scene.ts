// Scene document model: plain JSON mirroring the render service's schema.
// The editor holds documents verbatim so an untouched preset round-trips
// byte-for-byte; edits always go through a clone.

export type Vec2 = [number, number];

export interface ShapeDoc {
  kind: string;
  [field: string]: unknown;
}

export interface IterationDoc {
  fold_halfwidth: number;
  outer_shape: ShapeDoc;
  min_shape: ShapeDoc;
  scale: number;
  scale_mode: "ratio" | { constant: number };
  offset_mode: "mandelbox" | { julibox: number[] };
  escape_distance: number;
  max_iterations: number;
}

export interface Window2DDoc {
  kind: "window2d";
  center: Vec2;
  width: number;
  rotation?: number;
}

export interface SliceFrameDoc {
  kind: "sliceframe";
  origin: number[];
  basis_u: number[];
  basis_v: number[];
  width: number;
}

export interface Camera3DDoc {
  kind: "camera3d";
  eye: number[];
  look_at: number[];
  up: number[];
  vertical_fov: number;
  w_slice?: number;
}

export type ViewDoc = Window2DDoc | SliceFrameDoc | Camera3DDoc;

export interface SceneDocument {
  schema_version: number;
  dimension: number;
  iteration: IterationDoc;
  view?: ViewDoc;
  image?: { width: number; height: number };
  palette?: Record<string, unknown>;
  renderer?: "sampled" | "raymarch";
  tuning?: Record<string, unknown>;
  threads?: "auto" | number;
  tile_size?: number;
  [field: string]: unknown;
}

export function cloneScene<T>(doc: T): T {
  return structuredClone(doc);
}

export function imageSize(doc: SceneDocument): { width: number; height: number } {
  return doc.image ? { ...doc.image } : { width: 256, height: 256 };
}

/** The effective view: 2D scenes default to a centered 8-wide window. */
export function sceneView(doc: SceneDocument): ViewDoc {
  if (doc.view) return doc.view;
  if (doc.dimension === 2) {
    return { kind: "window2d", center: [0, 0], width: 8.0, rotation: 0.0 };
  }
  throw new Error("scene has no view and no default applies beyond 2D");
}

export interface BlendRef {
  /** e.g. ["iteration", "outer_shape", "children", 1] */
  path: (string | number)[];
  label: string;
  t: number;
}

/** Every blend node in the two shape trees, outer first, depth-first. */
export function blendNodes(doc: SceneDocument): BlendRef[] {
  const found: BlendRef[] = [];
  const walk = (node: unknown, path: (string | number)[], label: string) => {
    if (typeof node !== "object" || node === null) return;
    const shape = node as ShapeDoc;
    if (shape.kind === "blend" && typeof shape.t === "number") {
      found.push({ path, label, t: shape.t });
    }
    const children = (shape as { children?: unknown[] }).children;
    if (Array.isArray(children)) {
      children.forEach((child, i) =>
        walk(child, [...path, "children", i], `${label}.children[${i}]`),
      );
    }
    const child = (shape as { child?: unknown }).child;
    if (child !== undefined) walk(child, [...path, "child"], `${label}.child`);
  };
  walk(doc.iteration.outer_shape, ["iteration", "outer_shape"], "outer");
  walk(doc.iteration.min_shape, ["iteration", "min_shape"], "min");
  return found;
}

export function getAtPath(doc: SceneDocument, path: (string | number)[]): unknown {
  let node: unknown = doc;
  for (const step of path) {
    if (typeof node !== "object" || node === null) return undefined;
    node = (node as Record<string | number, unknown>)[step];
  }
  return node;
}

export function setAtPath(
  doc: SceneDocument,
  path: (string | number)[],
  field: string,
  value: unknown,
): void {
  const node = getAtPath(doc, path);
  if (typeof node !== "object" || node === null) {
    throw new Error(`no node at path ${path.join(".")}`);
  }
  (node as Record<string, unknown>)[field] = value;
}

const SHAPE_KINDS = new Set([
  "ball",
  "box",
  "cross_polytope",
  "hexagon",
  "fg_squircle",
  "superellipsoid",
  "union",
  "intersection",
  "blend",
  "rotated",
]);

function checkShape(shape: unknown, where: string, dimension: number, out: string[]): void {
  if (typeof shape !== "object" || shape === null || Array.isArray(shape)) {
    out.push(`${where}: expected a shape object`);
    return;
  }
  const s = shape as ShapeDoc;
  if (typeof s.kind !== "string" || !SHAPE_KINDS.has(s.kind)) {
    out.push(`${where}: unknown shape kind ${JSON.stringify(s.kind)}`);
    return;
  }
  const positive = (field: string) => {
    const v = s[field];
    if (typeof v !== "number" || !Number.isFinite(v) || v <= 0) {
      out.push(`${where}: ${field} must be a positive number`);
    }
  };
  switch (s.kind) {
    case "ball":
      positive("radius");
      break;
    case "box":
      positive("half_side");
      break;
    case "cross_polytope":
      positive("radius");
      break;
    case "hexagon":
      positive("circumradius");
      break;
    case "fg_squircle": {
      positive("radius");
      const q = s.squareness;
      if (typeof q !== "number" || q < 0 || q > 1) {
        out.push(`${where}: squareness must lie in [0, 1]`);
      }
      break;
    }
    case "superellipsoid": {
      positive("exponent");
      const semi = s.semi_axes;
      if (!Array.isArray(semi) || semi.length !== dimension) {
        out.push(`${where}: semi_axes must have ${dimension} components`);
      }
      break;
    }
    case "union":
    case "intersection":
    case "blend": {
      const children = s.children;
      if (!Array.isArray(children) || children.length !== 2) {
        out.push(`${where}: needs exactly 2 children`);
      } else {
        children.forEach((c, i) => checkShape(c, `${where}.children[${i}]`, dimension, out));
      }
      if (s.kind === "blend") {
        const t = s.t;
        if (typeof t !== "number" || t < 0 || t > 1) {
          out.push(`${where}: blend t must lie in [0, 1]`);
        }
      }
      break;
    }
    case "rotated":
      checkShape(s.child, `${where}.child`, dimension, out);
      break;
  }
  if (s.kind === "hexagon" && dimension !== 2) {
    out.push(`${where}: hexagon is 2D only`);
  }
  if (s.kind === "fg_squircle" && dimension !== 2) {
    out.push(`${where}: fg_squircle is 2D only`);
  }
  if (s.kind === "superellipsoid" && dimension !== 3) {
    out.push(`${where}: superellipsoid is 3D only`);
  }
}

/**
 * Client-side range check run before any render request.  Mirrors the
 * service's fatal validations; the service remains the authority, this just
 * keeps obviously-bad documents from being posted while typing.
 */
export function validateSceneClient(doc: SceneDocument): string[] {
  const out: string[] = [];
  if (![2, 3, 4].includes(doc.dimension)) {
    out.push(`dimension must be 2, 3 or 4, got ${doc.dimension}`);
    return out;
  }
  const it = doc.iteration;
  const finitePositive = (v: unknown) =>
    typeof v === "number" && Number.isFinite(v) && v > 0;
  if (!finitePositive(it.fold_halfwidth)) out.push("fold_halfwidth must be positive");
  if (typeof it.scale !== "number" || !Number.isFinite(it.scale) || it.scale === 0) {
    out.push("scale must be nonzero and finite");
  }
  if (typeof it.scale_mode === "object" && !finitePositive(it.scale_mode.constant)) {
    out.push("constant scale mode needs a positive constant");
  }
  if (!finitePositive(it.escape_distance)) out.push("escape_distance must be positive");
  if (!Number.isInteger(it.max_iterations) || it.max_iterations < 1) {
    out.push("max_iterations must be at least 1");
  }
  if (typeof it.offset_mode === "object") {
    const j = it.offset_mode.julibox;
    if (!Array.isArray(j) || j.length !== doc.dimension || !j.every(Number.isFinite)) {
      out.push(`julibox offset must be a finite ${doc.dimension}-vector`);
    }
  }
  checkShape(it.outer_shape, "outer_shape", doc.dimension, out);
  checkShape(it.min_shape, "min_shape", doc.dimension, out);

  const view = doc.view;
  if (!view && doc.dimension !== 2) out.push("scenes beyond 2D need an explicit view");
  if (view) {
    if (view.kind === "window2d" || view.kind === "sliceframe") {
      if (!finitePositive(view.width)) out.push("view width must be positive");
    }
    if (view.kind === "camera3d") {
      if (
        typeof view.vertical_fov !== "number" ||
        view.vertical_fov <= 0 ||
        view.vertical_fov >= Math.PI
      ) {
        out.push("vertical_fov must lie in (0, pi)");
      }
      if (doc.renderer === "sampled") out.push("a camera3d view requires the raymarch renderer");
    } else if (doc.renderer === "raymarch") {
      out.push("the raymarch renderer requires a camera3d view");
    }
  }
  if (doc.image) {
    const { width, height } = doc.image;
    if (!Number.isInteger(width) || width < 1 || !Number.isInteger(height) || height < 1) {
      out.push("image size must be positive integers");
    }
  }
  if (doc.tile_size !== undefined && (!Number.isInteger(doc.tile_size) || doc.tile_size < 1)) {
    out.push("tile_size must be >= 1");
  }
  if (doc.threads !== undefined && doc.threads !== "auto") {
    if (!Number.isInteger(doc.threads) || doc.threads < 1) {
      out.push('threads must be "auto" or >= 1');
    }
  }
  return out;
}
