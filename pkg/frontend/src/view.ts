// View math.  pixelToWorld mirrors the service's convention exactly: pixel
// (i, j) is sampled at its center (i + 0.5, j + 0.5), (W/2, H/2) lands on the
// view center, row 0 is the top, and the horizontal extent spans the
// configured world width.  Probe clicks depend on this agreeing with the
// server to within 1e-6, so keep the arithmetic order identical.

import type { Camera3DDoc, SliceFrameDoc, ViewDoc, Window2DDoc } from "./scene.js";

export function fracUV(
  px: number,
  py: number,
  imgW: number,
  imgH: number,
): [number, number] {
  return [px / imgW - 0.5, 0.5 - py / imgH];
}

/** Continuous pixel coordinates to a world point (window2d / sliceframe only). */
export function pixelToWorld(
  view: ViewDoc,
  imgW: number,
  imgH: number,
  px: number,
  py: number,
): number[] {
  if (view.kind === "camera3d") {
    throw new Error("pixelToWorld applies to window2d/sliceframe views only");
  }
  const [u, v] = fracUV(px, py, imgW, imgH);
  const width = view.width;
  const heightWorld = (width * imgH) / imgW;
  const du = u * width;
  const dv = v * heightWorld;
  if (view.kind === "window2d") {
    const rot = view.rotation ?? 0.0;
    const c = Math.cos(rot);
    const s = Math.sin(rot);
    return [view.center[0] + c * du - s * dv, view.center[1] + s * du + c * dv];
  }
  return view.origin.map((o, k) => o + du * view.basis_u[k] + dv * view.basis_v[k]);
}

/** World-space displacement corresponding to a pixel displacement. */
export function worldDelta(
  view: Window2DDoc | SliceFrameDoc,
  imgW: number,
  imgH: number,
  dpx: number,
  dpy: number,
): number[] {
  const a = pixelToWorld(view, imgW, imgH, imgW / 2, imgH / 2);
  const b = pixelToWorld(view, imgW, imgH, imgW / 2 + dpx, imgH / 2 + dpy);
  return b.map((bv, k) => bv - a[k]);
}

/**
 * Drag gesture: the world point under the pointer should follow the pointer,
 * so the view center moves opposite to the pixel delta.
 */
export function panView(
  view: Window2DDoc | SliceFrameDoc,
  imgW: number,
  imgH: number,
  dpx: number,
  dpy: number,
): Window2DDoc | SliceFrameDoc {
  const delta = worldDelta(view, imgW, imgH, dpx, dpy);
  if (view.kind === "window2d") {
    return {
      ...view,
      center: [view.center[0] - delta[0], view.center[1] - delta[1]],
    };
  }
  return { ...view, origin: view.origin.map((o, k) => o - delta[k]) };
}

/**
 * Zoom by `factor` (2 = twice as close, halving the world width).  When an
 * anchor pixel is given, the world point under it stays put — the center
 * slides toward the anchor by (1 - 1/factor) of their separation, which
 * holds for any rotation or slice basis.
 */
export function zoomView(
  view: Window2DDoc | SliceFrameDoc,
  factor: number,
  imgW?: number,
  imgH?: number,
  anchorPx?: number,
  anchorPy?: number,
): Window2DDoc | SliceFrameDoc {
  if (!(factor > 0)) throw new Error(`zoom factor must be positive, got ${factor}`);
  const zoomed: Window2DDoc | SliceFrameDoc = { ...view, width: view.width / factor };
  if (anchorPx === undefined || imgW === undefined || imgH === undefined) {
    return zoomed;
  }
  const anchor = pixelToWorld(view, imgW, imgH, anchorPx, anchorPy ?? imgH / 2);
  const pull = 1 - 1 / factor;
  if (view.kind === "window2d") {
    const z = zoomed as Window2DDoc;
    z.center = [
      view.center[0] + pull * (anchor[0] - view.center[0]),
      view.center[1] + pull * (anchor[1] - view.center[1]),
    ];
    return z;
  }
  const z = zoomed as SliceFrameDoc;
  z.origin = view.origin.map((o, k) => o + pull * (anchor[k] - o));
  return z;
}

// --- camera orbiting ------------------------------------------------------

function sub(a: number[], b: number[]): number[] {
  return a.map((v, i) => v - b[i]);
}

function add(a: number[], b: number[]): number[] {
  return a.map((v, i) => v + b[i]);
}

function scale(a: number[], s: number): number[] {
  return a.map((v) => v * s);
}

function dot(a: number[], b: number[]): number {
  return a.reduce((acc, v, i) => acc + v * b[i], 0);
}

export function norm(a: number[]): number {
  return Math.sqrt(dot(a, a));
}

function normalize(a: number[]): number[] {
  const n = norm(a);
  if (n < 1e-12) throw new Error("cannot normalize a zero vector");
  return scale(a, 1 / n);
}

function cross3(a: number[], b: number[]): number[] {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

/** Rodrigues rotation of `v` about unit axis `k` by `angle`. */
function rotateAbout(v: number[], k: number[], angle: number): number[] {
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  const kxv = cross3(k, v);
  const kdv = dot(k, v);
  return add(add(scale(v, c), scale(kxv, s)), scale(k, kdv * (1 - c)));
}

const POLE_MARGIN = 0.05; // radians kept between the eye ray and the up axis

/**
 * Orbit the eye about look_at: `dyaw` spins around the scene's up axis,
 * `dpitch` tilts toward/away from it, clamped so the eye never crosses the
 * pole (which would flip the frame).  Distance to look_at is preserved.
 */
export function orbitCamera(cam: Camera3DDoc, dyaw: number, dpitch: number): Camera3DDoc {
  const axis = normalize(cam.up);
  let offset = sub(cam.eye, cam.look_at);
  offset = rotateAbout(offset, axis, -dyaw);

  const r = norm(offset);
  const polar = Math.acos(Math.max(-1, Math.min(1, dot(offset, axis) / r)));
  const target = Math.max(POLE_MARGIN, Math.min(Math.PI - POLE_MARGIN, polar + dpitch));
  const right = cross3(axis, offset);
  const rightNorm = norm(right);
  if (rightNorm > 1e-9) {
    offset = rotateAbout(offset, scale(right, 1 / rightNorm), target - polar);
  }
  return { ...cam, eye: add(cam.look_at, offset) };
}

/** Move the eye along the view ray; factor 2 halves the distance to look_at. */
export function dollyCamera(cam: Camera3DDoc, factor: number): Camera3DDoc {
  if (!(factor > 0)) throw new Error(`dolly factor must be positive, got ${factor}`);
  const offset = scale(sub(cam.eye, cam.look_at), 1 / factor);
  return { ...cam, eye: add(cam.look_at, offset) };
}

// --- slider targets -------------------------------------------------------

export interface SliderTarget {
  /** Document path of the object holding the scrubbed number. */
  path: (string | number)[];
  field: string | number;
  value: number;
}

/**
 * Where the 4D w-slider writes, if anywhere: the 4th origin component of a
 * sliceframe, or a camera's w_slice.  Scenes below 4D have no w to scrub, so
 * the control is hidden (null).
 */
export function wSliderTarget(dimension: number, view: ViewDoc): SliderTarget | null {
  if (dimension !== 4) return null;
  if (view.kind === "sliceframe") {
    return { path: ["view", "origin"], field: 3, value: view.origin[3] };
  }
  if (view.kind === "camera3d") {
    return { path: ["view"], field: "w_slice", value: view.w_slice ?? 0.0 };
  }
  return null;
}
