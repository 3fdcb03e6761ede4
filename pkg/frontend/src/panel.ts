// Parameter panel: presets, iteration numbers, shape trees, and the
// view-dependent sliders (blend t, 4D w).  The DOM layer is thin; the
// numbers it shows come from panelModel so tests can check the mapping
// without a browser.

import { blendNodes, getAtPath, type BlendRef, type SceneDocument, type ShapeDoc } from "./scene.js";
import { wSliderTarget, type SliderTarget } from "./view.js";
import type { PresetEntry } from "./api.js";

export interface PanelModel {
  dimension: number;
  foldHalfwidth: number;
  scale: number;
  scaleMode: "ratio" | "constant";
  scaleConstant: number | null;
  offsetMode: "mandelbox" | "julibox";
  juliaOffset: number[] | null;
  escapeDistance: number;
  maxIterations: number;
  renderer: string;
  imageWidth: number;
  imageHeight: number;
  outerShape: ShapeDoc;
  minShape: ShapeDoc;
  blends: BlendRef[];
  wSlider: SliderTarget | null;
}

/** Everything the panel displays, read straight off the document. */
export function panelModel(doc: SceneDocument): PanelModel {
  const it = doc.iteration;
  const image = doc.image ?? { width: 256, height: 256 };
  const view = doc.view ?? { kind: "window2d" as const, center: [0, 0] as [number, number], width: 8 };
  return {
    dimension: doc.dimension,
    foldHalfwidth: it.fold_halfwidth,
    scale: it.scale,
    scaleMode: typeof it.scale_mode === "object" ? "constant" : "ratio",
    scaleConstant: typeof it.scale_mode === "object" ? it.scale_mode.constant : null,
    offsetMode: typeof it.offset_mode === "object" ? "julibox" : "mandelbox",
    juliaOffset: typeof it.offset_mode === "object" ? [...it.offset_mode.julibox] : null,
    escapeDistance: it.escape_distance,
    maxIterations: it.max_iterations,
    renderer: doc.renderer ?? (view.kind === "camera3d" ? "raymarch" : "sampled"),
    imageWidth: image.width,
    imageHeight: image.height,
    outerShape: it.outer_shape,
    minShape: it.min_shape,
    blends: blendNodes(doc),
    wSlider: wSliderTarget(doc.dimension, view),
  };
}

export type SceneMutator = (doc: SceneDocument) => void;

const W_SLIDER_RANGE = 2.0;
const W_SLIDER_STEP = 0.01;
const BLEND_STEP = 0.01;

export class ControlPanel {
  onPresetChange: ((name: string) => void) | null = null;
  onEdit: ((mutate: SceneMutator) => void) | null = null;

  private root: HTMLElement;
  private presetSelect: HTMLSelectElement;
  private presetNote: HTMLElement;
  private fields = new Map<string, HTMLInputElement>();
  private sliderBox: HTMLElement;
  private shapeBoxes: { outer: HTMLTextAreaElement; min: HTMLTextAreaElement };
  private shapeNote: HTMLElement;

  constructor(container: HTMLElement) {
    this.root = container;
    this.root.classList.add("panel");

    const presetRow = document.createElement("div");
    presetRow.className = "row";
    this.presetSelect = document.createElement("select");
    this.presetSelect.addEventListener("change", () => {
      this.onPresetChange?.(this.presetSelect.value);
    });
    presetRow.appendChild(this.presetSelect);
    this.root.appendChild(presetRow);
    this.presetNote = document.createElement("div");
    this.presetNote.className = "note";
    this.root.appendChild(this.presetNote);

    this.addNumber("fold F", "fold_halfwidth", (doc, v) => {
      doc.iteration.fold_halfwidth = v;
    });
    this.addNumber("scale S", "scale", (doc, v) => {
      doc.iteration.scale = v;
    });
    this.addNumber("escape d", "escape_distance", (doc, v) => {
      doc.iteration.escape_distance = v;
    });
    this.addNumber("iterations", "max_iterations", (doc, v) => {
      doc.iteration.max_iterations = Math.max(1, Math.round(v));
    });
    this.addNumber("image w", "image_width", (doc, v) => {
      const size = doc.image ?? { width: 256, height: 256 };
      doc.image = { ...size, width: Math.max(1, Math.round(v)) };
    });
    this.addNumber("image h", "image_height", (doc, v) => {
      const size = doc.image ?? { width: 256, height: 256 };
      doc.image = { ...size, height: Math.max(1, Math.round(v)) };
    });

    this.sliderBox = document.createElement("div");
    this.root.appendChild(this.sliderBox);

    const shapes = document.createElement("div");
    shapes.className = "shapes";
    const mkBox = (label: string) => {
      const head = document.createElement("div");
      head.className = "note";
      head.textContent = label;
      shapes.appendChild(head);
      const area = document.createElement("textarea");
      area.rows = 5;
      area.spellcheck = false;
      shapes.appendChild(area);
      return area;
    };
    this.shapeBoxes = { outer: mkBox("outer shape"), min: mkBox("min shape") };
    const apply = document.createElement("button");
    apply.textContent = "apply shapes";
    apply.addEventListener("click", () => this.applyShapes());
    shapes.appendChild(apply);
    this.shapeNote = document.createElement("div");
    this.shapeNote.className = "note error";
    shapes.appendChild(this.shapeNote);
    this.root.appendChild(shapes);
  }

  setPresets(entries: PresetEntry[], selected: string): void {
    this.presetSelect.replaceChildren();
    for (const entry of entries) {
      const opt = document.createElement("option");
      opt.value = entry.name;
      opt.textContent = entry.name;
      opt.title = entry.description;
      this.presetSelect.appendChild(opt);
    }
    this.presetSelect.value = selected;
    this.presetNote.textContent =
      entries.find((e) => e.name === selected)?.description ?? "";
  }

  /** Push document values into every control. */
  refresh(doc: SceneDocument): void {
    const model = panelModel(doc);
    this.setField("fold_halfwidth", model.foldHalfwidth);
    this.setField("scale", model.scale);
    this.setField("escape_distance", model.escapeDistance);
    this.setField("max_iterations", model.maxIterations);
    this.setField("image_width", model.imageWidth);
    this.setField("image_height", model.imageHeight);
    this.shapeBoxes.outer.value = JSON.stringify(model.outerShape, null, 1);
    this.shapeBoxes.min.value = JSON.stringify(model.minShape, null, 1);
    this.shapeNote.textContent = "";
    this.rebuildSliders(model);
  }

  private addNumber(label: string, key: string, write: (doc: SceneDocument, v: number) => void): void {
    const row = document.createElement("label");
    row.className = "row";
    const span = document.createElement("span");
    span.textContent = label;
    row.appendChild(span);
    const input = document.createElement("input");
    input.type = "number";
    input.step = "any";
    input.addEventListener("change", () => {
      const v = parseFloat(input.value);
      if (Number.isFinite(v)) this.onEdit?.((doc) => write(doc, v));
    });
    row.appendChild(input);
    this.fields.set(key, input);
    this.root.appendChild(row);
  }

  private setField(key: string, value: number): void {
    const input = this.fields.get(key);
    if (input) input.value = String(value);
  }

  /** Blend-t sliders for whatever blend nodes exist, plus the 4D w-slider. */
  private rebuildSliders(model: PanelModel): void {
    this.sliderBox.replaceChildren();
    for (const blend of model.blends) {
      const path = blend.path;
      this.addSlider(`blend t (${blend.label})`, blend.t, 0, 1, BLEND_STEP, (doc, v) => {
        const node = getAtPath(doc, path) as ShapeDoc;
        node.t = v;
      });
    }
    const w = model.wSlider;
    if (w !== null) {
      this.addSlider("w slice", w.value, -W_SLIDER_RANGE, W_SLIDER_RANGE, W_SLIDER_STEP, (doc, v) => {
        const node = getAtPath(doc, w.path) as Record<string | number, unknown>;
        node[w.field] = v;
      });
    }
  }

  private addSlider(
    label: string,
    value: number,
    min: number,
    max: number,
    step: number,
    write: (doc: SceneDocument, v: number) => void,
  ): void {
    const row = document.createElement("label");
    row.className = "row slider";
    const span = document.createElement("span");
    span.textContent = `${label} = ${value.toFixed(2)}`;
    row.appendChild(span);
    const input = document.createElement("input");
    input.type = "range";
    input.min = String(min);
    input.max = String(max);
    input.step = String(step);
    input.value = String(value);
    input.addEventListener("input", () => {
      const v = parseFloat(input.value);
      span.textContent = `${label} = ${v.toFixed(2)}`;
      this.onEdit?.((doc) => write(doc, v));
    });
    row.appendChild(input);
    this.sliderBox.appendChild(row);
  }

  private applyShapes(): void {
    let outer: ShapeDoc;
    let min: ShapeDoc;
    try {
      outer = JSON.parse(this.shapeBoxes.outer.value) as ShapeDoc;
      min = JSON.parse(this.shapeBoxes.min.value) as ShapeDoc;
    } catch (exc) {
      this.shapeNote.textContent = `shape JSON: ${(exc as Error).message}`;
      return;
    }
    this.shapeNote.textContent = "";
    this.onEdit?.((doc) => {
      doc.iteration.outer_shape = outer;
      doc.iteration.min_shape = min;
    });
  }
}
