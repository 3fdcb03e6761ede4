// Probe panel model: turns a probe record into table rows and checks the
// displayed arithmetic (each update row must equal shapefold * scale +
// offset, the same composition the iterator applies).

import type { ProbeRecord, ProbeStage } from "./api.js";

export interface ProbeRow {
  iteration: number;
  boxfold: number[];
  shapefold: number[];
  update: number[];
  magnitude: number;
  escaped: boolean;
}

export function probeRows(record: ProbeRecord): ProbeRow[] {
  return record.stages.map((s: ProbeStage) => ({
    iteration: s.iteration,
    boxfold: s.boxfold,
    shapefold: s.shapefold,
    update: s.update,
    magnitude: s.magnitude,
    escaped: s.escaped,
  }));
}

/**
 * Per-stage |update - (shapefold * scale + offset)|, max over components.
 * Zero for honest service output; anything else means the table would
 * display an inconsistent chain.
 */
export function stageResiduals(record: ProbeRecord): number[] {
  return record.stages.map((s) =>
    Math.max(
      ...s.update.map((u, k) => Math.abs(u - (s.shapefold[k] * record.scale + record.offset[k]))),
    ),
  );
}

const fmt = (x: number) => {
  const s = x.toPrecision(6);
  return s.includes("e") ? s : String(parseFloat(s));
};

const vec = (v: number[]) => `(${v.map(fmt).join(", ")})`;

/** Build the stage table DOM. */
export function renderProbePanel(record: ProbeRecord): HTMLElement {
  const root = document.createElement("div");
  root.className = "probe-result";

  const head = document.createElement("div");
  head.className = "probe-head";
  const r = record.result;
  head.textContent =
    `seed ${vec(record.point)} — ` +
    (r.escaped ? `escaped at iteration ${r.escape_iteration}` : `held for ${r.escape_iteration}`) +
    ` · trap ${fmt(r.trap_origin)} · final |p| ${fmt(r.final_magnitude)}`;
  root.appendChild(head);

  const table = document.createElement("table");
  const header = document.createElement("tr");
  for (const title of ["it", "boxfold", "shapefold", "scale+offset", "|p|"]) {
    const th = document.createElement("th");
    th.textContent = title;
    header.appendChild(th);
  }
  table.appendChild(header);

  for (const row of probeRows(record)) {
    const tr = document.createElement("tr");
    if (row.escaped) tr.className = "escaped";
    for (const cell of [
      String(row.iteration),
      vec(row.boxfold),
      vec(row.shapefold),
      vec(row.update),
      fmt(row.magnitude),
    ]) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  root.appendChild(table);

  const residual = Math.max(0, ...stageResiduals(record));
  if (residual > 1e-9) {
    const warn = document.createElement("div");
    warn.className = "probe-warning";
    warn.textContent = `stage chain inconsistent by ${residual.toExponential(2)}`;
    root.appendChild(warn);
  }
  return root;
}
