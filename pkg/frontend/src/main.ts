import { analyze, samplesizeCurve } from "./api.js";
import { chartSvg } from "./chart.js";
import { formatCount, requiredSampleSize } from "./format.js";
import { buildPanels } from "./panels.js";
import {
  RequestSequencer,
  UiState,
  canSubmit,
  initialState,
  parseCells,
} from "./state.js";
import type { AnalyzeRequest, ApiError } from "./types.js";

// API origin: same origin by default, overridable with ?api=http://host:port
const API_BASE = new URLSearchParams(location.search).get("api") ?? "";

const state: UiState = structuredClone(initialState);
const analyzeSeq = new RequestSequencer();
const curveSeq = new RequestSequencer();

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function readForm(): void {
  for (const cell of ["tp", "fn", "fp", "tn"] as const) {
    state.cells[cell] = $<HTMLInputElement>(`cell-${cell}`).value;
  }
  state.priors.all = $<HTMLSelectElement>("prior-all").value;
  for (const rate of ["prev", "tpr", "tnr"] as const) {
    const value = $<HTMLSelectElement>(`prior-${rate}`).value;
    state.priors[rate] = value === "same" ? undefined : value;
  }
  const mode = $<HTMLSelectElement>("prev-mode").value;
  if (mode === "fixed") {
    state.prevalence = {
      mode: "fixed",
      value: Number($<HTMLInputElement>("prev-fixed").value),
    };
  } else if (mode === "external") {
    state.prevalence = {
      mode: "external",
      alpha: Number($<HTMLInputElement>("prev-alpha").value),
      beta: Number($<HTMLInputElement>("prev-beta").value),
    };
  } else {
    state.prevalence = { mode: "inferred" };
  }
}

function refreshControls(): void {
  $<HTMLButtonElement>("analyze").disabled = !canSubmit(state);
  const mode = $<HTMLSelectElement>("prev-mode").value;
  $("prev-fixed-row").hidden = mode !== "fixed";
  $("prev-external-row").hidden = mode !== "external";
}

function requestBody(): AnalyzeRequest {
  const counts = parseCells(state.cells);
  if (!counts) throw new Error("form is not submittable");
  const body: AnalyzeRequest = { cm: counts, prior: state.priors.all };
  if (state.priors.prev) body.prior_prev = state.priors.prev;
  if (state.priors.tpr) body.prior_tpr = state.priors.tpr;
  if (state.priors.tnr) body.prior_tnr = state.priors.tnr;
  if (state.prevalence.mode === "fixed") body.prev_fixed = state.prevalence.value;
  if (state.prevalence.mode === "external") {
    body.prev_counts = [state.prevalence.alpha, state.prevalence.beta];
  }
  return body;
}

function showError(err: ApiError): void {
  const box = $("error-box");
  box.hidden = false;
  box.textContent = err.hint
    ? `${err.code}: ${err.message} (${err.hint})`
    : `${err.code}: ${err.message}`;
}

async function runAnalysis(): Promise<void> {
  readForm();
  if (!canSubmit(state)) return;
  const ticket = analyzeSeq.next();
  $("error-box").hidden = true;
  $("panels").setAttribute("aria-busy", "true");
  try {
    const response = await analyze(API_BASE, requestBody());
    if (analyzeSeq.isStale(ticket)) return;
    const set = buildPanels(response);
    const cards = set.panels.map((panel) => {
      const chart = panel.histogram ? chartSvg(panel.histogram, panel.muPp) : "";
      const flag = panel.multimodal ? " <em>(multimodal?)</em>" : "";
      return `<section class="panel"><h3>${panel.label}</h3>${chart}
        <p>point ${panel.point} &middot; mean ${panel.mean} &middot; median ${panel.median}</p>
        <p>95% HPD ${panel.hpd} &middot; MU ${panel.muPp} pp${flag}</p></section>`;
    });
    const skipped = set.skipped.map(
      (s) => `<p class="skipped">${s.metric}: ${s.reason}</p>`,
    );
    $("panels").innerHTML = cards.join("") + skipped.join("");
    $("bm-line").textContent =
      `P(deceptive) = ${set.deceptiveness} · P(informative) = ${set.informativeness}`;
    $("run-line").textContent = `${set.convergence} · seed ${set.seed}`;
  } catch (err) {
    if (!analyzeSeq.isStale(ticket)) showError(err as ApiError);
  } finally {
    $("panels").setAttribute("aria-busy", "false");
  }
}

function refreshSlider(): void {
  const slider = $<HTMLInputElement>("mu-slider");
  state.targetMu = Number(slider.value);
  $("mu-readout").textContent = state.targetMu.toFixed(3);
  $("n-readout").textContent = formatCount(requiredSampleSize(state.targetMu));
}

async function runCurve(): Promise<void> {
  const ticket = curveSeq.next();
  const target = state.targetMu;
  $("curve-box").textContent = "simulating…";
  try {
    const doc = await samplesizeCurve(API_BASE, target, [30, 100, 300, 1000, 3000, 10000]);
    if (curveSeq.isStale(ticket)) return;
    const rows = (doc.curve ?? [])
      .map(([n, mu]) => `<tr><td>${formatCount(n)}</td><td>${mu.toFixed(4)}</td></tr>`)
      .join("");
    const verdict =
      doc.result_n != null
        ? `smallest sufficient n: ${formatCount(doc.result_n)}`
        : "target not reached on this grid";
    $("curve-box").innerHTML =
      `<table><tr><th>n</th><th>achieved MU</th></tr>${rows}</table><p>${verdict}</p>`;
  } catch (err) {
    if (!curveSeq.isStale(ticket)) {
      $("curve-box").textContent = `${(err as ApiError).code}: ${(err as ApiError).message}`;
    }
  }
}

function wire(): void {
  document.querySelectorAll("input, select").forEach((el) => {
    el.addEventListener("input", () => {
      readForm();
      refreshControls();
    });
  });
  $<HTMLButtonElement>("analyze").addEventListener("click", () => void runAnalysis());
  $<HTMLInputElement>("mu-slider").addEventListener("input", refreshSlider);
  $<HTMLButtonElement>("simulate").addEventListener("click", () => void runCurve());
  refreshControls();
  refreshSlider();
}

wire();
