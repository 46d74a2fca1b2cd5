import type { AnalyzeResponse, HistogramSeries, MetricReport } from "./types.js";
import { formatProbability } from "./format.js";

// View model for one posterior panel. Display strings are taken verbatim
// from the report's rendered fields (which already obey the uncertainty
// digit rule); the UI never reformats the raw floats.

export interface MetricPanel {
  metric: string;
  label: string;
  point: string;
  mean: string;
  median: string;
  hpd: string;
  muPp: string;
  multimodal: boolean;
  histogram?: HistogramSeries;
}

export interface PanelSet {
  panels: MetricPanel[];
  deceptiveness: string;
  informativeness: string;
  convergence: string;
  seed: number;
  skipped: { metric: string; reason: string }[];
}

const LABELS: Record<string, string> = {
  prev: "prevalence",
  acc: "accuracy",
  tpr: "true positive rate",
  tnr: "true negative rate",
  ppv: "precision (PPV)",
  npv: "NPV",
  f1: "F1",
  mcc: "MCC",
  bm: "informedness",
  mk: "markedness",
  bacc: "balanced accuracy",
};

function panelFor(report: MetricReport, histogram?: HistogramSeries): MetricPanel {
  return {
    metric: report.metric,
    label: LABELS[report.metric] ?? report.metric,
    point: report.rendered.point ?? "n/a",
    mean: report.rendered.mean,
    median: report.rendered.median,
    hpd: report.rendered.hpd,
    muPp: report.rendered.mu_pp,
    multimodal: report.multimodal,
    histogram,
  };
}

export function buildPanels(response: AnalyzeResponse): PanelSet {
  const byMetric = new Map(response.histograms.map((h) => [h.metric, h]));
  const panels = Object.values(response.metrics).map((m) =>
    panelFor(m, byMetric.get(m.metric)),
  );
  const { r_dec, r_inf } = response.bm_assessment;
  return {
    panels,
    deceptiveness: r_dec === null ? "n/a" : formatProbability(r_dec),
    informativeness: r_inf === null ? "n/a" : formatProbability(r_inf),
    convergence: response.convergence.passed
      ? "sampling converged"
      : "sampling NOT converged",
    seed: response.seed,
    skipped: Object.entries(response.skipped_metrics).map(([metric, reason]) => ({
      metric,
      reason,
    })),
  };
}
