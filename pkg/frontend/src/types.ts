// Shapes of the service's JSON responses. The UI treats the rendered strings
// as authoritative; raw floats are only used for drawing, never reformatted
// into display numbers.

export interface CmCounts {
  tp: number;
  fn: number;
  fp: number;
  tn: number;
}

export interface RenderedMetric {
  point: string | null;
  mean: string;
  median: string;
  mode: string;
  hpd: string;
  mu_pp: string;
}

export interface MetricReport {
  metric: string;
  point: number | null;
  mean: number;
  median: number;
  mode: number;
  hpd_low: number;
  hpd_high: number;
  mu: number;
  n_invalid: number;
  multimodal: boolean;
  rendered: RenderedMetric;
}

export interface HistogramSeries {
  metric: string;
  bin_edges: number[];
  densities: number[];
  hpd_low: number;
  hpd_high: number;
}

export interface AnalyzeResponse {
  cm: CmCounts & { n: number };
  priors: Record<string, { kind: string; alpha: number; beta: number }>;
  prevalence: { mode: string; value?: number; alpha?: number; beta?: number };
  model: string;
  samples: number;
  seed: number;
  credibility: number;
  metrics: Record<string, MetricReport>;
  skipped_metrics: Record<string, string>;
  bm_assessment: { r_inf: number | null; r_dec: number | null };
  convergence: { rc: Record<string, number>; passed: boolean };
  histograms: HistogramSeries[];
}

export interface AnalyzeRequest {
  cm: CmCounts;
  prior?: string;
  prior_prev?: string;
  prior_tpr?: string;
  prior_tnr?: string;
  prev_fixed?: number;
  prev_counts?: [number, number];
  metrics?: string[];
  samples?: number;
  seed?: number;
  histogram_bins?: number;
}

export interface SamplesizeResponse {
  target_mu: number;
  closed_form_n: number;
  result_n?: number | null;
  curve?: [number, number][];
  seed?: number;
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
  hint?: string;
}
