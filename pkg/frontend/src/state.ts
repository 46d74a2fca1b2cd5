// Client-side form state and the submit gate: the analyze button stays
// disabled until the four cells are non-negative integers with n >= 1.

export interface CellInputs {
  tp: string;
  fn: string;
  fp: string;
  tn: string;
}

export interface PriorSelections {
  all: string;
  prev?: string;
  tpr?: string;
  tnr?: string;
}

export type PrevalenceChoice =
  | { mode: "inferred" }
  | { mode: "fixed"; value: number }
  | { mode: "external"; alpha: number; beta: number };

export interface UiState {
  cells: CellInputs;
  priors: PriorSelections;
  prevalence: PrevalenceChoice;
  metrics: string[];
  targetMu: number;
}

export const initialState: UiState = {
  cells: { tp: "", fn: "", fp: "", tn: "" },
  priors: { all: "laplace" },
  prevalence: { mode: "inferred" },
  metrics: [],
  targetMu: 0.2,
};

function parsedCell(text: string): number | null {
  const trimmed = text.trim();
  if (!/^\d+$/.test(trimmed)) return null;
  const value = Number(trimmed);
  return Number.isSafeInteger(value) && value >= 0 ? value : null;
}

export function parseCells(cells: CellInputs): { tp: number; fn: number; fp: number; tn: number } | null {
  const tp = parsedCell(cells.tp);
  const fn = parsedCell(cells.fn);
  const fp = parsedCell(cells.fp);
  const tn = parsedCell(cells.tn);
  if (tp === null || fn === null || fp === null || tn === null) return null;
  if (tp + fn + fp + tn < 1) return null;
  return { tp, fn, fp, tn };
}

export function canSubmit(state: UiState): boolean {
  if (parseCells(state.cells) === null) return false;
  if (state.prevalence.mode === "fixed") {
    const v = state.prevalence.value;
    if (!(v >= 0 && v <= 1)) return false;
  }
  if (state.prevalence.mode === "external") {
    if (!(state.prevalence.alpha > 0 && state.prevalence.beta > 0)) return false;
  }
  return true;
}

// One in-flight request per panel: responses carrying a stale ticket are
// dropped so a slow older reply can never overwrite a newer one.
export class RequestSequencer {
  private latest = 0;

  next(): number {
    this.latest += 1;
    return this.latest;
  }

  isStale(ticket: number): boolean {
    return ticket !== this.latest;
  }
}
