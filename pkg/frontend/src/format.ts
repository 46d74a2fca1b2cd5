// The one piece of arithmetic the client is allowed to do: inverting the
// worst-case uncertainty bound MU <= 2/sqrt(N) for the instant slider
// readout. Everything else is displayed from server-rendered strings.

export function requiredSampleSize(targetMu: number): number {
  if (!(targetMu > 0 && targetMu < 1)) {
    throw new RangeError("target MU must be in (0, 1)");
  }
  return Math.ceil(4 / (targetMu * targetMu) - 1e-9);
}

export function formatCount(n: number): string {
  return n.toLocaleString("en-US");
}

// Probabilities that the service reports as raw numbers (deceptiveness risk)
// are shown with a fixed rule so parity is checkable byte for byte.
export function formatProbability(p: number): string {
  return p.toFixed(4);
}

export function formatPercent(p: number): string {
  return `${(100 * p).toFixed(1)}%`;
}
