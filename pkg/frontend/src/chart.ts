import type { HistogramSeries } from "./types.js";

// Density curve with a shaded credible band, as a standalone SVG string.
// Precomputed histogram series come from the service; no client-side
// density estimation happens here.

export interface ChartGeometry {
  width: number;
  height: number;
  pad: number;
}

export const DEFAULT_GEOMETRY: ChartGeometry = { width: 360, height: 120, pad: 8 };

interface Scale {
  x(value: number): number;
  y(density: number): number;
}

function scaleFor(series: HistogramSeries, geo: ChartGeometry): Scale {
  const xMin = series.bin_edges[0];
  const xMax = series.bin_edges[series.bin_edges.length - 1];
  const span = xMax - xMin || 1;
  const yMax = Math.max(...series.densities, 1e-12);
  return {
    x: (v) => geo.pad + ((v - xMin) / span) * (geo.width - 2 * geo.pad),
    y: (d) => geo.height - geo.pad - (d / yMax) * (geo.height - 2 * geo.pad),
  };
}

export function densityPath(series: HistogramSeries, geo = DEFAULT_GEOMETRY): string {
  const { x, y } = scaleFor(series, geo);
  const baseline = y(0);
  const parts: string[] = [`M ${x(series.bin_edges[0]).toFixed(2)} ${baseline.toFixed(2)}`];
  series.densities.forEach((d, i) => {
    const top = y(d).toFixed(2);
    parts.push(`L ${x(series.bin_edges[i]).toFixed(2)} ${top}`);
    parts.push(`L ${x(series.bin_edges[i + 1]).toFixed(2)} ${top}`);
  });
  parts.push(`L ${x(series.bin_edges[series.bin_edges.length - 1]).toFixed(2)} ${baseline.toFixed(2)}`);
  parts.push("Z");
  return parts.join(" ");
}

export function hpdBand(
  series: HistogramSeries,
  geo = DEFAULT_GEOMETRY,
): { x: number; width: number } {
  const { x } = scaleFor(series, geo);
  const left = x(series.hpd_low);
  return { x: left, width: Math.max(x(series.hpd_high) - left, 1) };
}

export function chartSvg(
  series: HistogramSeries,
  muAnnotation: string,
  geo = DEFAULT_GEOMETRY,
): string {
  const band = hpdBand(series, geo);
  const path = densityPath(series, geo);
  return [
    `<svg viewBox="0 0 ${geo.width} ${geo.height}" class="density" role="img" aria-label="${series.metric} posterior density">`,
    `<rect x="${band.x.toFixed(2)}" y="${geo.pad}" width="${band.width.toFixed(2)}" height="${geo.height - 2 * geo.pad}" class="hpd-band"/>`,
    `<path d="${path}" class="density-curve"/>`,
    `<text x="${geo.width - geo.pad}" y="${geo.pad + 10}" text-anchor="end" class="mu-label">MU ${muAnnotation} pp</text>`,
    `</svg>`,
  ].join("");
}
