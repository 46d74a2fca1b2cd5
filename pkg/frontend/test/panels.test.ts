// UI parity: every number the panels display must equal the corresponding
// field of the service response byte for byte. The fixture is a captured
// /api/analyze response for the (26, 0, 2, 6) example matrix.

import { describe, expect, it } from "vitest";

import { buildPanels } from "../src/panels.js";
import { formatCount, formatProbability, requiredSampleSize } from "../src/format.js";
import type { AnalyzeResponse } from "../src/types.js";
import fixture from "../fixtures/analyze_example.json";

const response = fixture.response as unknown as AnalyzeResponse;

describe("panel parity with the service response", () => {
  const set = buildPanels(response);

  it("covers every reported metric exactly once", () => {
    expect(set.panels.map((p) => p.metric).sort()).toEqual(
      Object.keys(response.metrics).sort(),
    );
  });

  it("displays the rendered strings verbatim", () => {
    for (const panel of set.panels) {
      const report = response.metrics[panel.metric];
      expect(panel.hpd).toBe(report.rendered.hpd);
      expect(panel.mean).toBe(report.rendered.mean);
      expect(panel.median).toBe(report.rendered.median);
      expect(panel.muPp).toBe(report.rendered.mu_pp);
      expect(panel.point).toBe(report.rendered.point ?? "n/a");
    }
  });

  it("shows the example interval endpoints", () => {
    const tpr = set.panels.find((p) => p.metric === "tpr");
    expect(tpr?.hpd).toBe("[0.89, 1.00]");
    const tnr = set.panels.find((p) => p.metric === "tnr");
    expect(tnr?.hpd).toBe(response.metrics.tnr.rendered.hpd);
  });

  it("derives deceptiveness text from the raw response field only", () => {
    expect(set.deceptiveness).toBe(formatProbability(response.bm_assessment.r_dec));
    expect(set.informativeness).toBe(formatProbability(response.bm_assessment.r_inf));
  });

  it("echoes the seed for exact replay", () => {
    expect(set.seed).toBe(response.seed);
  });

  it("attaches the matching histogram to each panel", () => {
    for (const panel of set.panels) {
      expect(panel.histogram?.metric).toBe(panel.metric);
    }
  });
});

describe("sample-size slider", () => {
  it("shows n = 100 at a 0.20 target", () => {
    expect(formatCount(requiredSampleSize(0.2))).toBe("100");
  });
});
