import type {
  AnalyzeRequest,
  AnalyzeResponse,
  ApiError,
  SamplesizeResponse,
} from "./types.js";

// Error bodies are {error, message}; 422 means the prior cannot digest the
// matrix (improper posterior), which gets a remediation hint in the UI.
async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  } catch (err) {
    throw <ApiError>{
      status: 0,
      code: "NetworkError",
      message: `cannot reach the analysis service (${String(err)})`,
    };
  }
  if (!response.ok) {
    let code = "HttpError";
    let message = `${response.status} ${response.statusText}`;
    try {
      const doc = await response.json();
      if (doc && typeof doc.error === "string") {
        code = doc.error;
        message = doc.message ?? message;
      }
    } catch {
      // non-JSON error body: keep the status line
    }
    const hint =
      response.status === 422 && code === "ImproperPosterior"
        ? "choose a Laplace or Jeffreys prior; a zero-pseudo-count prior cannot digest a zero count"
        : undefined;
    throw <ApiError>{ status: response.status, code, message, hint };
  }
  return (await response.json()) as T;
}

export function analyze(base: string, request: AnalyzeRequest): Promise<AnalyzeResponse> {
  return post<AnalyzeResponse>(base, "/api/analyze", request);
}

export function samplesizeCurve(
  base: string,
  targetMu: number,
  candidateNs: number[],
): Promise<SamplesizeResponse> {
  return post<SamplesizeResponse>(base, "/api/samplesize", {
    target_mu: targetMu,
    simulate: true,
    candidate_ns: candidateNs,
    sims_per_n: 400,
    seed: 1,
    full_curve: true,
  });
}
