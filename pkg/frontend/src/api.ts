// Typed client over the analysis service endpoints.

import type {
  AnalysisRequest,
  AnalysisResponse,
  ResultDocument,
  ScatterRecord,
  Schema,
  ServiceConfig,
  UploadResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public kind: string,
    message: string,
  ) {
    super(message);
  }
}

export function resultUrl(base: string, analysisId: string, pair?: [string, string]): string {
  const suffix = pair ? `?pair=${encodeURIComponent(`${pair[0]},${pair[1]}`)}` : "";
  return `${base}/analyses/${analysisId}/result${suffix}`;
}

export function scatterUrl(base: string, analysisId: string, pair?: [string, string]): string {
  const suffix = pair ? `?pair=${encodeURIComponent(`${pair[0]},${pair[1]}`)}` : "";
  return `${base}/analyses/${analysisId}/scatter${suffix}`;
}

async function parseError(response: Response): Promise<ApiError> {
  let kind = "Error";
  let message = `${response.status}`;
  try {
    const body = await response.json();
    kind = body.error_kind ?? kind;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, kind, message);
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async expectOk(response: Response): Promise<Response> {
    if (!response.ok) {
      throw await parseError(response);
    }
    return response;
  }

  async getConfig(): Promise<ServiceConfig> {
    const r = await this.expectOk(await this.fetchFn(`${this.base}/config`));
    return r.json();
  }

  async uploadGeoJson(body: string | Blob): Promise<UploadResponse> {
    const r = await this.expectOk(await this.fetchFn(`${this.base}/datasets`, {
      method: "POST",
      headers: { "content-type": "application/geo+json" },
      body,
    }));
    return r.json();
  }

  async uploadCsv(body: string | Blob, xCol: string, yCol: string): Promise<UploadResponse> {
    const params = new URLSearchParams({ x_col: xCol, y_col: yCol });
    const r = await this.expectOk(await this.fetchFn(`${this.base}/datasets?${params}`, {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body,
    }));
    return r.json();
  }

  async listVariables(datasetId: string): Promise<Schema> {
    const r = await this.expectOk(
      await this.fetchFn(`${this.base}/datasets/${datasetId}/variables`));
    return r.json();
  }

  async runAnalysis(req: AnalysisRequest): Promise<AnalysisResponse> {
    const r = await this.expectOk(await this.fetchFn(`${this.base}/analyses`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    }));
    return r.json();
  }

  async getResult(analysisId: string, pair?: [string, string]): Promise<ResultDocument> {
    const r = await this.expectOk(
      await this.fetchFn(resultUrl(this.base, analysisId, pair)));
    return r.json();
  }

  async getScatter(analysisId: string, pair?: [string, string]): Promise<ScatterRecord[]> {
    const r = await this.expectOk(
      await this.fetchFn(scatterUrl(this.base, analysisId, pair)));
    return r.json();
  }
}
