/** Thin client for the three service endpoints. The base URL defaults to
 * the page origin and can be overridden with an ?api=... query parameter. */

import {
  ModelInfo,
  PredictResponse,
  parseModelInfo,
  parsePredictResponse,
} from "./types.js";

export type ApiErrorKind = "validation" | "unavailable";

export class ApiError extends Error {
  readonly kind: ApiErrorKind;

  constructor(kind: ApiErrorKind, message: string) {
    super(message);
    this.name = "ApiError";
    this.kind = kind;
  }
}

export function resolveBaseUrl(search: string, origin: string): string {
  const override = new URLSearchParams(search).get("api");
  return (override ?? origin).replace(/\/+$/, "");
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    if (body && typeof body.error === "string") return body.error;
  } catch {
    /* non-JSON error body; fall through to the status line */
  }
  return `service answered ${response.status}`;
}

export class ServiceClient {
  constructor(private readonly baseUrl: string) {}

  async predict(text: string): Promise<PredictResponse> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/predict`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ text }),
      });
    } catch {
      throw new ApiError("unavailable", "cannot reach the prediction service");
    }
    if (response.status === 400) {
      throw new ApiError("validation", await errorMessage(response));
    }
    if (!response.ok) {
      throw new ApiError("unavailable", await errorMessage(response));
    }
    return parsePredictResponse(await response.json());
  }

  async modelInfo(): Promise<ModelInfo> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/model/info`);
    } catch {
      throw new ApiError("unavailable", "cannot reach the prediction service");
    }
    if (!response.ok) {
      throw new ApiError("unavailable", await errorMessage(response));
    }
    return parseModelInfo(await response.json());
  }
}
