/** Wire types of the prediction service, with runtime validators so any
 * schema drift fails loudly in one place instead of rendering garbage. */

export interface Indicator {
  term: string;
  weight: number;
}

export interface PredictResponse {
  label: "phishing" | "legitimate";
  confidence: number;
  p_phishing: number;
  indicators: Indicator[];
  latency_ms: number;
  risk_band: "high" | "suspicious" | "low";
}

export interface FeatureEntry {
  term: string;
  coefficient: number;
}

export interface ModelInfo {
  kind: string;
  vocab_size: number;
  created_at: string;
  metrics: Record<string, unknown> | null;
  top_features: {
    phishing: FeatureEntry[];
    legitimate: FeatureEntry[];
  } | null;
}

export class SchemaError extends Error {
  constructor(detail: string) {
    super(`service response does not match the documented schema: ${detail}`);
    this.name = "SchemaError";
  }
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function requireNumber(obj: Record<string, unknown>, key: string): number {
  const value = obj[key];
  if (typeof value !== "number" || Number.isNaN(value)) {
    throw new SchemaError(`field "${key}" must be a number`);
  }
  return value;
}

function requireString(obj: Record<string, unknown>, key: string): string {
  const value = obj[key];
  if (typeof value !== "string") {
    throw new SchemaError(`field "${key}" must be a string`);
  }
  return value;
}

export function parsePredictResponse(raw: unknown): PredictResponse {
  if (!isRecord(raw)) throw new SchemaError("body is not an object");
  const label = requireString(raw, "label");
  if (label !== "phishing" && label !== "legitimate") {
    throw new SchemaError(`unknown label "${label}"`);
  }
  const riskBand = requireString(raw, "risk_band");
  if (riskBand !== "high" && riskBand !== "suspicious" && riskBand !== "low") {
    throw new SchemaError(`unknown risk_band "${riskBand}"`);
  }
  if (!Array.isArray(raw.indicators)) {
    throw new SchemaError('field "indicators" must be an array');
  }
  const indicators = raw.indicators.map((entry): Indicator => {
    if (!isRecord(entry)) throw new SchemaError("indicator is not an object");
    return {
      term: requireString(entry, "term"),
      weight: requireNumber(entry, "weight"),
    };
  });
  return {
    label,
    confidence: requireNumber(raw, "confidence"),
    p_phishing: requireNumber(raw, "p_phishing"),
    indicators,
    latency_ms: requireNumber(raw, "latency_ms"),
    risk_band: riskBand,
  };
}

function parseFeatureList(value: unknown, side: string): FeatureEntry[] {
  if (!Array.isArray(value)) {
    throw new SchemaError(`top_features.${side} must be an array`);
  }
  return value.map((entry): FeatureEntry => {
    if (!isRecord(entry)) throw new SchemaError("feature entry is not an object");
    return {
      term: requireString(entry, "term"),
      coefficient: requireNumber(entry, "coefficient"),
    };
  });
}

export function parseModelInfo(raw: unknown): ModelInfo {
  if (!isRecord(raw)) throw new SchemaError("body is not an object");
  let topFeatures: ModelInfo["top_features"] = null;
  if (raw.top_features !== null && raw.top_features !== undefined) {
    if (!isRecord(raw.top_features)) {
      throw new SchemaError("top_features must be an object or null");
    }
    topFeatures = {
      phishing: parseFeatureList(raw.top_features.phishing, "phishing"),
      legitimate: parseFeatureList(raw.top_features.legitimate, "legitimate"),
    };
  }
  return {
    kind: requireString(raw, "kind"),
    vocab_size: requireNumber(raw, "vocab_size"),
    created_at: requireString(raw, "created_at"),
    metrics: isRecord(raw.metrics) ? raw.metrics : null,
    top_features: topFeatures,
  };
}
