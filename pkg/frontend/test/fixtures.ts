/** Canned wire payloads matching the service's documented JSON schema. */

export const HIGH_RISK_RESPONSE = {
  label: "phishing",
  confidence: 0.9409,
  p_phishing: 0.9409,
  indicators: [
    { term: "suspended", weight: 1.82 },
    { term: "verify", weight: 1.41 },
    { term: "click", weight: 1.12 },
    { term: "password", weight: 0.77 },
  ],
  latency_ms: 12.5,
  risk_band: "high",
};

export const LEGITIMATE_RESPONSE = {
  label: "legitimate",
  confidence: 0.9906,
  p_phishing: 0.0094,
  indicators: [
    { term: "meeting", weight: -1.3 },
    { term: "timeline", weight: -0.9 },
  ],
  latency_ms: 8.1,
  risk_band: "low",
};

export const LR_MODEL_INFO = {
  kind: "logistic_regression",
  vocab_size: 5000,
  created_at: "2026-01-01T00:00:00Z",
  metrics: { accuracy: 0.9541 },
  top_features: {
    phishing: [
      { term: "click", coefficient: 4.21 },
      { term: "free", coefficient: 2.89 },
    ],
    legitimate: [
      { term: "meeting", coefficient: -3.12 },
      { term: "schedule", coefficient: -3.95 },
    ],
  },
};

export const NB_MODEL_INFO = {
  kind: "naive_bayes",
  vocab_size: 5000,
  created_at: "2026-01-01T00:00:00Z",
  metrics: null,
  top_features: null,
};

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
