"""Real-time prediction service over a single immutable model bundle.

The bundle is loaded once and shared read-only across requests; every
request runs the identical preprocess -> transform -> predict pipeline the
model was trained with and reports its own server-side latency. Responses
carry the risk band so clients never re-derive thresholds.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import models
from .ingest import ClassLabel
from .modelstore import ModelBundle

MAX_BODY_BYTES = 1 << 20  # request size cap


@dataclass(frozen=True)
class RiskBands:
    """Probability thresholds for the human-facing risk assessment."""

    high: float = 0.8
    suspicious: float = 0.5

    def band(self, p_phishing: float) -> str:
        if p_phishing >= self.high:
            return "high"
        if p_phishing >= self.suspicious:
            return "suspicious"
        return "low"


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(
    bundle: ModelBundle | None,
    top_k: int = 10,
    risk_bands: RiskBands = RiskBands(),
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="phishguard", docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.bundle = bundle
    app.state.model_hash = bundle.content_hash() if bundle is not None else None
    app.state.top_k = top_k
    app.state.risk_bands = risk_bands
    app.state.started_monotonic = time.monotonic()

    @app.post("/predict")
    async def predict(request: Request):
        loaded: ModelBundle | None = app.state.bundle
        if loaded is None:
            return _error(503, "no model bundle loaded")
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return _error(400, f"request body exceeds {MAX_BODY_BYTES} bytes")
        try:
            payload = json.loads(body)
        except (UnicodeDecodeError, json.JSONDecodeError):
            return _error(400, "request body must be a JSON object")
        if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
            return _error(400, 'request must carry a string "text" field')
        text = payload["text"]
        if not text.strip():
            return _error(400, "text is empty")

        t0 = time.perf_counter()
        prediction = loaded.predict(text, top_k=app.state.top_k)
        latency_ms = (time.perf_counter() - t0) * 1000.0
        p = prediction.p_phishing
        return {
            "label": "phishing" if prediction.label is ClassLabel.PHISHING else "legitimate",
            "confidence": max(p, 1.0 - p),
            "p_phishing": p,
            "indicators": [
                {"term": term, "weight": weight}
                for term, weight in prediction.contributions
            ],
            "latency_ms": latency_ms,
            "risk_band": app.state.risk_bands.band(p),
        }

    @app.get("/health")
    async def health():
        loaded: ModelBundle | None = app.state.bundle
        return {
            "status": "ok",
            "model_loaded": loaded is not None,
            "model_hash": app.state.model_hash,
            "uptime_s": time.monotonic() - app.state.started_monotonic,
        }

    @app.get("/model/info")
    async def model_info():
        loaded: ModelBundle | None = app.state.bundle
        if loaded is None:
            return _error(503, "no model bundle loaded")
        info = {
            "kind": loaded.kind,
            "vocab_size": loaded.vocab.size,
            "created_at": loaded.created_at,
            "metrics": loaded.metrics,
            "top_features": None,
        }
        if isinstance(loaded.model, models.LogisticModel):
            phishing, legitimate = models.top_features(loaded.model, loaded.vocab, 10)
            info["top_features"] = {
                "phishing": [{"term": t, "coefficient": c} for t, c in phishing],
                "legitimate": [{"term": t, "coefficient": c} for t, c in legitimate],
            }
        return info

    return app
