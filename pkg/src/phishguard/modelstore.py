"""Serialization of the deployable artifact: preprocessing fingerprint,
vocabulary, and classifier parameters in one integrity-checked file.

The on-disk format (conventionally ``.pgmodel``) is UTF-8 JSON with the
top-level keys {format_version, preprocess, vocab, model, created_at,
content_hash}. Bytes are deterministic: keys sorted, no whitespace, floats
as shortest round-trip decimals. content_hash is the SHA-256 of the
canonical JSON of everything except itself and is re-verified on load, as
are the invariants of every contained structure. Files may optionally be
gzip-compressed; loading sniffs the magic bytes.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
import tempfile
import zlib
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import models, preprocess, vectorize

FORMAT_VERSION = 1
GZIP_MAGIC = b"\x1f\x8b"

# canonical files start with the hash header: sorted keys put it first
_HASH_HEADER = b'{"content_hash":"'


class ModelStoreError(Exception):
    """Unreadable, tampered, version-mismatched, or inconsistent bundle."""


def canonical_json(payload: object) -> str:
    """Deterministic JSON: sorted keys, compact separators, no NaN/inf."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _model_to_dict(
    model: models.NaiveBayesModel | models.LogisticModel,
    metrics: dict | None,
) -> dict:
    if isinstance(model, models.LogisticModel):
        payload = {
            "kind": "logistic_regression",
            "weights": [float(w) for w in model.weights],
            "intercept": model.intercept,
            "C": model.C,
            "max_iter": model.max_iter,
            "tol": model.tol,
            "seed": model.seed,
            "converged": model.converged,
            "n_iter": model.n_iter,
        }
    elif isinstance(model, models.NaiveBayesModel):
        payload = {
            "kind": "naive_bayes",
            "class_log_prior": [float(v) for v in model.class_log_prior],
            "feature_log_prob": [[float(v) for v in row] for row in model.feature_log_prob],
            "alpha": model.alpha,
            "dim": model.dim,
        }
    else:
        raise ModelStoreError(f"unsupported model type: {type(model).__name__}")
    payload["metrics"] = metrics
    return payload


def _model_from_dict(raw: dict) -> models.NaiveBayesModel | models.LogisticModel:
    try:
        kind = raw["kind"]
        if kind == "logistic_regression":
            return models.LogisticModel(
                weights=np.asarray(raw["weights"], dtype=float),
                intercept=float(raw["intercept"]),
                C=float(raw["C"]),
                max_iter=int(raw["max_iter"]),
                tol=float(raw["tol"]),
                seed=int(raw["seed"]),
                converged=bool(raw["converged"]),
                n_iter=int(raw["n_iter"]),
            )
        if kind == "naive_bayes":
            return models.NaiveBayesModel(
                class_log_prior=np.asarray(raw["class_log_prior"], dtype=float),
                feature_log_prob=np.asarray(raw["feature_log_prob"], dtype=float),
                alpha=float(raw["alpha"]),
                dim=int(raw["dim"]),
            )
    except (KeyError, TypeError, ValueError, models.ModelError) as exc:
        raise ModelStoreError(f"invalid model payload: {exc}") from exc
    raise ModelStoreError(f"unknown model kind: {raw.get('kind')!r}")


@dataclass(frozen=True)
class ModelBundle:
    """A trained classifier plus everything needed to reproduce its inputs."""

    preprocess_config: preprocess.PreprocessConfig
    vocab: vectorize.Vocabulary
    model: models.NaiveBayesModel | models.LogisticModel
    created_at: str
    metrics: dict | None = None
    format_version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        model_dim = (
            self.model.dim
            if isinstance(self.model, (models.LogisticModel, models.NaiveBayesModel))
            else -1
        )
        if model_dim != self.vocab.size:
            raise ModelStoreError(
                f"model dimension {model_dim} does not match vocabulary size {self.vocab.size}"
            )

    @property
    def kind(self) -> str:
        return (
            "logistic_regression"
            if isinstance(self.model, models.LogisticModel)
            else "naive_bayes"
        )

    def payload(self) -> dict:
        """Everything the content hash covers, as plain JSON-ready data."""
        return {
            "format_version": self.format_version,
            "preprocess": self.preprocess_config.to_dict(),
            "vocab": self.vocab.to_dict(),
            "model": _model_to_dict(self.model, self.metrics),
            "created_at": self.created_at,
        }

    def content_hash(self) -> str:
        return hashlib.sha256(canonical_json(self.payload()).encode("utf-8")).hexdigest()

    def predict(self, text: str, top_k: int = 10) -> models.Prediction:
        """Full pipeline on raw text: preprocess, vectorize, classify."""
        tokens = preprocess.preprocess(text)
        x = vectorize.transform(tokens, self.vocab)
        return models.classify_vector(self.model, x, self.vocab, top_k)


def save(bundle: ModelBundle, path: str | Path, compress: bool = False) -> None:
    """Write a bundle atomically; identical bundles produce identical bytes."""
    payload_bytes = canonical_json(bundle.payload()).encode("utf-8")
    digest = hashlib.sha256(payload_bytes).hexdigest()
    # sorted keys put content_hash first, so splicing the header in keeps
    # the file canonical JSON while the digest covers the exact payload bytes
    data = _HASH_HEADER + digest.encode("ascii") + b'",' + payload_bytes[1:]
    if compress:
        data = gzip.compress(data, mtime=0)
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def _split_stored_hash(data: bytes) -> tuple[str, bytes]:
    """Separate the stored digest from the exact payload bytes it covers.

    The hash must protect the literal bytes on disk: re-serializing parsed
    values would let through corruptions that happen to parse to the same
    numbers (e.g. a flipped final digit of a 17-digit float).
    """
    head = len(_HASH_HEADER)
    if not data.startswith(_HASH_HEADER) or len(data) < head + 66:
        raise ModelStoreError("malformed bundle: canonical content_hash header missing")
    if data[head + 64 : head + 66] != b'",':
        raise ModelStoreError("malformed bundle: canonical content_hash header missing")
    try:
        stored_hash = data[head : head + 64].decode("ascii")
    except UnicodeDecodeError as exc:
        raise ModelStoreError("malformed bundle: unreadable content_hash") from exc
    return stored_hash, b"{" + data[head + 66 :]


def load(path: str | Path, verify_pipeline: bool = True) -> ModelBundle:
    """Read and validate a bundle; every invariant is re-checked.

    With verify_pipeline the stored preprocessing fingerprints must match
    the assets bundled with this installation, guaranteeing that serving
    reproduces the pipeline the model was trained with.
    """
    path = Path(path)
    if not path.is_file():
        raise ModelStoreError(f"bundle file not found: {path}")
    data = path.read_bytes()
    if data[:2] == GZIP_MAGIC:
        try:
            data = gzip.decompress(data)
        except (OSError, EOFError, zlib.error) as exc:
            raise ModelStoreError(f"corrupt gzip container: {exc}") from exc

    stored_hash, payload_bytes = _split_stored_hash(data)
    actual_hash = hashlib.sha256(payload_bytes).hexdigest()
    if stored_hash != actual_hash:
        raise ModelStoreError("content hash mismatch: bundle corrupted or tampered")
    try:
        raw = json.loads(payload_bytes.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelStoreError(f"not a valid bundle file: {exc}") from exc
    if not isinstance(raw, dict):
        raise ModelStoreError("bundle must be a JSON object")

    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelStoreError(
            f"unsupported format_version {version!r}; this build reads {FORMAT_VERSION}"
        )

    try:
        bundle = ModelBundle(
            preprocess_config=preprocess.PreprocessConfig.from_dict(raw["preprocess"]),
            vocab=vectorize.Vocabulary.from_dict(raw["vocab"]),
            model=_model_from_dict(raw["model"]),
            created_at=str(raw["created_at"]),
            metrics=raw["model"].get("metrics"),
            format_version=int(version),
        )
    except (KeyError, TypeError, ValueError, vectorize.VectorizeError) as exc:
        raise ModelStoreError(f"invalid bundle contents: {exc}") from exc

    if verify_pipeline and bundle.preprocess_config != preprocess.active_config():
        raise ModelStoreError(
            "bundle was produced by a different preprocessing pipeline "
            "(asset fingerprints do not match this installation)"
        )
    return bundle
