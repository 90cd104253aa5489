"""Stratified splitting, metric computation, and the train/evaluate experiment.

The split is seeded and per-class: indices of each class are shuffled with a
PCG64 generator and the first floor(train_fraction * N_c) go to training, so
class proportions are preserved to within one record per class and the split
is reproducible from (corpus order, seed). Vectorizer fitting only accepts
the training partition type, which makes test-set leakage a type error
instead of a convention.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import models, preprocess, vectorize
from .ingest import ClassLabel, RawEmail


class EvalError(Exception):
    """Degenerate corpus, mismatched inputs, or an invalid split spec."""


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 42
    stratified: bool = True

    def __post_init__(self) -> None:
        if not 0 < self.train_fraction < 1:
            raise EvalError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if not self.stratified:
            raise EvalError("only stratified splitting is supported")


@dataclass(frozen=True)
class TrainSplit:
    """Training partition; the only corpus handle a vectorizer can be fitted on."""

    records: tuple[RawEmail, ...]


@dataclass(frozen=True)
class TestSplit:
    """Held-out partition; structurally unusable for fitting."""

    __test__ = False  # not a test case, despite the name

    records: tuple[RawEmail, ...]


def stratified_split(
    corpus: Sequence[RawEmail], spec: SplitSpec
) -> tuple[TrainSplit, TestSplit]:
    """Partition a corpus per class with a seeded deterministic shuffle.

    Within each class, floor(train_fraction * N_c) records go to training
    and the rest to test. Selected indices are emitted in ascending corpus
    order. Both classes must be present with at least two records each.
    """
    by_class: dict[ClassLabel, list[int]] = {label: [] for label in ClassLabel}
    for i, record in enumerate(corpus):
        by_class[record.label].append(i)
    for label, idxs in by_class.items():
        if len(idxs) < 2:
            raise EvalError(f"class {label.name} has {len(idxs)} records; need at least 2")

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in (ClassLabel.LEGITIMATE, ClassLabel.PHISHING):
        idxs = by_class[label]
        order = rng.permutation(len(idxs))
        n_train = math.floor(spec.train_fraction * len(idxs))
        train_idx.extend(idxs[j] for j in order[:n_train])
        test_idx.extend(idxs[j] for j in order[n_train:])
    train_idx.sort()
    test_idx.sort()
    return (
        TrainSplit(tuple(corpus[i] for i in train_idx)),
        TestSplit(tuple(corpus[i] for i in test_idx)),
    )


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 counts with phishing as the positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise EvalError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


def confusion(
    y_true: Sequence[ClassLabel], y_pred: Sequence[ClassLabel]
) -> ConfusionMatrix:
    if len(y_true) != len(y_pred):
        raise EvalError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    if not y_true:
        raise EvalError("cannot build a confusion matrix from empty inputs")
    tp = fp = tn = fn = 0
    for truth, predicted in zip(y_true, y_pred):
        if predicted == ClassLabel.PHISHING:
            if truth == ClassLabel.PHISHING:
                tp += 1
            else:
                fp += 1
        else:
            if truth == ClassLabel.PHISHING:
                fn += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)


@dataclass(frozen=True)
class MetricsReport:
    """Accuracy, precision, recall and F1 for one model's predictions.

    Metrics whose denominator is zero are reported as 0.0 and named in
    undefined_metrics.
    """

    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: ConfusionMatrix
    undefined_metrics: tuple[str, ...] = ()


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total == 0:
        raise EvalError("metrics need at least one prediction")
    undefined: list[str] = []

    def ratio(numerator: int, denominator: int, name: str) -> float:
        if denominator == 0:
            undefined.append(name)
            return 0.0
        return numerator / denominator

    accuracy = (cm.tp + cm.tn) / cm.total
    precision = ratio(cm.tp, cm.tp + cm.fp, "precision")
    recall = ratio(cm.tp, cm.tp + cm.fn, "recall")
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        undefined.append("f1")
        f1 = 0.0
    return MetricsReport(accuracy, precision, recall, f1, cm, tuple(undefined))


def fit_tfidf(train: TrainSplit, config: vectorize.TfidfConfig) -> vectorize.Vocabulary:
    """Fit the vectorizer on the training partition; rejects any other handle."""
    if not isinstance(train, TrainSplit):
        raise TypeError("vectorizer fitting requires the training partition")
    return vectorize.fit([preprocess.preprocess(r.text) for r in train.records], config)


@dataclass(frozen=True)
class ModelConfigs:
    nb_alpha: float = 1.0
    lr_c: float = 1.0
    lr_max_iter: int = 1000
    lr_tol: float = 1e-4
    lr_seed: int = 42


@dataclass
class ModelEvaluation:
    kind: str  # "naive_bayes" | "logistic_regression"
    metrics: MetricsReport
    train_seconds: float


@dataclass
class ExperimentResult:
    """Everything produced by one train/evaluate run on a single split."""

    vocab: vectorize.Vocabulary
    nb_model: models.NaiveBayesModel
    lr_model: models.LogisticModel
    evaluations: dict[str, ModelEvaluation]
    sparsity: float
    top_features: tuple[list[tuple[str, float]], list[tuple[str, float]]]
    n_train: int
    n_test: int

    def report_rows(self, zero_timings: bool = False) -> list[dict]:
        """Flat per-model report objects for JSON/CSV emission."""
        rows = []
        for kind in ("naive_bayes", "logistic_regression"):
            ev = self.evaluations[kind]
            rows.append({
                "model": kind,
                "accuracy": ev.metrics.accuracy,
                "precision": ev.metrics.precision,
                "recall": ev.metrics.recall,
                "f1": ev.metrics.f1,
                "confusion": ev.metrics.confusion.to_dict(),
                "vocab_size": self.vocab.size,
                "sparsity": self.sparsity,
                "train_seconds": 0.0 if zero_timings else ev.train_seconds,
            })
        return rows


def run_experiment(
    corpus: Sequence[RawEmail],
    split_spec: SplitSpec,
    tfidf_config: vectorize.TfidfConfig,
    model_configs: ModelConfigs = ModelConfigs(),
    feature_k: int = 10,
) -> ExperimentResult:
    """Split, fit the vectorizer on train only, train and score both models.

    The held-out partition is transformed with the train-fitted vocabulary
    and never participates in fitting.
    """
    train, test = stratified_split(corpus, split_spec)
    vocab = fit_tfidf(train, tfidf_config)
    X_train = [
        vectorize.transform(preprocess.preprocess(r.text), vocab) for r in train.records
    ]
    X_test = [
        vectorize.transform(preprocess.preprocess(r.text), vocab) for r in test.records
    ]
    y_train = [r.label for r in train.records]
    y_test = [r.label for r in test.records]

    t0 = time.perf_counter()
    nb_model = models.nb_fit(X_train, y_train, alpha=model_configs.nb_alpha)
    nb_seconds = time.perf_counter() - t0
    t0 = time.perf_counter()
    lr_model = models.lr_fit(
        X_train,
        y_train,
        C=model_configs.lr_c,
        max_iter=model_configs.lr_max_iter,
        tol=model_configs.lr_tol,
        seed=model_configs.lr_seed,
    )
    lr_seconds = time.perf_counter() - t0

    def nb_labels(X: list[vectorize.SparseVector]) -> list[ClassLabel]:
        return [
            ClassLabel.PHISHING if models.nb_predict_proba(nb_model, x)[1] >= 0.5
            else ClassLabel.LEGITIMATE
            for x in X
        ]

    def lr_labels(X: list[vectorize.SparseVector]) -> list[ClassLabel]:
        return [
            ClassLabel.PHISHING if models.lr_predict_proba(lr_model, x) >= 0.5
            else ClassLabel.LEGITIMATE
            for x in X
        ]

    evaluations = {
        "naive_bayes": ModelEvaluation(
            "naive_bayes", metrics(confusion(y_test, nb_labels(X_test))), nb_seconds
        ),
        "logistic_regression": ModelEvaluation(
            "logistic_regression", metrics(confusion(y_test, lr_labels(X_test))), lr_seconds
        ),
    }
    return ExperimentResult(
        vocab=vocab,
        nb_model=nb_model,
        lr_model=lr_model,
        evaluations=evaluations,
        sparsity=vectorize.sparsity(X_train, vocab.size),
        top_features=models.top_features(lr_model, vocab, feature_k),
        n_train=len(train.records),
        n_test=len(test.records),
    )
