"""The two classifiers: multinomial Naive Bayes and L2-regularized logistic
regression, with probability outputs and coefficient-based explanations.

Naive Bayes scores a document by class prior plus the value-weighted sum of
per-feature log likelihoods; fractional tf-idf weights are accepted as-is in
place of counts, exactly as the surrounding pipeline feeds them. Logistic
regression minimizes

    J(beta, b) = 0.5 * ||beta||^2 + C * sum_i log(1 + exp(-y_i (beta.x_i + b)))

with labels in {-1, +1} and an unregularized intercept, using a
deterministic full-batch quasi-Newton optimizer started from zero weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.optimize
import scipy.sparse as sp
from scipy.special import expit

from .ingest import ClassLabel
from .vectorize import SparseVector, Vocabulary


class ModelError(Exception):
    """Invalid training input or prediction against a mismatched model."""


def _to_csr(X: Sequence[SparseVector]) -> sp.csr_matrix:
    dims = {x.dim for x in X}
    if len(dims) > 1:
        raise ModelError(f"inconsistent feature dimensions: {sorted(dims)}")
    dim = dims.pop() if dims else 0
    indptr = np.zeros(len(X) + 1, dtype=np.int64)
    for row, x in enumerate(X):
        indptr[row + 1] = indptr[row] + x.nnz
    indices = np.fromiter(
        (i for x in X for i in x.indices), dtype=np.int64, count=indptr[-1]
    )
    data = np.fromiter(
        (v for x in X for v in x.values), dtype=np.float64, count=indptr[-1]
    )
    return sp.csr_matrix((data, indices, indptr), shape=(len(X), dim))


def _class_array(y: Sequence[ClassLabel]) -> np.ndarray:
    arr = np.asarray([int(label) for label in y], dtype=np.int64)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ModelError("labels must be the two class codes 0/1")
    return arr


@dataclass(frozen=True, eq=False)
class NaiveBayesModel:
    """Fitted multinomial Naive Bayes parameters in log space."""

    class_log_prior: np.ndarray
    feature_log_prob: np.ndarray
    alpha: float
    dim: int

    def __post_init__(self) -> None:
        prior = np.asarray(self.class_log_prior, dtype=np.float64)
        flp = np.asarray(self.feature_log_prob, dtype=np.float64)
        if prior.shape != (2,) or flp.shape != (2, self.dim):
            raise ModelError("parameter shapes do not match two classes x dim")
        if not (np.isfinite(prior).all() and np.isfinite(flp).all()):
            raise ModelError("non-finite Naive Bayes parameters")
        if abs(np.exp(prior).sum() - 1.0) > 1e-12:
            raise ModelError("class priors do not sum to 1")
        rows = np.exp(flp).sum(axis=1)
        if np.abs(rows - 1.0).max() > 1e-9:
            raise ModelError("per-class feature likelihoods do not sum to 1")
        prior.setflags(write=False)
        flp.setflags(write=False)
        object.__setattr__(self, "class_log_prior", prior)
        object.__setattr__(self, "feature_log_prob", flp)


@dataclass(frozen=True, eq=False)
class LogisticModel:
    """Fitted logistic-regression parameters plus the training configuration."""

    weights: np.ndarray
    intercept: float
    C: float
    max_iter: int
    tol: float
    seed: int
    converged: bool
    n_iter: int
    #: objective value at the zero start and after each optimizer iteration;
    #: diagnostic only, not persisted.
    objective_history: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise ModelError("weights must be a vector")
        if not (np.isfinite(w).all() and np.isfinite(self.intercept)):
            raise ModelError("non-finite logistic-regression parameters")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])


@dataclass(frozen=True)
class Prediction:
    """Classification outcome for a single document."""

    label: ClassLabel
    p_phishing: float
    contributions: tuple[tuple[str, float], ...]


def nb_fit(
    X: Sequence[SparseVector],
    y: Sequence[ClassLabel],
    alpha: float = 1.0,
) -> NaiveBayesModel:
    """Fit multinomial Naive Bayes with Laplace-style smoothing constant alpha.

    Per class c: log prior = ln(N_c / N) and the feature log likelihood is
    ln((S_ci + alpha) / (S_c + alpha * dim)) where S_ci sums feature i over
    the class's documents. Values must be non-negative; fractional weights
    are allowed.
    """
    if len(X) != len(y) or not X:
        raise ModelError("need equally many documents and labels, at least one")
    if alpha <= 0:
        raise ModelError(f"alpha must be positive, got {alpha}")
    labels = _class_array(y)
    if len(np.unique(labels)) < 2:
        raise ModelError("training data must contain both classes")
    A = _to_csr(X)
    if A.data.size and A.data.min() < 0:
        raise ModelError("Naive Bayes requires non-negative feature values")
    dim = A.shape[1]
    if dim == 0:
        raise ModelError("cannot fit on zero-dimensional features")

    counts = np.bincount(labels, minlength=2).astype(np.float64)
    sums = np.zeros((2, dim))
    for c in (0, 1):
        sums[c] = np.asarray(A[labels == c].sum(axis=0)).ravel()
    smoothed = sums + alpha
    feature_log_prob = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
    class_log_prior = np.log(counts / counts.sum())
    return NaiveBayesModel(class_log_prior, feature_log_prob, float(alpha), dim)


def nb_predict_proba(model: NaiveBayesModel, x: SparseVector) -> tuple[float, float]:
    """Posterior (p_legitimate, p_phishing) via a stabilized softmax."""
    if x.dim != model.dim:
        raise ModelError(f"feature dimension {x.dim} does not match model {model.dim}")
    scores = np.array(model.class_log_prior, dtype=np.float64)
    if x.nnz:
        idx = np.asarray(x.indices, dtype=np.int64)
        vals = np.asarray(x.values, dtype=np.float64)
        scores = scores + model.feature_log_prob[:, idx] @ vals
    scores -= scores.max()
    p = np.exp(scores)
    p /= p.sum()
    return float(p[0]), float(p[1])


def _lr_objective(A: sp.csr_matrix, ys: np.ndarray, C: float):
    AT = A.T.tocsr()

    def objective(w: np.ndarray) -> tuple[float, np.ndarray]:
        beta, b = w[:-1], w[-1]
        z = ys * (A @ beta + b)
        value = 0.5 * float(beta @ beta) + C * float(np.logaddexp(0.0, -z).sum())
        pull = -ys * expit(-z)  # d/d(score) of the loss term, per sample
        grad = np.empty_like(w)
        grad[:-1] = beta + C * (AT @ pull)
        grad[-1] = C * pull.sum()
        return value, grad

    return objective


def lr_objective(X: Sequence[SparseVector], y: Sequence[ClassLabel], C: float):
    """Value-and-gradient callable of the training objective.

    The argument vector stacks the weights followed by the intercept. Used
    by training and exposed for gradient diagnostics.
    """
    labels = _class_array(y)
    return _lr_objective(_to_csr(X), np.where(labels == 1, 1.0, -1.0), C)


def lr_fit(
    X: Sequence[SparseVector],
    y: Sequence[ClassLabel],
    C: float = 1.0,
    max_iter: int = 1000,
    tol: float = 1e-4,
    seed: int = 42,
) -> LogisticModel:
    """Train logistic regression by deterministic full-batch L-BFGS.

    Weights start at zero, so identical inputs yield bit-identical models;
    the seed is recorded for provenance only. Optimization stops once the
    gradient infinity-norm drops to tol or after max_iter iterations.
    """
    if len(X) != len(y) or len(X) < 2:
        raise ModelError("need equally many documents and labels, at least two")
    labels = _class_array(y)
    if len(np.unique(labels)) < 2:
        raise ModelError("training data must contain both classes")
    A = _to_csr(X)
    ys = np.where(labels == 1, 1.0, -1.0)
    objective = _lr_objective(A, ys, C)

    history: list[float] = []
    w0 = np.zeros(A.shape[1] + 1)
    history.append(objective(w0)[0])
    result = scipy.optimize.minimize(
        objective,
        w0,
        jac=True,
        method="L-BFGS-B",
        callback=lambda w: history.append(objective(w)[0]),
        options={"maxiter": max_iter, "gtol": tol, "ftol": 1e-15, "maxls": 50},
    )
    final_grad = objective(result.x)[1]
    return LogisticModel(
        weights=result.x[:-1],
        intercept=float(result.x[-1]),
        C=float(C),
        max_iter=int(max_iter),
        tol=float(tol),
        seed=int(seed),
        converged=bool(np.abs(final_grad).max() <= tol),
        n_iter=int(result.nit),
        objective_history=tuple(history),
    )


def lr_decision_score(model: LogisticModel, x: SparseVector) -> float:
    """Pre-sigmoid linear score beta.x + intercept."""
    if x.dim != model.dim:
        raise ModelError(f"feature dimension {x.dim} does not match model {model.dim}")
    score = model.intercept
    if x.nnz:
        idx = np.asarray(x.indices, dtype=np.int64)
        vals = np.asarray(x.values, dtype=np.float64)
        score += float(model.weights[idx] @ vals)
    return score


def lr_predict_proba(model: LogisticModel, x: SparseVector) -> float:
    """P(phishing | x), the sigmoid of the linear score; overflow-safe."""
    return float(expit(lr_decision_score(model, x)))


def top_features(
    model: LogisticModel, vocab: Vocabulary, k: int
) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """The k strongest phishing (positive) and legitimate (negative) terms.

    Both lists are ordered by coefficient magnitude, ties broken by term;
    k larger than the number of signed coefficients returns all of them.
    """
    if k < 1:
        raise ModelError(f"k must be >= 1, got {k}")
    if model.dim != vocab.size:
        raise ModelError("model dimension does not match vocabulary size")
    weights = model.weights
    phishing = sorted(
        ((vocab.terms[i], float(w)) for i, w in enumerate(weights) if w > 0),
        key=lambda tw: (-tw[1], tw[0]),
    )
    legitimate = sorted(
        ((vocab.terms[i], float(w)) for i, w in enumerate(weights) if w < 0),
        key=lambda tw: (tw[1], tw[0]),
    )
    return phishing[:k], legitimate[:k]


def explain(
    model: LogisticModel,
    x: SparseVector,
    vocab: Vocabulary,
    k: int | None = None,
) -> list[tuple[str, float]]:
    """Per-term signed contributions weight_i * value_i, largest magnitude first.

    With k=None every active feature is returned; the contributions plus
    the intercept reconstruct the pre-sigmoid score.
    """
    if x.dim != model.dim or model.dim != vocab.size:
        raise ModelError("feature, model and vocabulary dimensions must agree")
    contributions = [
        (vocab.terms[i], float(model.weights[i] * v))
        for i, v in zip(x.indices, x.values)
    ]
    contributions.sort(key=lambda tc: (-abs(tc[1]), tc[0]))
    return contributions if k is None else contributions[: max(k, 0)]


def _nb_contributions(
    model: NaiveBayesModel, x: SparseVector, vocab: Vocabulary, k: int
) -> list[tuple[str, float]]:
    # log-likelihood-ratio evidence toward the phishing class, per feature
    ratio = model.feature_log_prob[1] - model.feature_log_prob[0]
    contributions = [
        (vocab.terms[i], float(ratio[i] * v)) for i, v in zip(x.indices, x.values)
    ]
    contributions.sort(key=lambda tc: (-abs(tc[1]), tc[0]))
    return contributions[: max(k, 0)]


def classify_vector(
    model: NaiveBayesModel | LogisticModel,
    x: SparseVector,
    vocab: Vocabulary,
    top_k: int = 10,
) -> Prediction:
    """Predict one document and attach its strongest signed indicators.

    The decision threshold is fixed at 0.5 with ties going to phishing.
    For logistic regression the indicators are weight*value contributions;
    for Naive Bayes they are value-weighted log likelihood ratios.
    """
    if isinstance(model, LogisticModel):
        p = lr_predict_proba(model, x)
        contributions = explain(model, x, vocab, top_k)
    else:
        _, p = nb_predict_proba(model, x)
        contributions = _nb_contributions(model, x, vocab, top_k)
    label = ClassLabel.PHISHING if p >= 0.5 else ClassLabel.LEGITIMATE
    return Prediction(label, p, tuple(contributions))
