"""TF-IDF feature extraction over unigrams and bigrams.

The vocabulary is fitted on training documents only: candidate n-grams are
document-frequency filtered, truncated to the most frequent max_features
terms, and indexed in lexicographic order. Two inverse-document-frequency
conventions are supported:

* ``unsmoothed``:  idf(t) = ln(N / (1 + df(t))), raw tf * idf weights. The
  idf can be negative when df(t) + 1 > N.
* ``smoothed_normalized``:  idf(t) = ln((1 + N) / (1 + df(t))) + 1 and the
  finished document vector is scaled to unit Euclidean norm. This is the
  de-facto default of mainstream vectorizers and of the deployed system.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class VectorizeError(Exception):
    """Invalid configuration or a corpus no vocabulary can be fitted on."""


class IdfMode(str, Enum):
    UNSMOOTHED = "unsmoothed"
    SMOOTHED_NORMALIZED = "smoothed_normalized"


@dataclass(frozen=True)
class TfidfConfig:
    max_features: int = 5000
    ngram_min: int = 1
    ngram_max: int = 2
    min_df: int = 2
    max_df: float = 0.95
    idf_mode: IdfMode = IdfMode.SMOOTHED_NORMALIZED

    def __post_init__(self) -> None:
        if not 1 <= self.ngram_min <= self.ngram_max:
            raise VectorizeError(f"need 1 <= ngram_min <= ngram_max, got ({self.ngram_min}, {self.ngram_max})")
        if not 0 < self.max_df <= 1:
            raise VectorizeError(f"max_df must be in (0, 1], got {self.max_df}")
        if self.min_df < 1:
            raise VectorizeError(f"min_df must be >= 1, got {self.min_df}")
        if self.max_features < 1:
            raise VectorizeError(f"max_features must be >= 1, got {self.max_features}")

    def to_dict(self) -> dict:
        return {
            "max_features": self.max_features,
            "ngram_min": self.ngram_min,
            "ngram_max": self.ngram_max,
            "min_df": self.min_df,
            "max_df": self.max_df,
            "idf_mode": self.idf_mode.value,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TfidfConfig":
        return cls(
            max_features=int(raw["max_features"]),
            ngram_min=int(raw["ngram_min"]),
            ngram_max=int(raw["ngram_max"]),
            min_df=int(raw["min_df"]),
            max_df=float(raw["max_df"]),
            idf_mode=IdfMode(raw["idf_mode"]),
        )


@dataclass(frozen=True)
class SparseVector:
    """Index/value pairs over a fixed-dimension feature space.

    Indices are strictly increasing and every stored value is finite and
    nonzero (positive in smoothed mode; unsmoothed idf may go negative).
    """

    indices: tuple[int, ...]
    values: tuple[float, ...]
    dim: int

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.values):
            raise VectorizeError("indices and values length mismatch")
        if self.dim < 0:
            raise VectorizeError("dim must be non-negative")
        previous = -1
        for i in self.indices:
            if not previous < i < self.dim:
                raise VectorizeError(f"indices must be strictly increasing and < {self.dim}")
            previous = i
        for v in self.values:
            if not math.isfinite(v) or v == 0.0:
                raise VectorizeError(f"values must be finite and nonzero, got {v}")

    @property
    def nnz(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class Vocabulary:
    """Fitted vectorizer state: indexed terms with df and idf weights.

    terms are in index order, which is lexicographic by construction;
    df[i] counts the training documents containing terms[i] and n_docs is
    the size of the training corpus.
    """

    terms: tuple[str, ...]
    df: tuple[int, ...]
    idf: tuple[float, ...]
    n_docs: int
    config: TfidfConfig
    _term_index: dict[str, int] = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        if not (len(self.terms) == len(self.df) == len(self.idf)):
            raise VectorizeError("terms, df and idf must have equal length")
        if list(self.terms) != sorted(self.terms):
            raise VectorizeError("terms must be in lexicographic order")
        if len(set(self.terms)) != len(self.terms):
            raise VectorizeError("terms must be unique")
        object.__setattr__(self, "_term_index", {t: i for i, t in enumerate(self.terms)})

    @property
    def size(self) -> int:
        return len(self.terms)

    def index_of(self, term: str) -> int | None:
        return self._term_index.get(term)

    def to_dict(self) -> dict:
        return {
            "terms": list(self.terms),
            "df": list(self.df),
            "idf": list(self.idf),
            "n_docs": self.n_docs,
            "config": self.config.to_dict(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Vocabulary":
        return cls(
            terms=tuple(str(t) for t in raw["terms"]),
            df=tuple(int(d) for d in raw["df"]),
            idf=tuple(float(w) for w in raw["idf"]),
            n_docs=int(raw["n_docs"]),
            config=TfidfConfig.from_dict(raw["config"]),
        )


def extract_ngrams(tokens: Sequence[str], config: TfidfConfig) -> list[str]:
    """All contiguous n-grams for n in [ngram_min, ngram_max], joined by spaces.

    Unigrams come first in token order, then bigrams in token order, and so
    on for each n.
    """
    grams: list[str] = []
    for n in range(config.ngram_min, config.ngram_max + 1):
        grams.extend(" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1))
    return grams


def _idf(df: int, n_docs: int, mode: IdfMode) -> float:
    if mode is IdfMode.UNSMOOTHED:
        return math.log(n_docs / (1 + df))
    return math.log((1 + n_docs) / (1 + df)) + 1.0


def fit(corpus: Sequence[Sequence[str]], config: TfidfConfig) -> Vocabulary:
    """Fit a vocabulary on tokenized training documents.

    Terms with df < min_df are dropped, as are terms present in a fraction
    of documents strictly greater than max_df (a term in exactly that
    fraction survives). If more terms remain than max_features, the ones
    with the highest total corpus frequency are kept, ties broken in favor
    of the lexicographically smaller term.
    """
    if not corpus:
        raise VectorizeError("cannot fit a vocabulary on an empty corpus")
    n_docs = len(corpus)
    df_counter: Counter[str] = Counter()
    tf_total: Counter[str] = Counter()
    for tokens in corpus:
        grams = extract_ngrams(tokens, config)
        tf_total.update(grams)
        df_counter.update(set(grams))

    survivors = [
        term
        for term, df in df_counter.items()
        if df >= config.min_df and df / n_docs <= config.max_df
    ]
    if not survivors:
        raise VectorizeError(
            "no terms survive document-frequency filtering "
            f"(min_df={config.min_df}, max_df={config.max_df}, n_docs={n_docs})"
        )
    if len(survivors) > config.max_features:
        survivors.sort(key=lambda t: (-tf_total[t], t))
        survivors = survivors[: config.max_features]
    survivors.sort()

    df = tuple(df_counter[t] for t in survivors)
    idf = tuple(_idf(d, n_docs, config.idf_mode) for d in df)
    return Vocabulary(tuple(survivors), df, idf, n_docs, config)


def transform(tokens: Sequence[str], vocab: Vocabulary) -> SparseVector:
    """Weight a tokenized document against a fitted vocabulary.

    The raw in-document count of each vocabulary term is multiplied by its
    idf; terms outside the vocabulary are ignored, and exact-zero products
    are not stored. In smoothed_normalized mode the vector is scaled to
    unit Euclidean norm (an all-zero vector stays zero).
    """
    counts = Counter(extract_ngrams(tokens, vocab.config))
    entries: list[tuple[int, float]] = []
    for term, tf in counts.items():
        i = vocab.index_of(term)
        if i is not None:
            value = tf * vocab.idf[i]
            if value != 0.0:
                entries.append((i, value))
    entries.sort()
    values = [v for _, v in entries]
    if vocab.config.idf_mode is IdfMode.SMOOTHED_NORMALIZED and values:
        norm = math.sqrt(math.fsum(v * v for v in values))
        values = [v / norm for v in values]
    return SparseVector(tuple(i for i, _ in entries), tuple(values), vocab.size)


def sparsity(matrix: Sequence[SparseVector], dim: int) -> float:
    """Fraction of zero cells in the implied dense document-term matrix."""
    if dim <= 0:
        raise VectorizeError("dim must be positive")
    if not matrix:
        raise VectorizeError("sparsity of an empty matrix is undefined")
    stored = sum(v.nnz for v in matrix)
    return 1.0 - stored / (len(matrix) * dim)
