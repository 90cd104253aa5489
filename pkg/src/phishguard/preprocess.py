"""Email text normalization: markup/URL/address/digit stripping, tokenization,
stop-word removal, and dictionary-driven lemmatization.

The normalization steps run in a fixed order; order matters (URLs must go
before special-character replacement or their fragments would survive as
plain words). The stop-word list and the WordNet-derived lemma tables are
bundled as versioned data assets and fingerprinted so a trained model can
be bound to the exact pipeline that produced its features.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

_HTML_TAG = re.compile(r"<[^>]+>")
_URL = re.compile(r"https?://\S+", re.IGNORECASE)
_EMAIL_ADDR = re.compile(r"\S+@\S+")
_DIGIT_RUN = re.compile(r"[0-9]+")
_NON_ALNUM = re.compile(r"[^a-zA-Z0-9]")
_WHITESPACE = re.compile(r"\s+")

PIPELINE_VERSION = 1

_LEMMA_ASSETS = (
    "lemma_exceptions_noun.tsv",
    "lemma_exceptions_verb.tsv",
    "lemma_index.tsv",
)


def _asset_bytes(name: str) -> bytes:
    return (resources.files("phishguard") / "assets" / name).read_bytes()


def normalize_text(raw: str) -> str:
    """Reduce an email body to lowercase space-separated words.

    Applies, in order: HTML tag removal, http/https URL removal, email
    address removal, digit-run removal, replacement of the remaining
    non-alphanumeric characters with spaces, whitespace collapsing, and
    lowercasing. Total function; may return the empty string.
    """
    s = _HTML_TAG.sub(" ", raw)
    s = _URL.sub(" ", s)
    s = _EMAIL_ADDR.sub(" ", s)
    s = _DIGIT_RUN.sub(" ", s)
    s = _NON_ALNUM.sub(" ", s)
    s = _WHITESPACE.sub(" ", s).strip()
    return s.lower()


def tokenize(normalized: str) -> list[str]:
    """Split normalized text on spaces, producing no empty tokens."""
    return normalized.split()


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The bundled English stop-word list (179 entries)."""
    lines = _asset_bytes("stopwords.txt").decode("utf-8").splitlines()
    return frozenset(w for w in (line.strip() for line in lines) if w)


def remove_stopwords(tokens: list[str]) -> list[str]:
    """Drop tokens present in the bundled stop-word list, keeping order."""
    sw = stopwords()
    return [t for t in tokens if t not in sw]


class Lemmatizer:
    """WordNet-style morphological reduction for nouns and verbs.

    A word is reduced by first consulting the exception table for the part
    of speech, then by stripping known inflectional suffixes and keeping
    candidates that appear in the lemma index for that part of speech; the
    original form also counts as a candidate if the index lists it. Among
    surviving candidates the shortest wins. Words producing no candidate
    pass through unchanged.
    """

    SUFFIX_RULES: dict[str, tuple[tuple[str, str], ...]] = {
        "noun": (
            ("s", ""), ("ses", "s"), ("ves", "f"), ("xes", "x"), ("zes", "z"),
            ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y"),
        ),
        "verb": (
            ("s", ""), ("ies", "y"), ("es", "e"), ("es", ""),
            ("ed", "e"), ("ed", ""), ("ing", "e"), ("ing", ""),
        ),
    }

    def __init__(
        self,
        index: dict[str, frozenset[str]],
        exceptions: dict[str, dict[str, tuple[str, ...]]],
    ) -> None:
        self._index = index
        self._exceptions = exceptions
        self._base = lru_cache(maxsize=1 << 16)(self._base_uncached)

    @classmethod
    @lru_cache(maxsize=1)
    def bundled(cls) -> "Lemmatizer":
        """Lemmatizer backed by the packaged WordNet-derived tables."""
        index: dict[str, set[str]] = {"noun": set(), "verb": set()}
        for line in _asset_bytes("lemma_index.tsv").decode("utf-8").splitlines():
            word, pos = line.split("\t")
            index[pos].add(word)
        exceptions: dict[str, dict[str, tuple[str, ...]]] = {}
        for pos in ("noun", "verb"):
            table: dict[str, tuple[str, ...]] = {}
            raw = _asset_bytes(f"lemma_exceptions_{pos}.tsv").decode("utf-8")
            for line in raw.splitlines():
                form, lemma = line.split("\t")
                table[form] = table.get(form, ()) + (lemma,)
            exceptions[pos] = table
        return cls(
            {pos: frozenset(words) for pos, words in index.items()},
            exceptions,
        )

    def _candidates(self, word: str, pos: str) -> list[str]:
        known = self._index[pos]

        def keep_known(forms: list[str]) -> list[str]:
            seen: set[str] = set()
            result = []
            for form in forms:
                if form in known and form not in seen:
                    result.append(form)
                    seen.add(form)
            return result

        def strip_suffixes(forms: list[str]) -> list[str]:
            return [
                form[: len(form) - len(old)] + new
                for form in forms
                for old, new in self.SUFFIX_RULES[pos]
                if form.endswith(old)
            ]

        exceptional = self._exceptions[pos].get(word)
        if exceptional is not None:
            return keep_known([word, *exceptional])

        forms = strip_suffixes([word])
        results = keep_known([word] + forms)
        if results:
            return results
        while forms:
            forms = strip_suffixes(forms)
            results = keep_known(forms)
            if results:
                return results
        return []

    def _base_uncached(self, word: str, pos: str) -> str:
        candidates = self._candidates(word, pos)
        return min(candidates, key=len) if candidates else word

    def lemma(self, word: str, pos: str) -> str:
        """Base form of word for the given part of speech ("noun"/"verb")."""
        return self._base(word, pos)

    def __call__(self, tokens: list[str]) -> list[str]:
        """Noun pass followed by a verb pass on each token."""
        return [self._base(self._base(t, "noun"), "verb") for t in tokens]


def lemmatize(tokens: list[str]) -> list[str]:
    """Reduce tokens with the bundled lemmatizer (noun pass, then verb pass)."""
    return Lemmatizer.bundled()(tokens)


def preprocess(raw: str) -> list[str]:
    """Full pipeline: normalize, tokenize, drop stop words, lemmatize."""
    return lemmatize(remove_stopwords(tokenize(normalize_text(raw))))


@dataclass(frozen=True)
class PreprocessConfig:
    """Fingerprint binding a model to the data assets that shaped its features."""

    stopwords_sha256: str
    lemma_data_sha256: str
    pipeline_version: int = PIPELINE_VERSION

    def to_dict(self) -> dict:
        return {
            "stopwords_sha256": self.stopwords_sha256,
            "lemma_data_sha256": self.lemma_data_sha256,
            "pipeline_version": self.pipeline_version,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "PreprocessConfig":
        return cls(
            stopwords_sha256=str(raw["stopwords_sha256"]),
            lemma_data_sha256=str(raw["lemma_data_sha256"]),
            pipeline_version=int(raw["pipeline_version"]),
        )


@lru_cache(maxsize=1)
def active_config() -> PreprocessConfig:
    """Fingerprints of the assets currently bundled with the package."""
    stop_hash = hashlib.sha256(_asset_bytes("stopwords.txt")).hexdigest()
    lemma = hashlib.sha256()
    for name in _LEMMA_ASSETS:
        digest = hashlib.sha256(_asset_bytes(name)).hexdigest()
        lemma.update(f"{name}\0{digest}\n".encode("ascii"))
    return PreprocessConfig(stop_hash, lemma.hexdigest())
