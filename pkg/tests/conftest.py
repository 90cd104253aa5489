import pytest

from phishguard import modelstore, preprocess
from phishguard.evaluate import ModelConfigs, SplitSpec, run_experiment
from phishguard.ingest import ClassLabel, RawEmail
from phishguard.vectorize import TfidfConfig

LEGIT = ClassLabel.LEGITIMATE
PHISH = ClassLabel.PHISHING

LEGIT_WORDS = [
    "meeting", "agenda", "quarterly", "report", "timeline", "budget",
    "review", "schedule", "minutes", "presentation", "deadline", "team",
]
PHISH_WORDS = [
    "winner", "prize", "claim", "urgent", "verify", "suspended",
    "lottery", "bitcoin", "refund", "unlock", "expires", "bonus",
]


def separable_corpus(n_per_class: int = 100, seed: int = 7) -> list[RawEmail]:
    """Synthetic emails whose classes use disjoint vocabularies."""
    import random

    rng = random.Random(seed)
    corpus = []
    for label, words in ((LEGIT, LEGIT_WORDS), (PHISH, PHISH_WORDS)):
        for _ in range(n_per_class):
            body = " ".join(rng.choice(words) for _ in range(rng.randint(6, 14)))
            corpus.append(RawEmail(body, label, "synthetic"))
    return corpus


@pytest.fixture(scope="session")
def separable_result():
    corpus = separable_corpus()
    return run_experiment(
        corpus,
        SplitSpec(train_fraction=0.8, seed=42),
        TfidfConfig(max_features=500, min_df=2, max_df=1.0),
        ModelConfigs(),
    )


@pytest.fixture(scope="session")
def lr_bundle(separable_result):
    return modelstore.ModelBundle(
        preprocess_config=preprocess.active_config(),
        vocab=separable_result.vocab,
        model=separable_result.lr_model,
        created_at="2026-01-01T00:00:00Z",
    )


@pytest.fixture(scope="session")
def nb_bundle(separable_result):
    return modelstore.ModelBundle(
        preprocess_config=preprocess.active_config(),
        vocab=separable_result.vocab,
        model=separable_result.nb_model,
        created_at="2026-01-01T00:00:00Z",
    )
