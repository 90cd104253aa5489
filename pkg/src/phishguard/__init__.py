"""Phishing email classification: preprocessing, TF-IDF features, Naive
Bayes and logistic-regression models, evaluation, persistence, and serving."""

from .ingest import ClassLabel, CorpusStats, DatasetSchema, RawEmail
from .models import LogisticModel, NaiveBayesModel, Prediction
from .modelstore import ModelBundle
from .preprocess import PreprocessConfig
from .preprocess import preprocess as preprocess_text
from .vectorize import IdfMode, SparseVector, TfidfConfig, Vocabulary

__version__ = "0.1.0"

__all__ = [
    "ClassLabel",
    "CorpusStats",
    "DatasetSchema",
    "IdfMode",
    "LogisticModel",
    "ModelBundle",
    "NaiveBayesModel",
    "Prediction",
    "PreprocessConfig",
    "RawEmail",
    "SparseVector",
    "TfidfConfig",
    "Vocabulary",
    "preprocess_text",
    "__version__",
]
