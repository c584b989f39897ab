"""Track regulatory acts published in official gazettes.

The pipeline: normalize scraped gazette acts, route the relevant ones to
expert review with a phrase-rule language, accumulate the reviewed
records into a curated tracker, train a Multinomial Naive Bayes model
over them, and evaluate it with stratified cross-validation. A small
HTTP service (and CLI) drives the daily loop.
"""

from .config import AppConfig, load_config
from .dataset import (
    DatasetStats,
    FineClass,
    GatRecord,
    GroupClass,
    compute_stats,
    export_gat,
    group_of,
    load_gat,
    parse_fine_class,
    parse_group_class,
)
from .errors import GaztrackError
from .evaluation import (
    ConfusionMatrix,
    CvReport,
    FoldAssignment,
    accuracy,
    evaluate_predictions,
    mcc,
    nb_trainer,
    run_cv,
    stratified_folds,
    weighted_f1,
)
from .features import Vocabulary, build_vocab, fold, tokenize, vectorize
from .ingest import NormalizedText, RawDocument, load_corpus, normalize
from .naive_bayes import (
    NbModel,
    PredictionFile,
    load_model,
    predict_nb,
    read_predictions,
    save_model,
    train_nb,
)
from .rules import (
    RuleSet,
    ThemeRule,
    format_rules,
    load_demo_rules,
    load_rules,
    match_spans,
    match_theme,
    parse_rules,
    pre_classify,
)
from .service import create_app
from .store import ReviewItem, ReviewStatus, Store
from .suggest import RefinementSuggestion, suggest_refinements

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "ConfusionMatrix",
    "CvReport",
    "DatasetStats",
    "FineClass",
    "FoldAssignment",
    "GatRecord",
    "GaztrackError",
    "GroupClass",
    "NbModel",
    "NormalizedText",
    "PredictionFile",
    "RawDocument",
    "RefinementSuggestion",
    "ReviewItem",
    "ReviewStatus",
    "RuleSet",
    "Store",
    "ThemeRule",
    "Vocabulary",
    "accuracy",
    "build_vocab",
    "compute_stats",
    "create_app",
    "evaluate_predictions",
    "export_gat",
    "fold",
    "format_rules",
    "group_of",
    "load_config",
    "load_corpus",
    "load_demo_rules",
    "load_gat",
    "load_model",
    "load_rules",
    "match_spans",
    "match_theme",
    "mcc",
    "nb_trainer",
    "normalize",
    "parse_fine_class",
    "parse_group_class",
    "parse_rules",
    "pre_classify",
    "predict_nb",
    "read_predictions",
    "run_cv",
    "save_model",
    "stratified_folds",
    "suggest_refinements",
    "tokenize",
    "train_nb",
    "vectorize",
    "weighted_f1",
]
