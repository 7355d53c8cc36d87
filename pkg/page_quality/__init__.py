from .base import (  # noqa
    BadStatus,
    BodyTooLarge,
    CorpusError,
    DimensionMismatch,
    Family,
    FeatureMismatch,
    FetchError,
    FetchTimeout,
    HAM,
    ImproperlyConfigured,
    PageQualityError,
    SPAM,
    TooManyRedirects,
    TrainingError,
    UrlParseError
)
from .corpus import (  # noqa
    generate_synthetic_corpus,
    load_corpus,
    PageRecord,
    read_feature_matrix,
    save_corpus,
    write_feature_matrix
)
from .experiment import (  # noqa
    ExperimentPlan,
    ExperimentTable,
    FAMILY_COMBOS,
    run_experiment,
    run_single,
    split
)
from .features import (  # noqa
    extract_content_features,
    extract_features,
    extract_link_features,
    extract_url_features,
    FEATURE_NAMES,
    FeatureExtractor,
    FeatureVector
)
from .fetcher import fetch, FetchResult  # noqa
from .lexicons import LexiconSet, load_lexicons  # noqa
from .metrics import ConfusionMatrix, confusion, MetricsReport, report  # noqa
from .network import (  # noqa
    bipolar_sigmoid,
    classify,
    forward,
    MlpModel,
    normalize,
    train,
    train_rprop,
    TrainingConfig
)
from .pages import PageDocument, parse_html  # noqa
from .urls import parse_url, SuffixTable, UrlParts  # noqa

__version__ = '0.1.0'
