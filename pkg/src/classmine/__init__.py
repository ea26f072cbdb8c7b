"""Classification mining toolkit: CSV datasets, filters, CFS, C4.5 trees, naive Bayes, evaluation."""

__version__ = "0.1.0"

from .dataset import (  # noqa: E402
    AttributeSpec,
    ClassDistribution,
    Dataset,
    class_distribution,
    load_csv,
    load_pima,
    parse_csv,
    to_csv,
)
from .errors import ClassMineError, DataValidationError, FitError, ParseError, SchemaError  # noqa: E402
from .evaluation import (  # noqa: E402
    BaselinePredictor,
    ConfusionMatrix,
    CrossValidation,
    EvaluationReport,
    PercentageSplit,
    confusion_matrix,
    evaluate,
    kappa,
    percentage_split,
    probabilistic_errors,
    stratified_folds,
)
from .feature_select import (  # noqa: E402
    FeatureSubset,
    best_first_select,
    build_correlation_cache,
    cfs_merit,
    mdl_discretize,
    symmetric_uncertainty,
)
from .naive_bayes import NaiveBayesModel, fit_nb, posterior  # noqa: E402
from .preprocess import (  # noqa: E402
    apply_impute,
    apply_normalize,
    descriptive_stats,
    fit_impute,
    fit_normalize,
)
from .tree import DecisionTree, TreeParams, build_tree, entropy, prune, split_gain  # noqa: E402
