"""Bootstrap model selection for one-hidden-layer perceptrons and linear models."""

from .dataset import Dataset, read_csv, write_csv
from .datagen import GenSpec, gen_example1, gen_example2, generate
from .errors import (
    CsvParseError,
    DimensionError,
    ReplicateFailed,
    SingularDesignError,
    TrainingDiverged,
)
from .linreg import LinearSpec, fit_ols, predict_linear
from .mlp import (
    FittedMlp,
    MlpSpec,
    TrainConfig,
    fit_mlp,
    forward,
    gradient,
    mse,
    param_count,
    sigmoid,
    train,
)
from .resampling import ResamplePlan, Split, bootstrap_split, bootstrap_std, loo_split
from .selection import (
    ModelSpec,
    ReplicateResult,
    SelectionReport,
    evaluate_replicate,
    rank_models,
    residual_histogram,
    run_selection,
)

__version__ = "0.1.0"
