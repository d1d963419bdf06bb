"""Sequential Bayesian inference for the box-of-balls guessing game.

The library infers which of ``m+1`` box compositions produced a Bernoulli
sequence of Black/White draws, forecasts the next color, and compares the
probability-theory answer against the relative-frequency and
rule-of-succession baselines.  Everything runs in underflow-safe
natural-log arithmetic with exact, absorbing zeros for logically excluded
compositions.
"""

from sixbox.model import (
    IMPOSSIBLE,
    BoxModel,
    Color,
    ContradictoryEvidenceError,
    IndeterminateOddsError,
    LogPosterior,
    LogProb,
    SequenceSummary,
    approx_posterior_all_black,
    approx_predictive_all_black,
    bayes_factor,
    binomial_log_likelihood,
    frequency_estimate,
    laplace_rule,
    log_binomial_coefficient,
    posterior_from_summary,
    posterior_update,
    predictive_white,
    sequence_log_likelihood,
    uniform_prior,
)
from sixbox.sequences import (
    EmptySequenceFileError,
    ObservationSequence,
    Provenance,
    RunPartition,
    SequenceFileError,
    SequenceParseError,
    generate,
    read_sequence,
    split_runs,
    write_sequence,
)
from sixbox.analysis import (
    LikelihoodAnatomy,
    OddsTable,
    TrajectoryPoint,
    anatomy,
    approximation_report,
    gaussian_tiny_chance,
    odds_table,
    trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "IMPOSSIBLE",
    "BoxModel",
    "Color",
    "ContradictoryEvidenceError",
    "IndeterminateOddsError",
    "LogPosterior",
    "LogProb",
    "SequenceSummary",
    "approx_posterior_all_black",
    "approx_predictive_all_black",
    "bayes_factor",
    "binomial_log_likelihood",
    "frequency_estimate",
    "laplace_rule",
    "log_binomial_coefficient",
    "posterior_from_summary",
    "posterior_update",
    "predictive_white",
    "sequence_log_likelihood",
    "uniform_prior",
    "EmptySequenceFileError",
    "ObservationSequence",
    "Provenance",
    "RunPartition",
    "SequenceFileError",
    "SequenceParseError",
    "generate",
    "read_sequence",
    "split_runs",
    "write_sequence",
    "LikelihoodAnatomy",
    "OddsTable",
    "TrajectoryPoint",
    "anatomy",
    "approximation_report",
    "gaussian_tiny_chance",
    "odds_table",
    "trajectory",
    "__version__",
]
