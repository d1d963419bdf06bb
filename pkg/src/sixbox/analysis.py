"""Trajectories, likelihood anatomies, odds tables, and side demonstrations.

This layer turns the kernel's single-step operations into the tables a
reader actually studies: the step-by-step inferential story of a
sequence, the summary-vs-sequence likelihood comparison, all pairwise
betting odds, the quality of the closed-form decay approximations, and
the probability that a Gaussian draw rounds to a given many-decimal
value.  CSV and JSON emitters for each table live here too.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import IO, Any

import numpy as np

from sixbox.model import (
    IMPOSSIBLE,
    BoxModel,
    Color,
    LogPosterior,
    SequenceSummary,
    approx_posterior_all_black,
    approx_predictive_all_black,
    binomial_log_likelihood,
    frequency_estimate,
    laplace_rule,
    posterior_from_summary,
    posterior_update,
    predictive_white,
    sequence_log_likelihood,
    uniform_prior,
)
from sixbox.sequences import ObservationSequence

__all__ = [
    "TrajectoryPoint",
    "LikelihoodAnatomy",
    "OddsTable",
    "trajectory",
    "anatomy",
    "odds_table",
    "gaussian_tiny_chance",
    "approximation_report",
    "ApproximationRow",
    "trajectory_to_csv",
    "trajectory_records",
    "anatomy_to_csv",
    "anatomy_records",
    "odds_to_csv",
    "odds_records",
    "approximation_report_to_csv",
    "approximation_report_records",
    "jsonable",
    "dump_json",
]

# Smallest linear probability stored on trajectory points; true exact
# zeros stay 0.  Keeps log-scale plot data finite without inventing mass.
LINEAR_FLOOR = 1e-300


@dataclass(frozen=True)
class TrajectoryPoint:
    """Snapshot after the first ``step`` draws of a sequence.

    ``posterior`` is linear-domain (floored at LINEAR_FLOOR, exact zeros
    preserved); ``log_posterior`` carries the same weights in natural
    logs with None marking excluded boxes, ready for log-ordinate plots.
    """

    step: int
    observed: Color
    posterior: tuple[float, ...]
    log_posterior: tuple[float | None, ...]
    predictive_white: float
    frequency_white: float | None
    laplace_white: float


@dataclass(frozen=True)
class LikelihoodAnatomy:
    """Per-box posterior next to both likelihood readings of (n, x).

    ``binomial_likelihood`` is the probability of the summary (x White
    in n draws, any order); ``sequence_likelihood`` is the probability
    of the one sequence actually observed.  They differ by exactly
    C(n, x), which cancels in the posterior.
    """

    summary: SequenceSummary
    posterior: tuple[float, ...]
    binomial_likelihood: tuple[float, ...]
    sequence_likelihood: tuple[float, ...]


@dataclass(frozen=True)
class OddsTable:
    """All pairwise betting odds P(seq | box i) / P(seq | box j).

    ``odds[i][j]`` is an extended real: +inf when only j is excluded, 0
    when only i is, NaN for the indeterminate both-excluded pairs, and 1
    on the diagonal.
    """

    summary: SequenceSummary
    odds: np.ndarray

    def __post_init__(self) -> None:
        self.odds.setflags(write=False)


def trajectory(
    seq: ObservationSequence, prior: LogPosterior
) -> list[TrajectoryPoint]:
    """Fold the sequence one draw at a time, recording every intermediate state.

    Point k reflects the first k draws; the final point agrees with the
    batch update from the full summary, since (n, x) is sufficient.
    """
    points: list[TrajectoryPoint] = []
    beliefs = prior
    whites = 0
    for step, obs in enumerate(seq, start=1):
        beliefs = posterior_update(beliefs, obs)
        whites += int(obs)
        summary = SequenceSummary(n=step, x=whites)
        points.append(
            TrajectoryPoint(
                step=step,
                observed=Color(obs),
                posterior=_linear(beliefs.log_weights),
                log_posterior=_log_or_none(beliefs.log_weights),
                predictive_white=predictive_white(beliefs),
                frequency_white=frequency_estimate(summary),
                laplace_white=laplace_rule(summary),
            )
        )
    return points


def _linear(log_weights: np.ndarray) -> tuple[float, ...]:
    return tuple(
        0.0 if lw == IMPOSSIBLE else max(math.exp(lw), LINEAR_FLOOR)
        for lw in log_weights
    )


def _log_or_none(log_weights: np.ndarray) -> tuple[float | None, ...]:
    return tuple(None if lw == IMPOSSIBLE else float(lw) for lw in log_weights)


def anatomy(summary: SequenceSummary, model: BoxModel) -> LikelihoodAnatomy:
    """Posterior, summary likelihood, and sequence likelihood for every box."""
    post = posterior_from_summary(uniform_prior(model), summary)
    boxes = range(model.num_boxes)
    seq_ll = [sequence_log_likelihood(model, i, summary) for i in boxes]
    bin_ll = [binomial_log_likelihood(model, i, summary) for i in boxes]
    return LikelihoodAnatomy(
        summary=summary,
        posterior=tuple(float(p) for p in post.probabilities),
        binomial_likelihood=tuple(_exp0(ll) for ll in bin_ll),
        sequence_likelihood=tuple(_exp0(ll) for ll in seq_ll),
    )


def _exp0(ll: float) -> float:
    return 0.0 if ll == IMPOSSIBLE else math.exp(ll)


def odds_table(summary: SequenceSummary, model: BoxModel) -> OddsTable:
    """Assemble every pairwise likelihood ratio into one matrix.

    Unlike the scalar ratio, both-excluded pairs do not raise here: a
    matrix cell has to hold something, and NaN is the honest value for
    0/0 odds.
    """
    k = model.num_boxes
    ll = [sequence_log_likelihood(model, i, summary) for i in range(k)]
    odds = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            if i == j:
                odds[i, j] = 1.0
            elif ll[i] == IMPOSSIBLE and ll[j] == IMPOSSIBLE:
                odds[i, j] = math.nan
            elif ll[i] == IMPOSSIBLE:
                odds[i, j] = 0.0
            elif ll[j] == IMPOSSIBLE:
                odds[i, j] = math.inf
            else:
                try:
                    odds[i, j] = math.exp(ll[i] - ll[j])
                except OverflowError:
                    odds[i, j] = math.inf
    return OddsTable(summary=summary, odds=odds)


_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
# Below this interval width, a naive CDF difference has lost every digit;
# switch to the density-based expansion.
_SERIES_WIDTH = 1e-8


def gaussian_tiny_chance(value: float, decimals: int) -> float:
    """Probability that a standard Gaussian draw rounds to ``value`` at ``decimals`` places.

    That is the mass of [value - d, value + d] with d = 10^-decimals / 2.
    For the vanishingly narrow intervals this is about, the CDF
    difference is evaluated as density times width with a second-order
    correction; wider intervals use a complementary-error-function
    difference folded onto the tail, where erfc keeps relative accuracy.
    """
    if not math.isfinite(value):
        raise ValueError(f"value must be finite, got {value}")
    if decimals < 1:
        raise ValueError(f"decimals must be >= 1, got {decimals}")
    half = 10.0 ** (-decimals) / 2.0
    v = abs(value)  # interval mass is symmetric in the center's sign
    if 2.0 * half < _SERIES_WIDTH:
        density = _INV_SQRT_2PI * math.exp(-0.5 * v * v)
        return 2.0 * half * density * (1.0 + half * half * (v * v - 1.0) / 6.0)
    return 0.5 * (math.erfc((v - half) / _SQRT2) - math.erfc((v + half) / _SQRT2))


@dataclass(frozen=True)
class ApproximationRow:
    """Exact vs closed-form values after ``n`` straight Blacks.

    Covers boxes 0..m-1 only; the all-White box is a hard zero under
    this data, so its exact/approx ratio would be 0/0.
    """

    n: int
    exact_posterior: tuple[float, ...]
    approx_posterior: tuple[float, ...]
    posterior_ratio: tuple[float, ...]
    exact_predictive: float
    approx_predictive: float
    predictive_ratio: float


def approximation_report(model: BoxModel, max_n: int) -> list[ApproximationRow]:
    """Tabulate approximation quality for n = 0..max_n straight Blacks."""
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    prior = uniform_prior(model)
    rows = []
    for n in range(max_n + 1):
        post = posterior_from_summary(prior, SequenceSummary(n=n, x=0))
        exact_p = post.probabilities[: model.m]
        approx_p = [approx_posterior_all_black(model, i, n) for i in range(model.m)]
        exact_pred = predictive_white(post)
        approx_pred = approx_predictive_all_black(model, n)
        rows.append(
            ApproximationRow(
                n=n,
                exact_posterior=tuple(float(p) for p in exact_p),
                approx_posterior=tuple(approx_p),
                posterior_ratio=tuple(
                    float(e) / a for e, a in zip(exact_p, approx_p)
                ),
                exact_predictive=exact_pred,
                approx_predictive=approx_pred,
                predictive_ratio=exact_pred / approx_pred,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# table emission: CSV (scientific notation, >= 7 significant digits) and
# JSON records mirroring the dataclasses


def _fmt(v: float | int | None) -> str:
    """CSV cell: exact zeros as 0, excluded as empty, else 10-digit scientific."""
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    if v == 0.0:
        return "0"
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf"
    return f"{v:.9e}"


def jsonable(v: Any) -> Any:
    """Make a value strict-JSON safe: exact float zeros become integer 0,
    non-finite floats become "inf"/"-inf" strings or None (NaN)."""
    if isinstance(v, float):
        if v == 0.0:
            return 0
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, Color):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [jsonable(item) for item in v]
    if isinstance(v, dict):
        return {k: jsonable(item) for k, item in v.items()}
    if isinstance(v, np.ndarray):
        return [jsonable(float(item)) for item in v]
    return v


def dump_json(records: Any, out: IO[str]) -> None:
    json.dump(jsonable(records), out, indent=2)
    out.write("\n")


def trajectory_to_csv(points: list[TrajectoryPoint], out: IO[str]) -> None:
    if points:
        k = len(points[0].posterior)
    else:
        k = 0
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["step", "observed"]
        + [f"posterior_{i}" for i in range(k)]
        + [f"log_posterior_{i}" for i in range(k)]
        + ["predictive_white", "frequency_white", "laplace_white"]
    )
    for p in points:
        writer.writerow(
            [p.step, int(p.observed)]
            + [_fmt(v) for v in p.posterior]
            + [_fmt(v) for v in p.log_posterior]
            + [_fmt(p.predictive_white), _fmt(p.frequency_white), _fmt(p.laplace_white)]
        )


def trajectory_records(points: list[TrajectoryPoint]) -> list[dict[str, Any]]:
    return [
        {
            "step": p.step,
            "observed": int(p.observed),
            "posterior": list(p.posterior),
            "logPosterior": list(p.log_posterior),
            "predictiveWhite": p.predictive_white,
            "frequencyWhite": p.frequency_white,
            "laplaceWhite": p.laplace_white,
        }
        for p in points
    ]


def anatomy_to_csv(result: LikelihoodAnatomy, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["box", "posterior", "binomial_likelihood", "sequence_likelihood"])
    for i, (p, b, s) in enumerate(
        zip(result.posterior, result.binomial_likelihood, result.sequence_likelihood)
    ):
        writer.writerow([i, _fmt(p), _fmt(b), _fmt(s)])


def anatomy_records(result: LikelihoodAnatomy) -> dict[str, Any]:
    return {
        "summary": {"n": result.summary.n, "x": result.summary.x},
        "perBox": [
            {
                "box": i,
                "posterior": p,
                "binomialLikelihood": b,
                "sequenceLikelihood": s,
            }
            for i, (p, b, s) in enumerate(
                zip(
                    result.posterior,
                    result.binomial_likelihood,
                    result.sequence_likelihood,
                )
            )
        ],
    }


def odds_to_csv(table: OddsTable, out: IO[str]) -> None:
    k = table.odds.shape[0]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["box"] + [f"vs_{j}" for j in range(k)])
    for i in range(k):
        writer.writerow([i] + [_fmt(float(v)) for v in table.odds[i]])


def odds_records(table: OddsTable) -> dict[str, Any]:
    return {
        "summary": {"n": table.summary.n, "x": table.summary.x},
        "odds": [[float(v) for v in row] for row in table.odds],
    }


def approximation_report_to_csv(rows: list[ApproximationRow], out: IO[str]) -> None:
    if not rows:
        return
    k = len(rows[0].exact_posterior)
    writer = csv.writer(out, lineterminator="\n")
    header = ["n"]
    for i in range(k):
        header += [f"exact_{i}", f"approx_{i}", f"ratio_{i}"]
    header += ["exact_predictive", "approx_predictive", "predictive_ratio"]
    writer.writerow(header)
    for r in rows:
        cells: list[str] = [str(r.n)]
        for e, a, q in zip(r.exact_posterior, r.approx_posterior, r.posterior_ratio):
            cells += [_fmt(e), _fmt(a), _fmt(q)]
        cells += [
            _fmt(r.exact_predictive),
            _fmt(r.approx_predictive),
            _fmt(r.predictive_ratio),
        ]
        writer.writerow(cells)


def approximation_report_records(rows: list[ApproximationRow]) -> list[dict[str, Any]]:
    return [
        {
            "n": r.n,
            "exactPosterior": list(r.exact_posterior),
            "approxPosterior": list(r.approx_posterior),
            "posteriorRatio": list(r.posterior_ratio),
            "exactPredictive": r.exact_predictive,
            "approxPredictive": r.approx_predictive,
            "predictiveRatio": r.predictive_ratio,
        }
        for r in rows
    ]
