"""Exact probability kernel for the box-of-balls guessing game.

A box holds ``m`` balls, ``i`` of them White, so drawing White has
propensity ``i/m``.  Given a 0/1 (Black/White) draw record, the kernel
maintains a normalized belief over the ``m+1`` candidate compositions,
forecasts the next color, and compares hypotheses through likelihood
ratios.

All belief arithmetic happens in natural-log space.  Likelihoods of long
one-sided sequences shrink below 1e-60 and keep going, far past where
linear doubles underflow, so weights are stored as log-probabilities and
exponentiated only at the API boundary.  Probability exactly zero (a
composition logically excluded by an observation) is the distinguished
value ``IMPOSSIBLE`` (-inf): ``exp`` maps it to an exact 0.0 and adding
any finite log-likelihood leaves it -inf, which makes exclusion
absorbing by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

__all__ = [
    "IMPOSSIBLE",
    "LogProb",
    "BoxModel",
    "Color",
    "LogPosterior",
    "SequenceSummary",
    "ContradictoryEvidenceError",
    "IndeterminateOddsError",
    "uniform_prior",
    "sequence_log_likelihood",
    "binomial_log_likelihood",
    "log_binomial_coefficient",
    "posterior_from_summary",
    "posterior_update",
    "predictive_white",
    "laplace_rule",
    "frequency_estimate",
    "bayes_factor",
    "approx_posterior_all_black",
    "approx_predictive_all_black",
]

# Natural-log probability; IMPOSSIBLE marks probability exactly zero.
LogProb = float

IMPOSSIBLE: LogProb = float("-inf")


class ContradictoryEvidenceError(ValueError):
    """Every composition is excluded by the observations.

    Reachable only in degenerate models (m=1 after seeing both colors);
    never silently renormalized away.
    """


class IndeterminateOddsError(ValueError):
    """Odds requested between two hypotheses that are both impossible."""


class Color(IntEnum):
    """A draw outcome, encoded 0 for Black and 1 for White."""

    BLACK = 0
    WHITE = 1


@dataclass(frozen=True)
class BoxModel:
    """Hypothesis space: output ``m+1`` boxes, box ``i`` holding ``i`` White balls.

    Box propensities run in exact steps of ``1/m`` from 0 (all Black) to
    1 (all White).  The classic game uses ``m=5``, i.e. six boxes.
    """

    m: int = 5

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"need at least one ball per box, got m={self.m}")

    @property
    def num_boxes(self) -> int:
        return self.m + 1

    @property
    def propensities(self) -> np.ndarray:
        """P(White | box i) for i = 0..m, as a read-only float array."""
        return _propensities(self.m)

    def check_box(self, box: int) -> None:
        if not 0 <= box <= self.m:
            raise IndexError(f"box index {box} outside 0..{self.m}")


@lru_cache(maxsize=None)
def _propensities(m: int) -> np.ndarray:
    p = np.arange(m + 1, dtype=float) / m
    p.setflags(write=False)
    return p


@dataclass(frozen=True)
class SequenceSummary:
    """Sufficient statistic of a draw record: ``n`` draws, ``x`` of them White."""

    n: int
    x: int

    def __post_init__(self) -> None:
        if self.n < 0 or not 0 <= self.x <= self.n:
            raise ValueError(f"invalid summary n={self.n}, x={self.x}")


@dataclass(frozen=True, eq=False)
class LogPosterior:
    """Normalized belief over the boxes, held as natural-log weights.

    ``log_weights[i]`` is log P(box i); excluded boxes carry the exact
    value ``IMPOSSIBLE``.  The linear weights sum to 1 within 1e-12.
    """

    model: BoxModel
    log_weights: np.ndarray

    def __post_init__(self) -> None:
        if self.log_weights.shape != (self.model.num_boxes,):
            raise ValueError("log_weights length must be m+1")
        self.log_weights.setflags(write=False)

    @property
    def probabilities(self) -> np.ndarray:
        """Linear-domain weights; exact zeros for excluded boxes."""
        return np.exp(self.log_weights)

    def mode(self) -> int:
        """Index of the most probable box (lowest index on ties)."""
        return int(np.argmax(self.log_weights))


def _normalized(model: BoxModel, raw: np.ndarray) -> LogPosterior:
    """Renormalize raw log weights with log-sum-exp anchored at the max finite one."""
    finite = np.isfinite(raw)
    if not finite.any():
        raise ContradictoryEvidenceError(
            "all box compositions are excluded by the observations"
        )
    anchor = raw[finite].max()
    log_norm = anchor + math.log(np.exp(raw[finite] - anchor).sum())
    out = np.where(finite, raw - log_norm, IMPOSSIBLE)
    return LogPosterior(model, out)


def uniform_prior(model: BoxModel) -> LogPosterior:
    """Equal belief 1/(m+1) in every composition."""
    lw = np.full(model.num_boxes, -math.log(model.num_boxes))
    return LogPosterior(model, lw)


def sequence_log_likelihood(
    model: BoxModel, box: int, summary: SequenceSummary
) -> LogProb:
    """log P(one specific sequence with summary (n, x) | box).

    The sequence probability is ``pi^x * (1-pi)^(n-x)`` with ``pi`` the
    box propensity; no binomial coefficient, since a single concrete
    ordering is meant.  Returns ``IMPOSSIBLE`` when the box cannot have
    produced the counts (White from the all-Black box or vice versa) and
    exactly 0.0 for the empty record.
    """
    model.check_box(box)
    n, x = summary.n, summary.x
    if box == 0 and x > 0:
        return IMPOSSIBLE
    if box == model.m and x < n:
        return IMPOSSIBLE
    ll = 0.0
    if x > 0:
        ll += x * math.log(box / model.m)
    if n - x > 0:
        # complement computed as (m-box)/m, not 1 - box/m: one correctly
        # rounded division, no cancellation
        ll += (n - x) * math.log((model.m - box) / model.m)
    return ll


def log_binomial_coefficient(n: int, x: int) -> float:
    """log C(n, x), accurate to better than 1e-12 relative for n <= 1e4.

    When one side is short the coefficient is built as an exact integer:
    plain log-gamma differences cancel badly there (log C(1e4, 1) ~ 9
    out of lgamma terms ~8e4).  Elsewhere log C is large and the
    log-gamma route keeps full relative accuracy.
    """
    if min(x, n - x) <= 32:
        return math.log(math.comb(n, x))
    return math.lgamma(n + 1) - math.lgamma(x + 1) - math.lgamma(n - x + 1)


def binomial_log_likelihood(
    model: BoxModel, box: int, summary: SequenceSummary
) -> LogProb:
    """log P(x White in n draws | box): the sequence term plus log C(n, x)."""
    return log_binomial_coefficient(summary.n, summary.x) + sequence_log_likelihood(
        model, box, summary
    )


def _log_likelihood_row(model: BoxModel, summary: SequenceSummary) -> np.ndarray:
    return np.array(
        [sequence_log_likelihood(model, i, summary) for i in range(model.num_boxes)]
    )


def posterior_from_summary(
    prior: LogPosterior, summary: SequenceSummary
) -> LogPosterior:
    """Batch Bayes update of ``prior`` by a whole (n, x) record."""
    model = prior.model
    return _normalized(model, prior.log_weights + _log_likelihood_row(model, summary))


@lru_cache(maxsize=None)
def _log_step(m: int, color: Color) -> np.ndarray:
    """Per-box single-draw log-likelihood; -inf excludes the contradicted box."""
    with np.errstate(divide="ignore"):
        if color is Color.WHITE:
            step = np.log(_propensities(m))
        else:
            step = np.log(_propensities(m)[::-1])
    step.setflags(write=False)
    return step


def posterior_update(posterior: LogPosterior, obs: Color) -> LogPosterior:
    """Single-draw Bayes update.

    A White draw sends box 0 to probability exactly 0, a Black draw does
    the same to box m, and any pre-existing exact zero stays zero.
    """
    model = posterior.model
    raw = posterior.log_weights + _log_step(model.m, Color(obs))
    return _normalized(model, raw)


def predictive_white(posterior: LogPosterior) -> float:
    """P(next draw is White) = sum_i propensity_i * P(box i).

    Accumulated with an exactly rounded sum after exponentiating, so the
    tiny mixtures that arise after long all-Black records keep full
    relative precision.
    """
    terms = posterior.model.propensities * posterior.probabilities
    return math.fsum(terms)


def laplace_rule(summary: SequenceSummary) -> float:
    """Succession-rule forecast (x+1)/(n+2).

    Valid for a propensity uniform on [0, 1]; deliberately mis-applied
    here as the "Laplace" baseline the game is compared against.
    """
    return (summary.x + 1) / (summary.n + 2)


def frequency_estimate(summary: SequenceSummary) -> float | None:
    """Relative frequency x/n of White, or None before the first draw."""
    if summary.n == 0:
        return None
    return summary.x / summary.n


def bayes_factor(
    model: BoxModel, i: int, j: int, summary: SequenceSummary
) -> float:
    """Likelihood ratio P(seq | box i) / P(seq | box j), an extended real.

    Equals the posterior odds when the prior is uniform.  +inf when only
    box j is excluded, 0 when only box i is; i == j is 1 by identity even
    when both are excluded.
    """
    model.check_box(i)
    model.check_box(j)
    if i == j:
        return 1.0
    li = sequence_log_likelihood(model, i, summary)
    lj = sequence_log_likelihood(model, j, summary)
    if li == IMPOSSIBLE and lj == IMPOSSIBLE:
        raise IndeterminateOddsError(
            f"boxes {i} and {j} are both excluded; odds are indeterminate"
        )
    if li == IMPOSSIBLE:
        return 0.0
    if lj == IMPOSSIBLE:
        return math.inf
    try:
        return math.exp(li - lj)
    except OverflowError:
        return math.inf


def approx_posterior_all_black(model: BoxModel, i: int, n: int) -> float:
    """Closed-form large-n approximation of P(box i | n Blacks): ((m-i)/m)^n.

    Drops the normalizing sum, which tends to 1 as n grows.  Box m is
    rejected: its exact posterior is a hard zero after any Black.
    """
    model.check_box(i)
    if i == model.m:
        raise ValueError("all-White box is excluded by Black draws; no approximation")
    return ((model.m - i) / model.m) ** n


def approx_predictive_all_black(model: BoxModel, n: int) -> float:
    """Closed-form large-n approximation of P(White | n Blacks): (1/m) * ((m-1)/m)^n.

    Keeps only the dominant surviving mixture term, box 1.
    """
    return (1 / model.m) * ((model.m - 1) / model.m) ** n
