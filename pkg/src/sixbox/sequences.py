"""Seeded draw-sequence generation, run splitting, and sequence files.

Sequences are plain records of Black/White draws.  Generation is fully
deterministic given (model, box, n, seed): draws come from numpy's PCG64
generator, mapping each uniform variate u in [0, 1) to White iff
u < propensity.  The file format is newline-delimited ASCII 0/1, with an
optional header; the spreadsheet-style two-column variant (index column
plus a column named ``x``) produced by common statistics tools is also
accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from sixbox.model import BoxModel, Color, SequenceSummary

__all__ = [
    "Provenance",
    "ObservationSequence",
    "RunPartition",
    "SequenceFileError",
    "SequenceParseError",
    "EmptySequenceFileError",
    "generate",
    "split_runs",
    "read_sequence",
    "write_sequence",
]


class SequenceFileError(ValueError):
    """Base class for sequence-file problems."""


class SequenceParseError(SequenceFileError):
    """A token that is not 0, 1, or a recognized header."""

    def __init__(self, path: str | Path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class EmptySequenceFileError(SequenceFileError):
    """File contains no draw values at all."""

    def __init__(self, path: str | Path):
        super().__init__(f"{path}: no draw values found")
        self.path = str(path)


@dataclass(frozen=True)
class Provenance:
    """Where a sequence came from: generated, loaded from a file, or live play."""

    kind: str
    box: int | None = None
    seed: int | None = None
    path: str | None = None

    @classmethod
    def generated(cls, box: int, seed: int) -> "Provenance":
        return cls(kind="generated", box=box, seed=seed)

    @classmethod
    def loaded(cls, path: str | Path) -> "Provenance":
        return cls(kind="loaded", path=str(path))

    @classmethod
    def live(cls) -> "Provenance":
        return cls(kind="live")


@dataclass(frozen=True)
class ObservationSequence:
    """An ordered record of draws plus its provenance."""

    draws: tuple[Color, ...]
    provenance: Provenance

    def __len__(self) -> int:
        return len(self.draws)

    def __iter__(self) -> Iterator[Color]:
        return iter(self.draws)

    def __getitem__(self, index: int) -> Color:
        return self.draws[index]

    def summary(self) -> SequenceSummary:
        return SequenceSummary(n=len(self.draws), x=sum(int(d) for d in self.draws))

    def prefix(self, k: int) -> "ObservationSequence":
        """The first k draws, same provenance."""
        return ObservationSequence(self.draws[:k], self.provenance)


@dataclass(frozen=True)
class RunPartition:
    """A sequence chopped into consecutive runs of fixed length.

    All runs have exactly ``run_length`` draws except possibly the last,
    which keeps the remainder; concatenating the runs restores the source.
    """

    run_length: int
    runs: tuple[ObservationSequence, ...]


def generate(
    model: BoxModel, box: int, n: int, seed: int
) -> ObservationSequence:
    """Draw n balls (with replacement) from the given box, reproducibly.

    Identical (model.m, box, n, seed) always produce the identical
    sequence, on any platform: PCG64 streams are specified independent of
    OS and word size.
    """
    model.check_box(box)
    if n < 0:
        raise ValueError(f"cannot draw {n} balls")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(n)
    draws = tuple(Color(int(b)) for b in u < model.propensities[box])
    return ObservationSequence(draws, Provenance.generated(box, seed))


def split_runs(seq: ObservationSequence, run_length: int = 100) -> RunPartition:
    """Partition ``seq`` into runs of ``run_length`` draws for independent analysis."""
    if run_length < 1:
        raise ValueError(f"run length must be positive, got {run_length}")
    runs = tuple(
        ObservationSequence(seq.draws[start : start + run_length], seq.provenance)
        for start in range(0, len(seq), run_length)
    )
    return RunPartition(run_length=run_length, runs=runs)


def _strip_quotes(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == '"' and token[-1] == '"':
        return token[1:-1]
    return token


def _is_int(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return False
    return True


def read_sequence(path: str | Path) -> ObservationSequence:
    """Parse a draw-sequence file.

    Accepted layouts:

    * one 0/1 value per line, optionally preceded by a single header line;
    * comma-separated rows with a header naming a column ``x`` (the usual
      spreadsheet export: quoted row index first, draw value under x).

    Any other token raises :class:`SequenceParseError` with its line
    number; a file with no draw values raises
    :class:`EmptySequenceFileError`.
    """
    path = Path(path)
    lines = path.read_text(encoding="ascii").splitlines()
    numbered = [(k + 1, line.strip()) for k, line in enumerate(lines) if line.strip()]
    if not numbered:
        raise EmptySequenceFileError(path)

    first_no, first = numbered[0]
    tokens = [_strip_quotes(t) for t in first.split(",")]
    value_col = 0
    start = 0
    if not all(_is_int(t) for t in tokens):
        # header line: locate the draw column
        if "x" in tokens:
            value_col = tokens.index("x")
        elif len(tokens) == 1:
            value_col = 0
        else:
            raise SequenceParseError(
                path, first_no, f"multi-column header without an 'x' column: {first!r}"
            )
        start = 1
    elif len(tokens) != 1:
        raise SequenceParseError(
            path, first_no, "multi-column data requires a header naming column 'x'"
        )

    draws: list[Color] = []
    for line_no, line in numbered[start:]:
        fields = [_strip_quotes(t) for t in line.split(",")]
        if value_col >= len(fields):
            raise SequenceParseError(
                path, line_no, f"expected at least {value_col + 1} columns: {line!r}"
            )
        token = fields[value_col]
        if token == "0":
            draws.append(Color.BLACK)
        elif token == "1":
            draws.append(Color.WHITE)
        else:
            raise SequenceParseError(
                path, line_no, f"expected draw value 0 or 1, got {token!r}"
            )
    if not draws:
        raise EmptySequenceFileError(path)
    return ObservationSequence(tuple(draws), Provenance.loaded(path))


def write_sequence(seq: ObservationSequence, path: str | Path) -> None:
    """Write one 0/1 digit per line; the inverse of :func:`read_sequence`."""
    path = Path(path)
    path.write_text("".join(f"{int(d)}\n" for d in seq.draws), encoding="ascii")
