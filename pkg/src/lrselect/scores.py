"""Paired per-utterance log-likelihood scores and the LLR samples derived from them.

Score files are line-oriented UTF-8 text::

    # optional header / comment lines start with '#'
    utt_0001,-1234.5,-1240.25
    utt_0002,-981.0,-979.5e0

Each data line is ``utterance_id,loglik_1,loglik_2``.  Log-likelihoods are
natural-log values; the test statistics are invariant to the base only up to a
positive scale factor, which leaves every decision unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Sequence

import numpy as np


class ScoreFileError(ValueError):
    """Raised for malformed score files.  ``line`` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ScoreRecord:
    utterance_id: str
    loglik_1: float
    loglik_2: float

    def __post_init__(self):
        if not self.utterance_id:
            raise ValueError("utterance_id must be non-empty")
        if not (math.isfinite(self.loglik_1) and math.isfinite(self.loglik_2)):
            raise ValueError(f"non-finite score for {self.utterance_id!r}")

    def swapped(self) -> "ScoreRecord":
        return ScoreRecord(self.utterance_id, self.loglik_2, self.loglik_1)


@dataclass(frozen=True)
class ScoreSet:
    """Ordered, immutable collection of score records with unique ids."""

    records: tuple[ScoreRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        for rec in self.records:
            if rec.utterance_id in seen:
                raise ValueError(f"duplicate utterance_id {rec.utterance_id!r}")
            seen.add(rec.utterance_id)

    @property
    def n(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def swapped(self) -> "ScoreSet":
        """The same scores with the roles of model 1 and model 2 exchanged."""
        return ScoreSet(tuple(r.swapped() for r in self.records))

    @classmethod
    def from_llrs(cls, llrs: Iterable[float], prefix: str = "u") -> "ScoreSet":
        """Build a ScoreSet whose records have the given LLRs (loglik_2 = 0)."""
        return cls(tuple(ScoreRecord(f"{prefix}{i}", float(v), 0.0)
                         for i, v in enumerate(llrs)))


@dataclass(frozen=True)
class LlrSample:
    utterance_id: str
    llr: float


@dataclass(frozen=True)
class SampleSummary:
    n: int
    sum: float
    mean: float
    sd: float | None  # None when n < 2
    pos_count: int
    neg_count: int
    zero_count: int


def _parse_float(field: str, lineno: int) -> float:
    try:
        value = float(field)
    except ValueError:
        raise ScoreFileError(f"non-numeric score {field.strip()!r}", lineno) from None
    if not math.isfinite(value):
        raise ScoreFileError(f"non-finite score {field.strip()!r}", lineno)
    return value


def parse_score_file(text: str | bytes) -> ScoreSet:
    """Parse score-file text into a :class:`ScoreSet`.

    Raises
    ------
    ScoreFileError
        On a wrong field count, non-numeric or non-finite score, duplicate
        utterance id, or when the file holds no data lines.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    records = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise ScoreFileError(f"expected 3 comma-separated fields, got {len(fields)}", lineno)
        uid = fields[0].strip()
        if not uid:
            raise ScoreFileError("empty utterance_id", lineno)
        if uid in seen:
            raise ScoreFileError(f"duplicate utterance_id {uid!r} (first seen on line {seen[uid]})",
                                 lineno)
        seen[uid] = lineno
        records.append(ScoreRecord(uid, _parse_float(fields[1], lineno),
                                   _parse_float(fields[2], lineno)))
    if not records:
        raise ScoreFileError("score file contains no data lines")
    return ScoreSet(tuple(records))


def read_score_file(path: str | PathLike) -> ScoreSet:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_score_file(data)
    except ScoreFileError as exc:
        raise ScoreFileError(f"{path}: {exc}") from None


def format_score_file(scores: ScoreSet, header: str | None = "utterance_id,loglik_1,loglik_2") -> str:
    lines = [f"# {header}"] if header else []
    lines += [f"{r.utterance_id},{r.loglik_1!r},{r.loglik_2!r}" for r in scores]
    return "\n".join(lines) + "\n"


def llr_samples(scores: ScoreSet) -> list[LlrSample]:
    """Per-utterance log-likelihood ratios ``loglik_1 - loglik_2``, in input order."""
    return [LlrSample(r.utterance_id, r.loglik_1 - r.loglik_2) for r in scores]


def llr_array(samples: Sequence[LlrSample] | Sequence[float] | np.ndarray) -> np.ndarray:
    """Coerce LLR samples (or plain floats) to a 1-d float array."""
    if isinstance(samples, np.ndarray):
        return samples.astype(float, copy=False).ravel()
    return np.array([s.llr if isinstance(s, LlrSample) else s for s in samples], dtype=float)


def summarize(samples) -> SampleSummary:
    x = llr_array(samples)
    n = x.size
    if n == 0:
        raise ValueError("cannot summarize an empty sample")
    total = math.fsum(x)
    mean = total / n
    sd = None
    if n >= 2:
        sd = math.sqrt(math.fsum((x - mean) ** 2) / (n - 1))
    return SampleSummary(
        n=n,
        sum=total,
        mean=mean,
        sd=sd,
        pos_count=int(np.count_nonzero(x > 0)),
        neg_count=int(np.count_nonzero(x < 0)),
        zero_count=int(np.count_nonzero(x == 0)),
    )
