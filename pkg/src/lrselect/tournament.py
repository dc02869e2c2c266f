"""Selection among k > 2 models by running every pairwise comparison.

Each unordered pair (A, B) with A < B lexicographically is decided by a
two-model test; H1 credits A, H2 credits B, H0 credits nobody.  The model
with the most wins is selected, ties going to the lexicographically first id.
"""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Mapping, Sequence

from .censor import sign_decide_wta
from .lrt import Decision, Outcome, threshold_decide_lab
from .scores import ScoreSet, llr_samples, read_score_file

Pair = tuple[str, str]

_PAIR_FILE = re.compile(r"^(?P<a>.+?)__(?P<b>.+)\.csv$")


class TournamentError(ValueError):
    pass


def pairwise_schedule(model_ids: Sequence[str]) -> list[Pair]:
    """All unordered pairs, each as (smaller id, larger id), in lexicographic order."""
    ids = list(model_ids)
    if len(ids) < 2:
        raise TournamentError(f"need at least two models, got {len(ids)}")
    if len(set(ids)) != len(ids):
        dupes = sorted({m for m in ids if ids.count(m) > 1})
        raise TournamentError(f"duplicate model ids: {', '.join(dupes)}")
    return list(itertools.combinations(sorted(ids), 2))


@dataclass(frozen=True)
class PairwiseScoreTable:
    """Per-pair score sets.  ``pair_scores[(A, B)]`` has loglik_1 for A and loglik_2 for B."""

    model_ids: tuple[str, ...]
    pair_scores: Mapping[Pair, ScoreSet]

    def __post_init__(self):
        object.__setattr__(self, "model_ids", tuple(sorted(self.model_ids)))
        expected = pairwise_schedule(self.model_ids)
        missing = [p for p in expected if p not in self.pair_scores]
        if missing:
            a, b = missing[0]
            raise TournamentError(f"missing scores for pair ({a}, {b})")
        extra = set(self.pair_scores) - set(expected)
        if extra:
            a, b = sorted(extra)[0]
            raise TournamentError(f"unexpected pair ({a}, {b}); pairs must be (smaller id, larger id)")
        for pair, scores in self.pair_scores.items():
            if len(scores) == 0:
                raise TournamentError(f"empty score set for pair ({pair[0]}, {pair[1]})")


@dataclass(frozen=True)
class TournamentResult:
    win_counts: dict[str, int]
    winner: str
    tied: bool
    per_pair_decisions: list[tuple[Pair, Decision]]

    def as_dict(self) -> dict:
        return {
            "win_counts": dict(sorted(self.win_counts.items())),
            "winner": self.winner,
            "tied": self.tied,
            "pairs": [{"pair": list(pair), **d.as_dict()} for pair, d in self.per_pair_decisions],
        }


def _decide(scores: ScoreSet, method: str, tau: float) -> Decision:
    samples = llr_samples(scores)
    if method == "sup":
        return threshold_decide_lab(samples, tau)
    if method == "semi_sup":
        return sign_decide_wta(samples)
    raise TournamentError(f"unknown method {method!r}; expected 'sup' or 'semi_sup'")


def run_tournament(table: PairwiseScoreTable, method: str = "semi_sup", tau: float = 0.0,
                   workers: int = 1) -> TournamentResult:
    """Decide every pair and count wins.

    ``method`` is ``"sup"`` (summed LLR against ``tau``) or ``"semi_sup"``
    (winner-takes-all sign test).
    """
    if method not in ("sup", "semi_sup"):
        raise TournamentError(f"unknown method {method!r}; expected 'sup' or 'semi_sup'")
    schedule = pairwise_schedule(table.model_ids)

    def decide(pair):
        try:
            return _decide(table.pair_scores[pair], method, tau)
        except ValueError as exc:
            raise TournamentError(f"pair ({pair[0]}, {pair[1]}): {exc}") from exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            decisions = list(pool.map(decide, schedule))
    else:
        decisions = [decide(pair) for pair in schedule]

    wins = {m: 0 for m in table.model_ids}
    for (a, b), d in zip(schedule, decisions):
        if d.outcome is Outcome.H1:
            wins[a] += 1
        elif d.outcome is Outcome.H2:
            wins[b] += 1
    best = max(wins.values())
    leaders = [m for m in table.model_ids if wins[m] == best]
    return TournamentResult(wins, leaders[0], len(leaders) > 1, list(zip(schedule, decisions)))


def pair_filename(a: str, b: str) -> str:
    a, b = sorted((a, b))
    return f"{a}__{b}.csv"


def load_pairwise_dir(directory: str | PathLike, model_ids: Sequence[str] | None = None
                      ) -> PairwiseScoreTable:
    """Load ``<idA>__<idB>.csv`` score files (ids sorted in the name).

    Model ids default to every id mentioned by a file name.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise TournamentError(f"{directory} is not a directory")
    found: dict[Pair, Path] = {}
    for path in sorted(directory.iterdir()):
        m = _PAIR_FILE.match(path.name)
        if not m or not path.is_file():
            continue
        a, b = m.group("a"), m.group("b")
        if not a < b:
            raise TournamentError(f"{path.name}: ids in a pair file name must be sorted")
        found[(a, b)] = path
    ids = sorted(set(model_ids) if model_ids else {m for pair in found for m in pair})
    if len(ids) < 2:
        raise TournamentError(f"no pair score files found in {directory}")
    scores = {}
    for a, b in pairwise_schedule(ids):
        if (a, b) not in found:
            raise TournamentError(
                f"missing score file for pair ({a}, {b}): expected {directory / pair_filename(a, b)}")
        try:
            scores[(a, b)] = read_score_file(found[(a, b)])
        except ValueError as exc:
            raise TournamentError(f"pair ({a}, {b}): {exc}") from exc
    return PairwiseScoreTable(tuple(ids), scores)
