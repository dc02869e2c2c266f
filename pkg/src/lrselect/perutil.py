"""Phone-sequence edit distance, phone error rate and oracle selection.

PER of a candidate is its edit distance to the closest reference divided by
that reference's length (``g w eh r ih l ax`` against ``g ax r ih l ax``:
two edits over six phones).  "Closest" is judged on the normalized rate.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from os import PathLike
from typing import Sequence


@dataclass(frozen=True)
class PhoneSeq:
    phones: tuple[str, ...]

    def __post_init__(self):
        phones = tuple(self.phones)
        if not phones:
            raise ValueError("a phone sequence needs at least one phone")
        for ph in phones:
            if not ph or any(c.isspace() for c in ph):
                raise ValueError(f"invalid phone symbol {ph!r}")
        object.__setattr__(self, "phones", phones)

    @classmethod
    def parse(cls, text: str) -> "PhoneSeq":
        return cls(tuple(text.split()))

    def __len__(self) -> int:
        return len(self.phones)

    def __str__(self) -> str:
        return " ".join(self.phones)


def _as_seq(x) -> PhoneSeq:
    return x if isinstance(x, PhoneSeq) else PhoneSeq.parse(x)


def phone_edit_distance(cand, ref) -> int:
    """Levenshtein distance with unit insertion, deletion and substitution costs."""
    a, b = _as_seq(cand).phones, _as_seq(ref).phones
    prev = list(range(len(b) + 1))
    for i, pa in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, pb in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (pa != pb))
        prev = cur
    return prev[-1]


def per(cand, refs: Sequence) -> float:
    """Phone error rate: smallest ``distance / len(ref)`` over the references.

    Taking the minimum of the normalized rates means extra references can
    only lower the PER.
    """
    if not refs:
        raise ValueError("at least one reference pronunciation is required")
    c = _as_seq(cand)
    return min(phone_edit_distance(c, r) / len(r) for r in map(_as_seq, refs))


@dataclass(frozen=True)
class Selection:
    index: int
    distance: int
    tied: bool


def _select(cands: Sequence, refs: Sequence, largest: bool) -> Selection:
    if not cands or not refs:
        raise ValueError("candidates and references must be non-empty")
    refs = [_as_seq(r) for r in refs]
    dists = [min(phone_edit_distance(_as_seq(c), r) for r in refs) for c in cands]
    target = max(dists) if largest else min(dists)
    hits = [i for i, d in enumerate(dists) if d == target]
    return Selection(hits[0], target, len(hits) > 1)


def oracle_select(cands: Sequence, refs: Sequence) -> Selection:
    """Candidate closest to any reference; ties go to the lowest index."""
    return _select(cands, refs, largest=False)


def anti_oracle_select(cands: Sequence, refs: Sequence) -> Selection:
    """Candidate farthest from the references; ties go to the lowest index."""
    return _select(cands, refs, largest=True)


class Lexicon(OrderedDict):
    """Mapping word -> list of reference :class:`PhoneSeq`."""

    def add(self, word: str, pron) -> None:
        self.setdefault(word, []).append(_as_seq(pron))


def _tab_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line.split("\t")


def read_lexicon(path: str | PathLike) -> Lexicon:
    """Read ``word<TAB>phone phone ...`` lines; repeated words accumulate references."""
    lex = Lexicon()
    for lineno, fields in _tab_lines(path):
        if len(fields) != 2:
            raise ValueError(f"{path}: line {lineno}: expected 'word<TAB>phones'")
        try:
            lex.add(fields[0].strip(), fields[1])
        except ValueError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return lex


@dataclass
class CandidateSet:
    word: str
    candidates: list[PhoneSeq]
    selected: int | None = None


def read_candidates(path: str | PathLike) -> list[CandidateSet]:
    """Read ``word<TAB>phones[<TAB>*]`` lines.

    Consecutive lines for one word list its candidates; a third column of
    ``*`` marks the candidate a selection method picked.
    """
    sets: OrderedDict[str, CandidateSet] = OrderedDict()
    for lineno, fields in _tab_lines(path):
        if len(fields) not in (2, 3):
            raise ValueError(f"{path}: line {lineno}: expected 'word<TAB>phones[<TAB>*]'")
        word = fields[0].strip()
        entry = sets.setdefault(word, CandidateSet(word, []))
        try:
            entry.candidates.append(PhoneSeq.parse(fields[1]))
        except ValueError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from None
        if len(fields) == 3 and fields[2].strip():
            if fields[2].strip() != "*":
                raise ValueError(f"{path}: line {lineno}: selection marker must be '*'")
            if entry.selected is not None:
                raise ValueError(f"{path}: line {lineno}: word {word!r} has two selected candidates")
            entry.selected = len(entry.candidates) - 1
    return list(sets.values())
