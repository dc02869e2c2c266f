import itertools
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from lrselect.perutil import (PhoneSeq, anti_oracle_select, oracle_select, per,
                              phone_edit_distance, read_candidates, read_lexicon)

GUERILLA = ["g ax r ax l ax", "g w eh r ih l ax"]
GUERILLA_REF = ["g ax r ih l ax"]
TORNADOS = ["t er n ey d ow z", "t ao r n ey d ow s"]
TORNADOS_REF = ["t er n ey d ow z", "t ow r n ey d ow z"]


def brute_distance(a, b):
    """Levenshtein distance straight from its recursive definition."""

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 or j == 0:
            return i + j
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def test_phone_seq_validation():
    assert len(PhoneSeq.parse("  a  b c ")) == 3
    with pytest.raises(ValueError):
        PhoneSeq.parse("   ")
    with pytest.raises(ValueError):
        PhoneSeq(("a b",))


def test_edit_distance_examples():
    assert phone_edit_distance("g w eh r ih l ax", "g ax r ih l ax") == 2
    assert phone_edit_distance("t er n ey d ow z", "t er n ey d ow z") == 0
    assert phone_edit_distance("a b c", "x y") == 3


def test_per_examples():
    assert per("g w eh r ih l ax", GUERILLA_REF) == pytest.approx(2 / 6, abs=1e-15)
    assert per("t er n ey d ow z", TORNADOS_REF) == 0.0
    assert per("q", ["a b c d"]) == 1.0
    with pytest.raises(ValueError):
        per("a", [])


def test_oracle_and_anti_oracle():
    assert GUERILLA[oracle_select(GUERILLA, GUERILLA_REF).index] == "g ax r ax l ax"
    assert TORNADOS[oracle_select(TORNADOS, TORNADOS_REF).index] == "t er n ey d ow z"
    assert oracle_select(["a"], ["b"]).index == 0
    assert GUERILLA[anti_oracle_select(GUERILLA, GUERILLA_REF).index] == "g w eh r ih l ax"
    tie = anti_oracle_select(["a b", "a c"], ["a d"])
    assert tie.index == 0 and tie.tied
    assert anti_oracle_select(["x y", "a b"], ["a b"]).index == 0


def test_readers(fixtures_dir):
    lex = read_lexicon(fixtures_dir / "lexicon.tsv")
    assert [str(r) for r in lex["tornados"]] == TORNADOS_REF
    sets = read_candidates(fixtures_dir / "candidates.tsv")
    assert [s.word for s in sets] == ["guerilla", "tornados"]
    assert sets[0].selected == 1 and sets[1].selected == 0


def test_reader_errors(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("w\ta b\tx\n")
    with pytest.raises(ValueError, match="marker"):
        read_candidates(bad)
    bad.write_text("w\ta\t*\nw\tb\t*\n")
    with pytest.raises(ValueError, match="two selected"):
        read_candidates(bad)
    bad.write_text("just-a-word\n")
    with pytest.raises(ValueError, match="line 1"):
        read_lexicon(bad)


phones = st.lists(st.sampled_from(list("abcdefghij")), min_size=1, max_size=8)


@given(phones, phones)
def test_matches_brute_force(a, b):
    assert phone_edit_distance(PhoneSeq(tuple(a)), PhoneSeq(tuple(b))) == brute_distance(a, b)


@given(phones, phones, phones)
def test_metric_axioms(a, b, c):
    a, b, c = (PhoneSeq(tuple(s)) for s in (a, b, c))
    dab = phone_edit_distance(a, b)
    assert dab == phone_edit_distance(b, a)
    assert (dab == 0) == (a == b)
    assert phone_edit_distance(a, c) <= dab + phone_edit_distance(b, c)


@given(phones, st.lists(phones, min_size=2, max_size=5), st.data())
def test_more_references_never_raise_per(cand, refs, data):
    subset = data.draw(st.lists(st.sampled_from(refs), min_size=1, max_size=len(refs)))
    to_seq = lambda s: PhoneSeq(tuple(s))
    assert per(to_seq(cand), [to_seq(r) for r in refs]) <= per(to_seq(cand), [to_seq(r) for r in subset])


@given(st.lists(phones, min_size=1, max_size=5), st.lists(phones, min_size=1, max_size=3))
def test_oracles_coincide_only_when_equidistant(cands, refs):
    cands = [PhoneSeq(tuple(c)) for c in cands]
    refs = [PhoneSeq(tuple(r)) for r in refs]
    o, a = oracle_select(cands, refs), anti_oracle_select(cands, refs)
    dists = {min(phone_edit_distance(c, r) for r in refs) for c in cands}
    if o.index == a.index:
        assert len(dists) == 1
    else:
        assert len(dists) > 1
