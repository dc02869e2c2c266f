import itertools

import pytest
from hypothesis import given, strategies as st

from lrselect.lrt import Outcome
from lrselect.scores import ScoreSet
from lrselect.censor import sign_decide_wta
from lrselect.tournament import (PairwiseScoreTable, TournamentError, load_pairwise_dir,
                                 pair_filename, pairwise_schedule, run_tournament)


def table_from(ids, llrs_by_pair):
    return PairwiseScoreTable(tuple(ids), {p: ScoreSet.from_llrs(v) for p, v in llrs_by_pair.items()})


def test_schedule():
    assert pairwise_schedule(["C", "A", "B"]) == [("A", "B"), ("A", "C"), ("B", "C")]
    assert pairwise_schedule(["x", "y"]) == [("x", "y")]
    assert len(pairwise_schedule(list("abcde"))) == 10
    with pytest.raises(TournamentError, match="duplicate"):
        pairwise_schedule(["A", "B", "A"])
    with pytest.raises(TournamentError):
        pairwise_schedule(["A"])


def test_transitive_fixture(fixtures_dir):
    res = run_tournament(load_pairwise_dir(fixtures_dir / "tournament3"))
    assert res.win_counts == {"A": 2, "B": 1, "C": 0}
    assert res.winner == "A" and not res.tied and len(res.per_pair_decisions) == 3


def test_cycle_fixture_is_tied(fixtures_dir):
    for method in ("sup", "semi_sup"):
        res = run_tournament(load_pairwise_dir(fixtures_dir / "cycle3"), method)
        assert res.win_counts == {"A": 1, "B": 1, "C": 1}
        assert res.winner == "A" and res.tied


def test_two_models_reduce_to_pair_decision():
    for llrs in ([1.0, -0.5, 2.0], [-1.0, -2.0, 0.5], [1.0, -1.0]):
        res = run_tournament(table_from("AB", {("A", "B"): llrs}))
        d = sign_decide_wta(llrs)
        if d.outcome is Outcome.H1:
            assert res.winner == "A" and not res.tied
        elif d.outcome is Outcome.H2:
            assert res.winner == "B" and not res.tied
        else:
            assert res.tied and sum(res.win_counts.values()) == 0


def test_table_validation(tmp_path, fixtures_dir):
    with pytest.raises(TournamentError, match=r"\(A, C\)"):
        table_from("ABC", {("A", "B"): [1.0], ("B", "C"): [1.0]})
    with pytest.raises(TournamentError, match="unexpected"):
        table_from("AB", {("A", "B"): [1.0], ("B", "A"): [1.0]})
    for f in (fixtures_dir / "tournament3").iterdir():
        if f.name != "A__C.csv":
            (tmp_path / f.name).write_text(f.read_text())
    with pytest.raises(TournamentError, match=r"\(A, C\).*A__C\.csv"):
        load_pairwise_dir(tmp_path)
    with pytest.raises(TournamentError):
        run_tournament(load_pairwise_dir(fixtures_dir / "tournament3"), method="bogus")


def test_pair_filename_sorted():
    assert pair_filename("zeta", "alpha") == "alpha__zeta.csv"


def test_workers_do_not_change_result(fixtures_dir):
    table = load_pairwise_dir(fixtures_dir / "tournament3")
    assert run_tournament(table, workers=1) == run_tournament(table, workers=3)


# zero llrs count toward the second model of a pair, which breaks relabeling
# symmetry by design, so they are left out here
llr_vectors = st.lists(st.sampled_from([-2.0, -1.0, 1.0, 3.0]), min_size=1, max_size=7)


@given(st.lists(llr_vectors, min_size=6, max_size=6), st.permutations(["m1", "m2", "m3", "m4"]))
def test_relabeling_and_accounting(vectors, perm):
    ids = ["m1", "m2", "m3", "m4"]
    pairs = pairwise_schedule(ids)
    res = run_tournament(table_from(ids, dict(zip(pairs, vectors))))
    undecided = sum(d.outcome is Outcome.H0 for _, d in res.per_pair_decisions)
    assert sum(res.win_counts.values()) == len(pairs) - undecided
    assert res.win_counts[res.winner] == max(res.win_counts.values())

    # relabel: old id -> new id; llrs flip sign when the pair order flips
    rename = dict(zip(ids, perm))
    relabeled = {}
    for (a, b), v in zip(pairs, vectors):
        na, nb = rename[a], rename[b]
        relabeled[tuple(sorted((na, nb)))] = v if na < nb else [-x for x in v]
    res2 = run_tournament(table_from(perm, relabeled))
    assert all(res2.win_counts[rename[m]] == res.win_counts[m] for m in ids)
    if not res.tied:
        assert res2.winner == rename[res.winner]
