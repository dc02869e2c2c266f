"""Three candidate pronunciations, all pairs compared, then scored by PER.

The pairwise score files live in a temporary directory, named the way the
``tournament`` command expects them.
"""

import tempfile
from pathlib import Path

import numpy as np

from lrselect import ScoreSet, load_pairwise_dir, oracle_select, per, run_tournament
from lrselect.perutil import PhoneSeq
from lrselect.scores import format_score_file

rng = np.random.default_rng(7)
cands = {"c1": "t er n ey d ow z", "c2": "t ao r n ey d ow s", "c3": "t ow r n ey d ow z"}
refs = [PhoneSeq.parse("t er n ey d ow z"), PhoneSeq.parse("t ow r n ey d ow z")]
# mean llr for each pair (first id minus second)
means = {("c1", "c2"): 0.8, ("c1", "c3"): 0.1, ("c2", "c3"): -0.6}

with tempfile.TemporaryDirectory() as tmp:
    for (a, b), mu in means.items():
        scores = ScoreSet.from_llrs(rng.normal(mu, 1.0, 40))
        Path(tmp, f"{a}__{b}.csv").write_text(format_score_file(scores))
    table = load_pairwise_dir(tmp)
    for method in ("sup", "semi_sup"):
        res = run_tournament(table, method)
        print(f"{method:9} wins={res.win_counts} winner={res.winner} tied={res.tied}")

for cid, pron in cands.items():
    print(f"{cid}: /{pron}/  PER={100 * per(pron, refs):.1f}%")
best = oracle_select(list(cands.values()), refs)
print("oracle pick:", list(cands)[best.index], "(tied)" if best.tied else "")
