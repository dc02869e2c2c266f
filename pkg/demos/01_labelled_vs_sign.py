"""Supervised LLR test against the sign test on one synthetic word.

Model 1 is the better pronunciation; a few utterances were aligned badly and
produce huge negative log-likelihood ratios.  The summed test is dragged
around by those outliers, the sign test only counts.
"""

import numpy as np

from lrselect import ScoreSet, llr_samples, sign_decide_wta, summarize, threshold_decide_lab
from lrselect.lrt import vuong_decide

rng = np.random.default_rng(1)

llr = rng.normal(0.4, 1.0, 30)
llr[:3] = [-40.0, -55.0, -38.0]  # badly aligned utterances
scores = ScoreSet.from_llrs(llr)
samples = llr_samples(scores)

s = summarize(samples)
print(f"n={s.n}  sum={s.sum:.2f}  positive={s.pos_count}  negative={s.neg_count}")

print("summed LLR  :", threshold_decide_lab(samples).outcome)
print("Vuong 5%    :", vuong_decide(samples, 0.05).outcome)
print("sign (WTA)  :", sign_decide_wta(samples).outcome)

# drop the outliers and the summed test agrees again
clean = llr_samples(ScoreSet.from_llrs(llr[3:]))
print("summed LLR without outliers:", threshold_decide_lab(clean).outcome)
