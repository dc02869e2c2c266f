"""Censoring bounds for two unit Gaussians one standard deviation apart.

As the contamination level grows the bounds close in on 1, and at the
breakdown level the censored test has become the sign test.
"""

import numpy as np

from lrselect import Gaussian, censored_statistic, epsilon_breakdown, least_favorable_pair

p1, p2 = Gaussian(0.0, 1.0), Gaussian(1.0, 1.0)
eps_star = epsilon_breakdown(p1, p2)
print(f"breakdown level: {eps_star:.6f}")

for eps in (0.0, 0.01, 0.05, 0.1, 0.2, 0.27):
    lfp = least_favorable_pair(p1, p2, eps)
    print(f"eps={eps:<5} a={lfp.bounds.a:.6f}  b={lfp.bounds.b:.6f}  "
          f"log-clip=[{lfp.bounds.log_a:+.4f}, {lfp.bounds.log_b:+.4f}]")

# what the clip does to a sample with one wild value
x = np.array([0.3, -0.2, 0.8, 0.1, -25.0])
llr = p1.logpdf(x) - p2.logpdf(x)
for eps in (0.0, 0.1):
    b = least_favorable_pair(p1, p2, eps).bounds
    print(f"eps={eps}: statistic {censored_statistic(llr, b):+.4f}")
