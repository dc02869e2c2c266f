"""When is counting signs better than summing?

For generalized Gaussian noise the answer flips at one exponent between the
Laplace (p=1) and Normal (p=2) cases.  The Monte Carlo estimate at the end
checks the Normal endpoint by simulating both tests.
"""

import math

from lrselect import are_closed_form, are_crossing, are_curve, empirical_are

curve = are_curve(1.0, 2.0, 11)
for p, are in curve.points:
    bar = "#" * int(round(30 * are / 2.0))
    print(f"p={p:.1f}  ARE={are:.4f}  {bar}")

print(f"sign test wins below p = {are_crossing():.6f}")
print(f"closed form at p=2: {are_closed_form(2.0):.6f} (2/pi = {2 / math.pi:.6f})")

est = empirical_are(2.0, effect=0.1, trials=4000, seed=3)
print(f"simulated at p=2: {est.ratio:.3f}  (n_mean={est.n_mean:.0f}, n_sign={est.n_sign:.0f})")

# full curve as CSV, ready for any plotting tool
print(are_curve(1.0, 2.0, 101).to_csv()[:60], "...")
