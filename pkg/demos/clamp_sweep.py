"""Walk through the family (r^2 - t^2, t^2 + 2t - 3, t^2 - 2t - 3).

Each pair is compatible for 1 <= r <= 3, but the triple only at r = sqrt(3).
Run:  python demos/clamp_sweep.py
"""
import math

import numpy as np

from compatpoly import Family, Poly, family_compatible, pair_compatible, sample_convex_combinations

g = Poly([-3, 2, 1], 2)
h = Poly([-3, -2, 1], 2)


def f(r):
    return Poly([r * r, 0, -1], 2)


print(f"{'r':>6} {'(f,g)':>13} {'(f,h)':>13} {'(f,g,h)':>13}")
for r in [0.5, 0.9, 1.1, 1.5, math.sqrt(3), 2.0, 2.5, 2.9, 3.1, 3.5]:
    fg = pair_compatible(f(r), g).verdict.value
    fh = pair_compatible(f(r), h).verdict.value
    tri = family_compatible(Family([f(r), g, h])).verdict.value
    print(f"{r:6.3f} {fg:>13} {fh:>13} {tri:>13}")

# at r = 2 the witness is a concrete combination with complex roots
rep = family_compatible(Family([f(2), g, h]))
w = np.array(rep.witness.weights)
p = w[0] * f(2) + w[1] * g + w[2] * h
print("\nr = 2 witness weights:", np.round(w, 4))
print("combination:", p)
print("roots:", np.roots(p.coeffs[::-1]))

# the sampling oracle agrees
orc = sample_convex_combinations(Family([f(2), g, h]), 10_000, seed=7)
print(f"oracle: {len(orc.violations)} of {orc.samples} samples not real-rooted")
