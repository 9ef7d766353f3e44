"""A compatible family, its common interleaver, and two perturbations that
make every convex combination have simple roots.

Run:  python demos/perturbation_tour.py
"""
import numpy as np

from compatpoly import (
    Family, Poly, common_interleaver, interlaces, nonsimple_root_diagnostics,
    perturb_family_mean, sample_convex_combinations, simplex_interior_perturbation,
)

# two members sharing the root 0 with opposite signs: their edge has a double root
fam = Family([
    Poly.from_roots([0.0, -2.0]),
    Poly.from_roots([0.0, -1.0], -1.0),
    Poly.from_roots([-0.5, -3.0]),
])

res = common_interleaver(fam)
print("interleaver:", res.witness)
print("interlaces into it:", [interlaces(m, res.witness) for m in fam])

for d in nonsimple_root_diagnostics(fam):
    print(f"double root at r={d.location:.6f} from weights {np.round(d.witness_weights, 4)}")

print()
for name, out in (("mean", perturb_family_mean(fam, 1e-3)),
                  ("interior", simplex_interior_perturbation(fam, 1e-3))):
    rep = sample_convex_combinations(out, 2000, seed=1)
    print(f"{name:>8}: violations {len(rep.violations)}, smallest root gap {rep.min_gap_observed:.2e}")
