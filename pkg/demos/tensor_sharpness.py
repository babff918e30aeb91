"""Tensor-product inequality: it holds at q = p and breaks as soon as q > p.

Run: python demos/tensor_sharpness.py
"""

import numpy as np

from ncbl import CoverSpec, FactorSystem, verify_tensor_bl
from ncbl.search import scaling_counterexample

rng = np.random.default_rng(0)
system = FactorSystem([2, 2, 2])
cover = CoverSpec(3, [(1, 2), (2, 3), (1, 3)])
print(f"cover {cover.subsets}, every index covered p = {cover.p} times")

worst = np.inf
for _ in range(200):
    hams = []
    for s in cover.subsets:
        d = system.subset_dim(s)
        x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        hams.append((x + x.conj().T) / 2)
    worst = min(worst, verify_tensor_bl(system, cover, hams, cover.p).deficit)
print(f"q = p: smallest log-deficit over 200 random instances = {worst:.3e}")

# zero Hamiltonians already violate the inequality for q > p
rep = scaling_counterexample(3, cover, [2, 2, 2], doublings=4)
print(f"q = 3: lhs/rhs = {rep.extra['ratio']:.6f} (formula {rep.extra['formula_ratio']:.6f})")
for row in rep.extra["schedule"]:
    print(f"  dims {row['dims']}: ratio {row['ratio']:.3f}")
