"""Fermionic Mehler flow: entropy increases to 0, the subadditivity deficit decays with it."""

import numpy as np

from ncbl.clifford import build_generators
from ncbl.flow import (
    clifford_entropy,
    entropy_production,
    mehler_flow,
    production_via_gross,
    random_positive_element,
    subadditivity_curve,
    verify_gross_formula,
)
from ncbl.frames import mercedes_frame

rng = np.random.default_rng(3)
alg = build_generators(2)
rho = random_positive_element(alg, rng)
ts = np.array([0.0, 0.1, 0.3, 1.0, 3.0, 10.0])
curve = subadditivity_curve(rho, mercedes_frame(), ts)
print("    t      S(rho_t)   D(rho_t)   SA deficit")
for t, c in zip(ts, curve):
    r = mehler_flow(rho, t)
    print(f"{t:5.1f}  {clifford_entropy(r):10.6f} {entropy_production(r):10.6f} {c:12.3e}")

print(f"production two ways: {entropy_production(rho):.12f} vs {production_via_gross(rho):.12f}")
for f in ("identity", "exp", "log"):
    print(f"Gross formula residual for f = {f}: {verify_gross_formula(rho, f).lhs:.2e}")
