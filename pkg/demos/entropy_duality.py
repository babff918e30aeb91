"""Entropy as a Legendre transform, and the two chains linking B-L to subadditivity."""

import numpy as np

from ncbl.clifford import build_generators
from ncbl.duality import (
    CliffordSetting,
    TensorSetting,
    backward_chain,
    forward_chain,
    maximize_legendre,
    optimal_local_hamiltonians,
    random_duality_instance,
    subadditivity_deficit,
)
from ncbl.frames import mercedes_frame
from ncbl.linalg import entropy, random_density
from ncbl.tensor import CoverSpec, FactorSystem

rng = np.random.default_rng(2)
rho = random_density(4, rng)
best, _ = maximize_legendre(rho.op, rho.functional, rng)
print(f"-S(rho) = {-entropy(rho):.10f}, sup over H found by L-BFGS = {best:.10f}")

for setting in (
    TensorSetting(FactorSystem([2, 2]), CoverSpec(2, [(1,), (2,)])),
    CliffordSetting(build_generators(2), mercedes_frame()),
):
    rho, hams = random_duality_instance(setting, rng)
    fwd = forward_chain(setting, rho, optimal_local_hamiltonians(setting, rho))
    bwd = backward_chain(setting, hams)
    print(setting.describe()["kind"])
    print("  forward  L0..L4:", np.round(fwd, 8))
    print("  backward B0..B4:", np.round(bwd, 8))
    print(f"  subadditivity deficit {subadditivity_deficit(setting, rho):.6f} = L0 - L4 = {fwd[0] - fwd[4]:.6f}")
