"""Partition of unity on the enlarged simplex and flowed collars along a chain."""
import numpy as np

from simpkit.collar import collar_flow, make_rng, partition_g, phi_piecewise, sample_simplex, verify_coherence

x = np.full(3, 1 / 3)
for S, g in sorted(partition_g(x).items()):
    print(f"g_{S} at the barycenter = {float(g):.6f}")

print("piecewise collar of (1) at t=-0.5:", phi_piecewise((0,), (0, 1), (0,), [1.0], [-0.5]))
pts = sample_simplex(make_rng(0), 2, 3)
print("flowed collars of three points into Δ^{0,1,2} at t=-0.4:")
print(collar_flow((0, 1), (0, 1, 2), pts, [-0.4]))

for line in verify_coherence("0;0,1;0,1,2", samples=64, steps=128).lines():
    print(line)
