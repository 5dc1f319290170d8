"""Best sup-norm error of K-term convex combinations of degree <= d Blaschke
products approximating 0.6 exp(z - 1), on 32 nodes."""

import numpy as np

from blaschkelab import Analytic, BoundaryGrid, marshall_sweep

Ks, ds = [1, 2, 3, 4], [0, 1, 2]
f = Analytic(lambda z: 0.6 * np.exp(z - 1), 0.6)
table = marshall_sweep(f, Ks, ds, grid=BoundaryGrid(5), starts=3, seed=7)

print("K \\ d " + "".join(f"{d:>12d}" for d in ds))
for K in Ks:
    print(f"{K:5d} " + "".join(f"{table[K, d].error:12.3e}" for d in ds))
