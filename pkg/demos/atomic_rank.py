"""
Atomic measures have finite rank
================================

The form (p, q) -> int p conj(q) dnu of a measure with d atoms is a
weighted Gram matrix of d Vandermonde rows, so its rank is d no matter
how large the truncation.
"""

import numpy as np

from bergman_toeplitz import AtomicMeasure, measure_matrix, numerical_rank

rng = np.random.default_rng(3)

for d in (1, 3, 5):
    z = 0.9 * np.sqrt(rng.uniform(0.1, 1, d)) * np.exp(2j * np.pi * rng.uniform(size=d))
    nu = AtomicMeasure(tuple(zip(z, rng.normal(size=d) + 1j)))
    for n in (2 * d, 16, 32):
        rep = numerical_rank(measure_matrix(nu, n))
        print(f"d={d} n={n:2d} rank={rep.rank}  gap={rep.singular_values[d - 1]:.2e} -> "
              f"{rep.singular_values[d] if n > d else 0:.2e}")

# An atom at the origin only touches the (0, 0) entry.
nu = AtomicMeasure(((0, 2.0), (0.5, 1.0)))
print(measure_matrix(nu, 3).entries.real)
print(measure_matrix(nu.without_origin(), 3).entries.real)
