"""
The determinant sum of an atomic measure
========================================

For N atom tuples drawn from nu, sum prod z_l**m_l det(conj(z_j)**k_i).
With fewer than N atoms every tuple repeats an atom, the determinant has
two equal columns and the whole sum vanishes.
"""

import numpy as np

from bergman_toeplitz import AtomicMeasure, determinant_identity, f_eval, f_eval_bound

two = AtomicMeasure(((0.5, 1), (1 / 3, 1)))

# N = 2 from two atoms: generically nonzero.  With m = (1, 0) the sum
# collapses to -(z1 - z2)**2.
print(determinant_identity(two, 2, [1, 0], [0, 1]), -((0.5 - 1 / 3) ** 2))

# With m = (0, 0) the monomial is symmetric and the determinant is
# antisymmetric under swapping the two tuple entries, so it cancels.
print(determinant_identity(two, 2, [0, 0], [0, 1]))

# N = 3 from two atoms: zero relative to the size of the summands.
value, scale = determinant_identity(two, 3, [2, 0, 1], [0, 1, 4], return_scale=True)
print(f"|value| / scale = {abs(value) / scale:.1e}")

# Weighting by |z_1 ... z_N|**(2w) gives an analytic function of w.  At
# integer w the weight is absorbed into the exponents.
for s in range(4):
    print(s, f_eval(two, 2, [1, 0], [0, 1], s), determinant_identity(two, 2, [1 + s, s], [s, 1 + s]))

# It stays below C R**(2N Re w).
C = f_eval_bound(two, 2, [1, 0], [0, 1])
for w in (0, 2 + 5j, 8):
    print(w, abs(f_eval(two, 2, [1, 0], [0, 1], w)) * 0.5 ** (-4 * np.real(w)) <= C)
