"""
Radial symbols are diagonal
===========================

A symbol that depends only on |z| gives a diagonal Toeplitz matrix.  The
diagonal holds omega(u, m), a moment of the profile.
"""

import numpy as np

from bergman_toeplitz import (
    Symbol,
    eigenvalue_sequence,
    make_radial_polynomial,
    prescribe_zero_set,
    toeplitz_matrix,
    zero_set_report,
)

# The constant symbol 1 is the identity, to the last bit.
print(np.array_equal(toeplitz_matrix(Symbol.radial([1]), 6).entries, np.eye(6)))

# u(r) = r**2 gives omega(u, m) = (m+1)/(m+2).
u = make_radial_polynomial([0, 0, 1])
A = toeplitz_matrix(Symbol.radial(u), 6)
print(np.diag(A.entries).real)

# 1 - 1.5 r**2 is tuned so that one eigenvalue is exactly zero.
tuned = make_radial_polynomial([1, 0, -1.5])
seq = eigenvalue_sequence(tuned, 8)
print(seq.values.real)
print(zero_set_report(seq))

# Zeros can also be placed on request.  The Muntz sum of the zero set
# stays finite for any nonzero radial symbol.
h = prescribe_zero_set({0, 2}, 4)
print(h.coeffs)
rep = zero_set_report(eigenvalue_sequence(h, 32))
print(rep.indices, rep.muntz_partial_sum)
