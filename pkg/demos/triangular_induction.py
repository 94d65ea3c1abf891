"""
Triangular structure from the top mode
======================================

If the symbol has no Fourier modes above M, then T_f e_k lies in the span
of e_0 .. e_{k+M}.  Its e_{k+M} coefficient is a single moment of the
top-mode profile.  When that moment is nonzero, e_{k+M} is recovered from
T_f e_k and lower basis vectors.
"""

from bergman_toeplitz import (
    HypothesisViolation,
    RadialProfile,
    Symbol,
    prescribe_zero_set,
    symbol_from_bipoly,
    triangular_reconstruction,
)

f = symbol_from_bipoly([(1, 0, 1), (0, 2, 2)])  # z + 2 zbar**2
print("top mode", f.top_mode)
for k in range(6):
    r = triangular_reconstruction(f, k, 32)
    print(k, f"{r.residual:.1e}", f"{abs(r.leading_coefficient):.6f}")

# Tune the top-mode profile so that the k = 1 moment vanishes.
g = Symbol.from_modes({2: prescribe_zero_set({2}, 2), 0: RadialProfile((1,))})
try:
    triangular_reconstruction(g, 1, 32)
except HypothesisViolation as exc:
    print("rejected:", exc)
print("k = 2 still works:", triangular_reconstruction(g, 2, 32).residual)
