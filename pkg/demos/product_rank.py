"""
Rank of S2 T_f S1 with radial outer factors
===========================================

S1 and S2 are products of radial Toeplitz operators, so they are diagonal
and each kills the indices where one of its eigenvalue sequences vanishes.
For a radial middle factor the rank of the product is n minus the union
of all these zero sets.
"""

from bergman_toeplitz import Symbol, prescribe_zero_set, product_rank_experiment, symbol_from_bipoly

g = [prescribe_zero_set({0, 1}, 3)]
f = [prescribe_zero_set({5}, 2), [0, 0, 1]]
rep = product_rank_experiment(g, Symbol.radial([1]), f, 16)
print(rep.zero_sets, rep.predicted_rank, rep.observed_rank.rank, rep.verdict)

# A radial middle factor with its own zero at index 3 removes one more.
rep = product_rank_experiment(g, Symbol.radial(prescribe_zero_set({3}, 2)), f, 16)
print(rep.zero_sets, rep.predicted_rank, rep.observed_rank.rank, rep.verdict)

# A non-radial middle factor couples indices and there is no prediction.
rep = product_rank_experiment(g, symbol_from_bipoly([(1, 0, 1), (0, 1, 1)]), f, 16)
print(rep.predicted_rank, rep.observed_rank.rank, rep.notes)
print(rep.residuals)
