"""Strategies and independent oracles shared by the test modules."""

import numpy as np
from hypothesis import strategies as st

from bergman_toeplitz import AtomicMeasure, RadialProfile, Symbol

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


def profiles(max_degree=8, real=False):
    elem = finite if real else complexes
    return st.lists(elem, min_size=1, max_size=max_degree + 1).map(lambda c: RadialProfile(tuple(c)))


def symbols_(modes=(-3, 3), max_degree=5):
    lo, hi = modes
    return st.dictionaries(st.integers(lo, hi), profiles(max_degree), min_size=1, max_size=4).map(
        Symbol.from_modes
    )


def random_measure(rng, d, radius=0.95, positive=False):
    """d distinct nonzero atoms inside the disk of the given radius."""
    r = radius * np.sqrt(rng.uniform(0.05, 1.0, size=d))
    z = r * np.exp(2j * np.pi * rng.uniform(size=d))
    if positive:
        w = rng.uniform(0.2, 2.0, size=d).astype(complex)
    else:
        w = rng.normal(size=d) + 1j * rng.normal(size=d)
    return AtomicMeasure(tuple(zip(z, w)), 1.0)


def inner_product_oracle(f, n, r_nodes=48, theta_nodes=64):
    """<T_f e_k, e_l> by brute 2-D quadrature of sqrt((k+1)(l+1)) int f z^k zbar^l dA.

    Gauss-Legendre in r (computed by numpy) and the trapezoid rule in theta.
    """
    x, w = np.polynomial.legendre.leggauss(r_nodes)
    r, wr = (x + 1) / 2, w / 2
    th = 2 * np.pi * np.arange(theta_nodes) / theta_nodes
    R, TH = np.meshgrid(r, th, indexing="ij")
    Z = R * np.exp(1j * TH)
    F = f(R, TH)
    weight = wr[:, None] * R * (2 * np.pi / theta_nodes) / np.pi
    out = np.zeros((n, n), complex)
    for k in range(n):
        for l in range(n):
            out[l, k] = np.sqrt((k + 1) * (l + 1)) * np.sum(weight * F * Z**k * np.conj(Z) ** l)
    return out


def leibniz_det(M):
    """Determinant by the permutation expansion; no LU anywhere."""
    from itertools import permutations

    n = len(M)
    total = 0j
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1 + 0j
        for i in range(n):
            prod *= M[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def brute_determinant_sum(atoms, N, m, k, w=0):
    """Nested loop over all atom tuples, written without numpy."""
    import cmath
    from itertools import product

    total = 0j
    for tup in product(atoms, repeat=N):
        weight = 1 + 0j
        absprod = 1.0
        for l, (z, c) in enumerate(tup):
            weight *= c * z ** m[l]
            absprod *= abs(z)
        M = [[tup[j][0].conjugate() ** k[i] for j in range(N)] for i in range(N)]
        factor = cmath.exp(2 * w * cmath.log(absprod)) if w else 1
        total += weight * leibniz_det(M) * factor
    return total


def leibniz_determinant_sum(atoms, N, m, k):
    """Same sum as ``brute_determinant_sum`` with the permutation expansion
    vectorized, fast enough for a few thousand tuples of size <= 6."""
    from itertools import permutations, product

    perms = np.array(list(permutations(range(N))), dtype=int).reshape(-1, N)
    inv = (perms[:, :, None] > perms[:, None, :]) & np.triu(np.ones((N, N), bool), 1)
    signs = np.where(inv.sum(axis=(1, 2)) % 2, -1.0, 1.0)
    m = np.asarray(m)
    k = np.asarray(k)
    rows = np.arange(N)
    total = 0j
    for tup in product(atoms, repeat=N):
        z = np.array([a[0] for a in tup], dtype=complex)
        c = np.array([a[1] for a in tup], dtype=complex)
        M = np.conj(z)[None, :] ** k[:, None]
        det = np.sum(signs * np.prod(M[rows, perms], axis=1))
        total += np.prod(c * z**m) * det
    return total
