"""Finite truncations of Toeplitz operators on the Bergman space.

Matrices are indexed ``entries[l, k] = <T e_k, e_l>`` in the orthonormal
basis ``e_m(z) = sqrt(m+1) z**m``, so column ``k`` holds the coefficients
of ``T e_k``.  With the area measure normalized to mass one,

    <T_f e_k, e_l> = 2 sqrt((k+1)(l+1)) int_0^1 f_{l-k}(r) r**(k+l+1) dr.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import jacobi_svd
from .moments import moments

__all__ = [
    "TruncatedOperator",
    "RankReport",
    "DEFAULT_RANK_TOL",
    "toeplitz_matrix",
    "diagonal_operator",
    "measure_matrix",
    "multiply",
    "numerical_rank",
    "apply",
]

DEFAULT_RANK_TOL = 1e-8

# mass-one area measure: dA = r dr dtheta / pi
_AREA_FACTOR = 2.0

ARTIFACT_FLAG = "truncation-artifact possible"


@dataclass(frozen=True)
class TruncatedOperator:
    entries: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self):
        return self.entries.shape[0]

    def is_diagonal(self):
        a = self.entries
        return not np.any(a - np.diag(np.diag(a)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class RankReport:
    singular_values: np.ndarray
    tolerance: float
    rank: int

    @property
    def n(self):
        return self.singular_values.size


def toeplitz_matrix(f, n):
    """``n x n`` compression of ``T_f`` for a mode-decomposed symbol ``f``.

    Entries off the modes of ``f`` are structural zeros; a radial symbol
    gives a diagonal matrix carrying ``omega(f_0, k)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    T = np.zeros((n, n), complex)
    k = np.arange(n)
    for m, prof in f.modes:
        # entries with l - k = m
        kk = k[(k + m >= 0) & (k + m < n)]
        if kk.size == 0:
            continue
        ll = kk + m
        # one quotient per term keeps T_1 exactly the identity
        T[ll, kk] = moments(prof, kk + ll + 1, _AREA_FACTOR * np.sqrt((kk + 1.0) * (ll + 1.0)))
    return TruncatedOperator(T, provenance=f"T[{f!r}]")


def diagonal_operator(values, provenance="diag"):
    return TruncatedOperator(np.diag(np.asarray(values, dtype=complex)), provenance)


def measure_matrix(nu, n):
    """Compression of the form ``(p, q) -> int p conj(q) dnu`` for an atomic measure.

    ``entries[l, k] = sqrt((k+1)(l+1)) sum_j w_j z_j**k conj(z_j)**l``, i.e.
    ``D V^H diag(w) V D`` with ``V[j, k] = z_j**k`` and ``D`` the basis norms.
    An atom at the origin contributes ``w`` to the ``(0, 0)`` entry only.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = nu.locations
    w = nu.weights
    k = np.arange(n)
    V = z[:, None] ** k[None, :]
    d = np.sqrt(k + 1.0)
    M = (V.conj().T * w) @ V
    M = d[:, None] * M * d[None, :]
    return TruncatedOperator(M, provenance=f"T[nu; {len(nu)} atoms]")


def multiply(ops):
    """Product ``ops[0] @ ops[1] @ ...`` of same-size truncations.

    The product of compressions equals the compression of the product
    only when at most one factor is non-diagonal; otherwise the
    provenance is flagged.
    """
    ops = list(ops)
    if not ops:
        raise ValueError("multiply needs at least one operand")
    n = ops[0].n
    for op in ops:
        if op.n != n:
            raise ValueError(f"dimension mismatch: {op.n} != {n}")
    out = ops[0].entries
    for op in ops[1:]:
        out = out @ op.entries
    prov = " * ".join(op.provenance for op in ops)
    if sum(not op.is_diagonal() for op in ops) > 1:
        prov += f" [{ARTIFACT_FLAG}]"
    return TruncatedOperator(out, prov)


def numerical_rank(A, tol=DEFAULT_RANK_TOL):
    """Count singular values above ``tol * sigma_max``."""
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    a = A.entries if isinstance(A, TruncatedOperator) else np.asarray(A)
    _, s, _ = jacobi_svd(a)
    s.setflags(write=False)
    rank = 0 if s.size == 0 or s[0] == 0 else int(np.count_nonzero(s > tol * s[0]))
    return RankReport(s, float(tol), rank)


def apply(A, v):
    """``A v`` with ``v`` given in the basis ``e_0 .. e_{n-1}``."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (A.n,):
        raise ValueError(f"vector length {v.shape} does not match n = {A.n}")
    return A.entries @ v
