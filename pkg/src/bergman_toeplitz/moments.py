"""Moment integrals of polynomial radial profiles and radial eigenvalues.

For a profile ``u(r) = sum_j c_j r**j`` the moment ``int_0^1 u(r) r**k dr``
is the finite sum ``sum_j c_j / (j + k + 1)``.  The radial Toeplitz operator
with symbol ``u(|z|)`` is diagonal in the basis ``e_m = sqrt(m+1) z**m`` with
eigenvalues

    omega(u, m) = (m + 1) * int_0^1 u(sqrt(r)) r**m dr
                = 2 (m + 1) * int_0^1 u(t) t**(2m + 1) dt.

Gauss-Legendre quadrature is provided only as an independent check on the
closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import gauss_legendre

__all__ = [
    "EigenvalueSequence",
    "moment",
    "moments",
    "omega",
    "eigenvalue_sequence",
    "quadrature_moment",
]


def _coeffs(u):
    return np.asarray(getattr(u, "coeffs", u), dtype=complex)


def moment(u, k):
    """Exact ``int_0^1 u(r) r**k dr`` for a polynomial profile."""
    if k < 0:
        raise ValueError("moment order k must be nonnegative")
    c = _coeffs(u)
    if c.size == 0:
        return 0j
    return complex(np.sum(c / (np.arange(c.size) + k + 1.0)))


def moments(u, ks, scale=1.0):
    """Vectorized :func:`moment` over an array of orders, times ``scale``.

    The scale enters each term as ``scale / (j + k + 1)`` so that a scale
    equal to the denominator yields exactly 1.
    """
    ks = np.asarray(ks)
    c = _coeffs(u)
    if c.size == 0:
        return np.zeros(ks.shape, complex)
    denom = ks[..., None] + np.arange(c.size) + 1.0
    return (c * (np.asarray(scale, float)[..., None] / denom)).sum(axis=-1)


def omega(u, m):
    """Eigenvalue ``omega(u, m)`` of the radial Toeplitz operator."""
    if m < 0:
        raise ValueError("omega is defined for m >= 0")
    return complex(moments(u, 2 * m + 1, 2.0 * (m + 1)))


@dataclass(frozen=True)
class EigenvalueSequence:
    """First ``n`` eigenvalues ``omega(u, 0..n-1)`` of a radial symbol."""

    values: np.ndarray
    source: str

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def n(self):
        return self.values.size

    def __len__(self):
        return self.values.size


def eigenvalue_sequence(u, n):
    if n < 1:
        raise ValueError("n must be >= 1")
    m = np.arange(n)
    vals = moments(u, 2 * m + 1, 2.0 * (m + 1))
    c = _coeffs(u)
    if c.size and not np.any(c.imag):
        vals = vals.real.astype(complex)
    return EigenvalueSequence(vals, source=repr(u))


def quadrature_moment(u, k, nodes):
    """Gauss-Legendre approximation of ``int_0^1 u(r) r**k dr``.

    Exact to roundoff once ``2 * nodes - 1 >= deg(u) + k``.
    """
    if nodes < 1:
        raise ValueError("nodes must be >= 1")
    x, w = gauss_legendre(nodes, 0.0, 1.0)
    c = _coeffs(u)
    vals = np.polynomial.polynomial.polyval(x, c) if c.size else np.zeros_like(x)
    return complex(np.sum(w * vals * x**k))
