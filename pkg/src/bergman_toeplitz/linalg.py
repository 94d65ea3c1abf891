"""Dense numerical kernels: one-sided Jacobi SVD and Gauss-Legendre rules.

Both are small, self-contained routines sized for truncations up to a few
hundred rows.  Nothing here knows about Toeplitz operators.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "SVDConvergenceError",
    "jacobi_svd",
    "gauss_legendre",
]

MAX_SWEEPS = 60
ROTATION_TOL = 1e-14


class SVDConvergenceError(np.linalg.LinAlgError):
    """Raised when the Jacobi sweeps hit the iteration cap.

    ``off_norm`` is the Frobenius norm of the off-diagonal part of the
    final Gram matrix ``B^H B``, normalized by its diagonal.
    """

    def __init__(self, sweeps, off_norm):
        super().__init__(
            f"Jacobi SVD did not converge after {sweeps} sweeps "
            f"(relative off-diagonal norm {off_norm:.3e})"
        )
        self.sweeps = sweeps
        self.off_norm = off_norm


def _round_robin(n):
    """Yield the n-1 rounds of a round-robin tournament on ``n`` (even) players.

    Each round is a pair of index arrays ``(p, q)`` with ``p < q`` and the
    pairs in a round disjoint, so all rotations of a round commute.
    """
    players = list(range(n))
    for _ in range(n - 1):
        half = n // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        lo, hi = np.minimum(p, q), np.maximum(p, q)
        yield lo, hi
        players = [players[0]] + [players[-1]] + players[1:-1]


def _relative_off_norm(B):
    G = B.conj().T @ B
    d = np.sqrt(np.abs(np.diag(G)))
    scale = np.outer(d, d)
    off = G - np.diag(np.diag(G))
    mask = scale > 0
    rel = np.zeros(G.shape)
    rel[mask] = np.abs(off[mask]) / scale[mask]
    return float(np.linalg.norm(rel))


def jacobi_svd(A, tol=ROTATION_TOL, max_sweeps=MAX_SWEEPS):
    """Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

    Columns of ``B = A V`` are orthogonalized pairwise until every pair
    satisfies ``|b_p^H b_q| <= tol * |b_p| |b_q|``.  Columns whose norm
    falls below ``eps * ||A||_F`` count as zero.  Disjoint pairs are rotated
    together following a round-robin ordering.

    Parameters
    ----------
    A : array_like, shape (m, n)
        Real or complex matrix.
    tol : float
        Relative orthogonality threshold for skipping a rotation.
    max_sweeps : int
        Iteration cap; exceeding it raises :class:`SVDConvergenceError`.

    Returns
    -------
    U : ndarray, shape (m, n)
        Left singular vectors.  Columns belonging to numerically zero
        singular values are completed to an orthonormal set where ``m``
        allows it.
    s : ndarray, shape (n,)
        Singular values, nonincreasing.
    Vh : ndarray, shape (n, n)
        Conjugate transpose of the right singular vectors.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("jacobi_svd expects a 2-D array")
    m, n = A.shape
    B = np.array(A, dtype=complex)
    V = np.eye(n, dtype=complex)
    if n == 0:
        return np.zeros((m, 0), complex), np.zeros(0), V
    if not np.all(np.isfinite(B)):
        raise ValueError("jacobi_svd expects finite entries")

    # power-of-two rescaling keeps the squared norms clear of under/overflow
    amax = float(np.max(np.abs(B))) if B.size else 0.0
    shift = math.frexp(amax)[1] if amax > 0 else 0
    B = np.ldexp(B.real, -shift) + 1j * np.ldexp(B.imag, -shift)

    # pad to an even number of columns with a zero column
    width = n + (n % 2)
    if width != n:
        B = np.hstack([B, np.zeros((m, 1), complex)])
        V = np.pad(V, ((0, 1), (0, 1)))
    rounds = list(_round_robin(width)) if width > 1 else []

    # columns below this norm are numerically zero and never rotated
    floor = (np.finfo(float).eps * np.linalg.norm(B)) ** 2
    tiny = np.finfo(float).tiny
    for sweep in range(max_sweeps):
        rotated = False
        for p, q in rounds:
            bp, bq = B[:, p], B[:, q]
            alpha = np.einsum("ij,ij->j", bp.conj(), bp).real
            beta = np.einsum("ij,ij->j", bq.conj(), bq).real
            gamma = np.einsum("ij,ij->j", bp.conj(), bq)
            g_abs = np.abs(gamma)
            active = (
                (g_abs > tol * np.sqrt(alpha) * np.sqrt(beta))
                & (np.minimum(alpha, beta) > floor)
                & (g_abs > tiny)
            )
            if not active.any():
                continue
            rotated = True
            p, q = p[active], q[active]
            alpha, beta, gamma, g_abs = alpha[active], beta[active], gamma[active], g_abs[active]
            phase = gamma / g_abs
            zeta = (beta - alpha) / (2.0 * g_abs)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            for M in (B, V):
                mp = M[:, p]
                mq = M[:, q] * phase.conj()
                M[:, p] = c * mp - s * mq
                M[:, q] = s * mp + c * mq
        if not rotated:
            break
    else:
        raise SVDConvergenceError(max_sweeps, _relative_off_norm(B[:, :n]))

    B, V = B[:, :n], V[:n, :n]
    sigma = np.linalg.norm(B, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, B, V = sigma[order], B[:, order], V[:, order]

    U = np.zeros((m, n), complex)
    # directions of numerically zero columns are noise; replace them
    nz = sigma > np.sqrt(floor)
    U[:, nz] = B[:, nz] / sigma[nz]
    _complete_orthonormal(U, nz)
    return U, np.ldexp(sigma, shift), V.conj().T


def _complete_orthonormal(U, filled):
    """Fill the columns of ``U`` not marked in ``filled`` with orthonormal vectors.

    Zero singular values sort last, so unfilled columns form a suffix.
    """
    m, n = U.shape
    for j in np.flatnonzero(~filled):
        basis = U[:, :j]
        for e in range(m):
            v = np.zeros(m, complex)
            v[e] = 1.0
            for _ in range(2):
                v -= basis @ (basis.conj().T @ v)
            nv = np.linalg.norm(v)
            if nv > 0.5:
                U[:, j] = v / nv
                break


@lru_cache(maxsize=64)
def _legendre_rule(nodes):
    # initial guesses: Chebyshev-like approximation to the roots of P_n
    i = np.arange(1, nodes + 1)
    x = np.cos(np.pi * (i - 0.25) / (nodes + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, nodes + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = nodes * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    # derivative at the converged nodes for the weights
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, nodes + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = nodes * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x, w = x[::-1].copy(), w[::-1].copy()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(nodes, a=-1.0, b=1.0):
    """Gauss-Legendre nodes and weights on ``[a, b]``.

    Roots of the Legendre polynomial are refined by Newton iteration on
    the three-term recurrence until the update drops below 1e-15.  The
    rule integrates polynomials of degree ``2 * nodes - 1`` exactly.
    """
    if nodes < 1:
        raise ValueError("nodes must be >= 1")
    x, w = _legendre_rule(int(nodes))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w
