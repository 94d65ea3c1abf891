"""Executable checks of the finite-rank structure of Toeplitz operators.

* zero sets ``Z(h) = {m : omega(h, m) = 0}`` of radial symbols and their
  Muntz sums ``sum 1/(m+1)``;
* the triangular structure of ``T_f`` when ``f`` has a top Fourier mode;
* the determinant sums attached to an atomic measure ``nu``,

      sum over atom tuples of  prod_l z_l**m_l * det(conj(z_j)**k_i)
      * |z_1 ... z_N|**(2w)  d nu^N,

  which vanish whenever ``nu`` has fewer than ``N`` atoms;
* rank accounting for products ``S2 T_f S1`` with diagonal ``S1, S2``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import mpmath
import numpy as np

from .linalg import jacobi_svd
from .moments import EigenvalueSequence, eigenvalue_sequence, moment
from .operators import (
    ARTIFACT_FLAG,
    DEFAULT_RANK_TOL,
    RankReport,
    diagonal_operator,
    multiply,
    numerical_rank,
    toeplitz_matrix,
)
from .symbols import RadialProfile, Symbol

__all__ = [
    "ZERO_TOL",
    "MAX_TUPLES",
    "WORKERS_ENV",
    "ZeroSymbolError",
    "HypothesisViolation",
    "TupleGuardError",
    "OriginAtomError",
    "ZeroSetReport",
    "TriangularResult",
    "ExperimentReport",
    "zero_set_report",
    "triangular_reconstruction",
    "determinant_terms",
    "determinant_identity",
    "f_eval",
    "f_eval_bound",
    "product_rank_experiment",
]

ZERO_TOL = 1e-10
# extended-precision rerun of determinant sums below this |value| / scale
REFINE_RATIO = 1e-3
REFINE_MAX_TUPLES = 5040
RESIDUAL_TOL = 1e-10
HYPOTHESIS_TOL = 1e-12
MAX_TUPLES = 10**6
WORKERS_ENV = "BERGMAN_TOEPLITZ_WORKERS"
_CHUNK = 1 << 14


class ZeroSymbolError(ValueError):
    pass


class HypothesisViolation(ValueError):
    """The top-mode moment needed by the triangular step vanishes."""

    def __init__(self, k, value):
        super().__init__(f"hypothesis violated at k={k}: top-mode moment {value:.3e}")
        self.k = k
        self.value = value


class TupleGuardError(ValueError):
    pass


class OriginAtomError(ValueError):
    pass


@dataclass(frozen=True)
class ZeroSetReport:
    indices: tuple
    muntz_partial_sum: Fraction
    scan_limit: int
    tol: float


def zero_set_report(seq, tol=ZERO_TOL):
    """Indices ``m < n`` where ``|omega(h, m)| <= tol * max |omega|``."""
    values = seq.values if isinstance(seq, EigenvalueSequence) else np.asarray(seq)
    if values.size == 0:
        raise ValueError("empty eigenvalue sequence")
    mags = np.abs(values)
    top = mags.max()
    if top == 0:
        raise ZeroSymbolError("zero symbol: every eigenvalue vanishes")
    idx = tuple(int(m) for m in np.flatnonzero(mags <= tol * top))
    total = sum((Fraction(1, m + 1) for m in idx), Fraction(0))
    return ZeroSetReport(idx, total, int(values.size), float(tol))


@dataclass(frozen=True)
class TriangularResult:
    k: int
    top_mode: int
    residual: float
    leading_coefficient: complex


def triangular_reconstruction(f, k, n, hypothesis_tol=HYPOTHESIS_TOL):
    """Least-squares residual of ``e_{k+M}`` against ``{T_f e_k, e_0, ..., e_{k+M-1}}``.

    ``M`` is the top mode of ``f``.  The coefficient of ``e_{k+M}`` in
    ``T_f e_k`` is ``2 sqrt((k+1)(k+M+1)) * int f_M(r) r**(2k+M+1) dr``; when
    it vanishes (relative to the absolute moment sum) the reconstruction is
    impossible and :class:`HypothesisViolation` is raised.
    """
    M = f.top_mode
    j = k + M
    if k < 0 or j < 1:
        raise ValueError(f"need k >= 0 and k + M >= 1, got k={k}, M={M}")
    if j >= n:
        raise ValueError(f"k + M = {j} must be below the truncation size {n}")
    prof = f.profile(M)
    mom = moment(prof, 2 * k + M + 1)
    scale = sum(abs(c) / (p + 2 * k + M + 2) for p, c in enumerate(prof.coeffs))
    if abs(mom) <= hypothesis_tol * scale:
        raise HypothesisViolation(k, abs(mom))
    lead = 2.0 * math.sqrt((k + 1) * (j + 1)) * mom

    T = toeplitz_matrix(f, n).entries
    basis = np.zeros((n, j + 1), complex)
    basis[:, 0] = T[:, k]
    basis[np.arange(j), np.arange(1, j + 1)] = 1.0
    target = np.zeros(n, complex)
    target[j] = 1.0
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    residual = float(np.linalg.norm(basis @ coef - target))
    return TriangularResult(k, M, residual, complex(lead))


def _workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _tuple_count(nu, N):
    d = len(nu)
    count = d**N
    if count > MAX_TUPLES:
        raise TupleGuardError(f"{d}**{N} = {count} atom tuples exceeds the guard {MAX_TUPLES}")
    return count


def _chunk_terms(z, wts, logabs, m, k, w, start, stop):
    d = z.size
    N = m.size
    J = np.stack(np.unravel_index(np.arange(start, stop), (d,) * N), axis=1)
    zJ = z[J]
    weight = np.prod(wts[J] * zJ ** m[None, :], axis=1)
    # mat[t, i, j] = conj(z_{J[t, j]})**k_i
    mat = np.conj(zJ)[:, None, :] ** k[None, :, None]
    det = np.linalg.det(mat) if N > 1 else mat[:, 0, 0]
    terms = weight * det
    hadamard = np.prod(np.linalg.norm(mat, axis=2), axis=1)
    mags = np.abs(weight) * hadamard
    if w is not None:
        factor = np.exp(2.0 * w * logabs[J].sum(axis=1))
        terms = terms * factor
        mags = mags * np.abs(factor)
    return terms, mags


def _mp_det(rows):
    # partial pivoting; an exactly zero pivot column means det = 0
    a = [list(r) for r in rows]
    n = len(a)
    det = mpmath.mpc(1)
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(a[i][c]))
        if a[p][c] == 0:
            return mpmath.mpc(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            for j in range(c + 1, n):
                a[i][j] -= f * a[c][j]
    return det


def _refined(nu, N, m, k, w, dps):
    """The same tuple sum in ``dps``-digit arithmetic.

    Tuples repeating an atom have two equal columns and contribute exactly
    zero, so only ordered tuples of distinct atoms are visited.
    """
    with mpmath.workdps(dps):
        z = [mpmath.mpc(complex(x)) for x in nu.locations]
        c = [mpmath.mpc(complex(x)) for x in nu.weights]
        zbar_pow = [[mpmath.conj(x) ** int(e) for e in k] for x in z]
        logabs = [mpmath.log(abs(x)) if x != 0 else None for x in z]
        wm = mpmath.mpc(w) if w is not None else None
        total = mpmath.mpc(0)
        for tup in permutations(range(len(z)), N):
            weight = mpmath.mpc(1)
            for l, a in enumerate(tup):
                weight *= c[a] * z[a] ** int(m[l])
            term = weight * _mp_det([[zbar_pow[a][i] for a in tup] for i in range(N)])
            if wm is not None:
                term *= mpmath.exp(2 * wm * mpmath.fsum(logabs[a] for a in tup))
            total += term
        return complex(total)


def _check_exponents(N, m, k):
    m = np.asarray(m, dtype=int)
    k = np.asarray(k, dtype=int)
    if N < 1:
        raise ValueError("N must be >= 1")
    if m.shape != (N,) or k.shape != (N,):
        raise ValueError(f"m and k must each hold N = {N} entries")
    if (m < 0).any() or (k < 0).any():
        raise ValueError("exponents must be nonnegative")
    return m, k


def _summed(nu, N, m, k, w):
    m, k = _check_exponents(N, m, k)
    total = _tuple_count(nu, N)
    if np.unique(k).size < N:
        # two equal rows in every determinant
        return 0j, 0.0
    z, wts = nu.locations, nu.weights
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(z))
    bounds = [(s, min(s + _CHUNK, total)) for s in range(0, total, _CHUNK)]

    def run(b):
        terms, mags = _chunk_terms(z, wts, logabs, m, k, w, *b)
        return terms.sum(), mags.sum()

    workers = _workers()
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    value = complex(sum((p[0] for p in parts), 0j))
    scale = float(sum((p[1] for p in parts), 0.0))

    # Orderings of one atom set cancel down to det(z**m) det(conj(z)**k);
    # when most digits cancel, redo the small sums in extended precision.
    d = len(nu)
    if N <= d and abs(value) < REFINE_RATIO * scale and math.perm(d, N) <= REFINE_MAX_TUPLES:
        lost = math.log10(scale / abs(value)) if value else 40.0
        value = _refined(nu, N, m, k, w, min(30 + math.ceil(lost), 120))
    return value, scale


def determinant_terms(nu, N, m, k, w=None):
    """All summands and their magnitude bounds, in lexicographic tuple order.

    The magnitude of a summand is ``|prod w z**m|`` times the Hadamard bound
    ``prod_i ||row_i||`` on the determinant.
    """
    m, k = _check_exponents(N, m, k)
    total = _tuple_count(nu, N)
    z, wts = nu.locations, nu.weights
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(z))
    return _chunk_terms(z, wts, logabs, m, k, w, 0, total)


def determinant_identity(nu, N, m, k, return_scale=False):
    """Exact finite sum ``int prod z_l**m_l det(conj(z_j)**k_i) d nu^N``.

    With ``return_scale`` the sum of summand magnitude bounds is returned
    as well, giving a natural yardstick for "numerically zero".
    """
    value, scale = _summed(nu, N, m, k, None)
    return (value, scale) if return_scale else value


def f_eval(nu, N, m, k, w, return_scale=False):
    """Determinant sum weighted by ``|z_1 ... z_N|**(2w)``, ``Re(w) >= 0``.

    Powers use the principal logarithm, ``t**w = exp(w log t)``.
    """
    w = complex(w)
    if w.real < 0:
        raise ValueError("f_eval requires Re(w) >= 0")
    if any(z == 0 for z, _ in nu.atoms):
        raise OriginAtomError("origin atom excluded: remove it with without_origin()")
    value, scale = _summed(nu, N, m, k, w)
    return (value, scale) if return_scale else value


def f_eval_bound(nu, N, m, k):
    """Constant ``C`` with ``|F(w)| <= C R**(2 N Re w)`` on ``Re(w) >= 0``."""
    zmax = float(np.max(np.abs(nu.locations))) if len(nu) else 0.0
    wsum = float(np.sum(np.abs(nu.weights)))
    return wsum**N * zmax ** int(np.sum(m)) * math.factorial(N) * zmax ** int(np.sum(k))


@dataclass(frozen=True)
class ExperimentReport:
    config_echo: dict
    predicted_rank: int | None
    observed_rank: RankReport
    residuals: dict
    tolerances: dict
    verdict: str
    zero_sets: dict = field(default_factory=dict)
    kernel_indices: tuple = ()
    notes: tuple = ()

    @property
    def passed(self):
        return self.verdict == "pass"


def _as_profile(h):
    return h if isinstance(h, RadialProfile) else RadialProfile(tuple(h))


def product_rank_experiment(
    g_list,
    f_mid,
    f_list,
    n,
    tol=DEFAULT_RANK_TOL,
    zero_tol=ZERO_TOL,
    residual_tol=RESIDUAL_TOL,
):
    """Rank of the truncation of ``T_g1 ... T_gp  T_f  T_f1 ... T_fq``.

    The outer factors are radial, so their truncations are diagonal and the
    product of truncations is the truncation of the product.  When ``f_mid``
    is radial too, the predicted rank is the number of ``m < n`` at which no
    factor's eigenvalue vanishes.  For non-radial ``f_mid`` no prediction is
    made.

    Residuals reported:

    ``s1_identity``
        ``max_j || e_j - S1 e_j / prod_i omega(f_i, j) ||`` over ``j`` outside
        the combined zero set.
    ``s2_kernel``
        norm of the numerical kernel of ``S2`` outside the span of
        ``{e_j : j in Z(g_1) u ... }``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    g_list = [_as_profile(h) for h in g_list]
    f_list = [_as_profile(h) for h in f_list]
    if not isinstance(f_mid, Symbol):
        f_mid = Symbol.radial(_as_profile(f_mid))
    for h in g_list + f_list:
        if h.is_zero():
            raise ZeroSymbolError(f"zero profile among the radial factors: {h!r}")

    def seq(h):
        return eigenvalue_sequence(h, n).values

    g_seqs = [seq(h) for h in g_list]
    f_seqs = [seq(h) for h in f_list]
    zg = [zero_set_report(s, zero_tol).indices for s in g_seqs]
    zf = [zero_set_report(s, zero_tol).indices for s in f_seqs]
    union = sorted(set().union(*zg, *zf))
    kernel_idx = tuple(sorted(set().union(*zg)))

    ones = np.ones(n, complex)
    s2_diag = np.prod(g_seqs, axis=0) if g_seqs else ones
    s1_diag = np.prod(f_seqs, axis=0) if f_seqs else ones
    S2 = diagonal_operator(s2_diag, "S2")
    S1 = diagonal_operator(s1_diag, "S1")
    T = toeplitz_matrix(f_mid, n)
    P = multiply([S2, T, S1])
    observed = numerical_rank(P, tol)

    notes = []
    zero_sets = {"g": [list(z) for z in zg], "f": [list(z) for z in zf]}
    if f_mid.is_radial():
        if f_mid.is_zero():
            mid_zero = set(range(n))
        else:
            mid_zero = set(zero_set_report(seq(f_mid.profile(0)), zero_tol).indices)
        zero_sets["mid"] = sorted(mid_zero)
        predicted = n - len(set(union) | mid_zero)
    else:
        predicted = None
        notes.append("no prediction")
    if ARTIFACT_FLAG in P.provenance:
        notes.append(ARTIFACT_FLAG)

    keep = np.array([j for j in range(n) if j not in set(union)], dtype=int)
    if keep.size:
        E = np.eye(n, dtype=complex)[:, keep]
        recon = (S1.entries @ E) / s1_diag[keep][None, :]
        s1_res = float(np.max(np.linalg.norm(E - recon, axis=0)))
    else:
        s1_res = 0.0

    _, sv, Vh = jacobi_svd(S2.entries)
    null = Vh[sv <= tol * sv[0]].conj().T if sv[0] > 0 else np.eye(n)
    outside = np.ones(n, bool)
    outside[list(kernel_idx)] = False
    s2_res = float(np.linalg.norm(null[outside])) if null.size else 0.0

    residuals = {"s1_identity": s1_res, "s2_kernel": s2_res}
    tolerances = {
        "rank": float(tol),
        "zero": float(zero_tol),
        "s1_identity": float(residual_tol),
        "s2_kernel": float(residual_tol),
    }
    ok = all(residuals[name] < tolerances[name] for name in residuals)
    if predicted is not None:
        ok = ok and observed.rank == predicted
    echo = {
        "g": [list(h.coeffs) for h in g_list],
        "f_mid": repr(f_mid),
        "f": [list(h.coeffs) for h in f_list],
        "n": n,
    }
    return ExperimentReport(
        config_echo=echo,
        predicted_rank=predicted,
        observed_rank=observed,
        residuals=residuals,
        tolerances=tolerances,
        verdict="pass" if ok else "fail",
        zero_sets=zero_sets,
        kernel_indices=kernel_idx,
        notes=tuple(notes),
    )

