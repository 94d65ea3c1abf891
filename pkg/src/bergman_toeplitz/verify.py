"""Self-check suite: every structural property the library promises, as named checks.

Run with ``bergman-toeplitz verify``.  Each check prints one line with its
worst residual; the suite fails if any check does.
"""

from __future__ import annotations

import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import analysis, io, moments, operators, symbols
from .linalg import gauss_legendre, jacobi_svd

_CHECKS = []


def check(name):
    def deco(fn):
        _CHECKS.append((name, fn))
        return fn

    return deco


def _rng():
    return np.random.default_rng(20240611)


def _random_profile(rng, degree, complex_=True):
    c = rng.normal(size=degree + 1)
    if complex_:
        c = c + 1j * rng.normal(size=degree + 1)
    return symbols.RadialProfile(tuple(c))


def _random_symbol(rng, mode_range=(-3, 3), max_degree=5):
    lo, hi = mode_range
    ms = rng.choice(np.arange(lo, hi + 1), size=rng.integers(1, 4), replace=False)
    return symbols.Symbol(
        tuple((int(m), _random_profile(rng, int(rng.integers(0, max_degree + 1)))) for m in ms)
    )


def _random_measure(rng, d, radius=0.95):
    r = radius * np.sqrt(rng.uniform(0.05, 1.0, size=d))
    z = r * np.exp(2j * np.pi * rng.uniform(size=d))
    w = rng.normal(size=d) + 1j * rng.normal(size=d)
    return symbols.AtomicMeasure(tuple(zip(z, w)), 1.0)


# symbols ----------------------------------------------------------------


@check("bipoly mode extraction round trip")
def _bipoly_round_trip():
    rng = _rng()
    worst = 0.0
    for _ in range(20):
        terms = [
            (int(rng.integers(0, 6)), int(rng.integers(0, 6)), complex(*rng.normal(size=2)))
            for _ in range(int(rng.integers(1, 6)))
        ]
        f = symbols.symbol_from_bipoly(terms)
        r = rng.uniform(0, 1, size=50)
        th = rng.uniform(0, 2 * np.pi, size=50)
        z = r * np.exp(1j * th)
        direct = sum(a * z**j * np.conj(z) ** k for j, k, a in terms)
        scale = sum(abs(a) for _, _, a in terms)
        worst = max(worst, float(np.max(np.abs(f(r, th) - direct))) / scale)
    return worst < 1e-12, worst


@check("conjugate_symbol is an involution")
def _conj_involution():
    rng = _rng()
    ok = all(
        symbols.conjugate_symbol(symbols.conjugate_symbol(f)) == f
        for f in (_random_symbol(rng) for _ in range(20))
    )
    return ok, 0.0


@check("prescribe_zero_set hits its zeros")
def _prescribed_zeros():
    worst = 0.0
    for S, deg in [({1}, 2), ({0, 2}, 4), ({0, 1}, 3), ({0, 1, 2}, 6), ({3, 5, 9}, 6), ({2, 7}, 4)]:
        u = symbols.prescribe_zero_set(S, deg)
        vals = np.abs(moments.eigenvalue_sequence(u, 4 * deg).values)
        worst = max(worst, max(vals[s] for s in S) / vals.max())
    return worst < 1e-10, worst


@check("Parseval: area norm equals sum of mode norms")
def _parseval():
    rng = _rng()
    worst = 0.0
    r, wr = gauss_legendre(24, 0.0, 1.0)
    th = 2 * np.pi * np.arange(32) / 32
    for _ in range(10):
        f = _random_symbol(rng)
        vals = f(r[:, None], th[None, :])
        # dA = r dr dtheta / pi; trapezoid in theta is exact for these modes
        area = float(np.sum(wr[:, None] * r[:, None] * np.abs(vals) ** 2) * (2 * np.pi / 32) / np.pi)
        modes = sum(
            2 * moments.moment(p * p.conj(), 1).real for _, p in f.modes
        )
        worst = max(worst, abs(area - modes) / modes)
    return worst < 1e-10, worst


# moments ----------------------------------------------------------------


@check("closed-form moments match 32-node Gauss-Legendre")
def _moment_oracle():
    rng = _rng()
    worst = 0.0
    for _ in range(200):
        u = _random_profile(rng, int(rng.integers(0, 13)))
        k = int(rng.integers(0, 41))
        exact = moments.moment(u, k)
        quad = moments.quadrature_moment(u, k, 32)
        worst = max(worst, abs(exact - quad) / (1 + abs(exact)))
    return worst < 1e-13, worst


@check("omega is linear in the profile")
def _omega_linear():
    rng = _rng()
    worst = 0.0
    for _ in range(20):
        u, v = _random_profile(rng, 6), _random_profile(rng, 4)
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        for m in range(10):
            lhs = moments.omega(a * u + b * v, m)
            rhs = a * moments.omega(u, m) + b * moments.omega(v, m)
            worst = max(worst, abs(lhs - rhs))
    return worst < 1e-14 * 10, worst


@check("eigenvalue change of variables r = t**2")
def _substitution():
    rng = _rng()
    x, w = gauss_legendre(32, 0.0, 1.0)
    worst = 0.0
    for _ in range(20):
        # u(sqrt(r)) is a polynomial only for even profiles, keeping the rule exact
        c = np.zeros(9, complex)
        c[0::2] = rng.normal(size=5) + 1j * rng.normal(size=5)
        u = symbols.RadialProfile(tuple(c))
        for m in range(12):
            quad = (m + 1) * np.sum(w * u(np.sqrt(x)) * x**m)
            worst = max(worst, abs(quad - moments.omega(u, m)))
    return worst < 1e-12, worst


@check("real profiles give real eigenvalues")
def _real_omega():
    rng = _rng()
    worst = max(
        float(np.max(np.abs(moments.eigenvalue_sequence(_random_profile(rng, 8, False), 32).values.imag)))
        for _ in range(20)
    )
    return worst < 1e-15, worst


# operators --------------------------------------------------------------


@check("T_1 = I")
def _identity():
    T = operators.toeplitz_matrix(symbols.Symbol.radial([1.0]), 32).entries
    err = float(np.max(np.abs(T - np.eye(32))))
    return err == 0.0, err


@check("T_zbar subdiagonal is sqrt(k/(k+1))")
def _zbar():
    n = 32
    T = operators.toeplitz_matrix(symbols.symbol_from_bipoly([(0, 1, 1)]), n).entries.copy()
    k = np.arange(1, n)
    err = float(np.max(np.abs(T[k - 1, k] - np.sqrt(k / (k + 1)))))
    T[k - 1, k] = 0
    err = max(err, float(np.max(np.abs(T))))
    return err < 1e-14, err


@check("adjoint law T_conj(f) = T_f^H")
def _adjoint():
    rng = _rng()
    worst = 0.0
    for _ in range(20):
        f = _random_symbol(rng)
        A = operators.toeplitz_matrix(f, 24).entries
        B = operators.toeplitz_matrix(symbols.conjugate_symbol(f), 24).entries
        worst = max(worst, float(np.max(np.abs(B - A.conj().T))))
    return worst < 1e-13, worst


@check("band structure of mode-limited symbols")
def _band():
    rng = _rng()
    ok = True
    for _ in range(20):
        f = _random_symbol(rng)
        A = operators.toeplitz_matrix(f, 24).entries
        l, k = np.indices(A.shape)
        outside = ~np.isin(l - k, f.indices)
        ok &= not np.any(A[outside])
        lo, hi = min(f.indices), max(f.indices)
        ok &= not np.any(A[(l - k > hi) | (l - k < lo)])
    return bool(ok), 0.0


@check("truncation nesting")
def _nesting():
    rng = _rng()
    ok = True
    for _ in range(20):
        f = _random_symbol(rng)
        n = int(rng.integers(1, 30))
        ok &= np.array_equal(
            operators.toeplitz_matrix(f, n + 1).entries[:n, :n],
            operators.toeplitz_matrix(f, n).entries,
        )
    return bool(ok), 0.0


@check("radial symbols are diagonal with omega on the diagonal")
def _radial_diag():
    rng = _rng()
    worst = 0.0
    ok = True
    for _ in range(20):
        u = _random_profile(rng, int(rng.integers(0, 9)))
        A = operators.toeplitz_matrix(symbols.Symbol.radial(u), 32).entries
        ok &= not np.any(A - np.diag(np.diag(A)))
        om = np.array([moments.omega(u, m) for m in range(32)])
        worst = max(worst, float(np.max(np.abs(np.diag(A) - om))))
    return bool(ok) and worst < 1e-14, worst


@check("positive measures give PSD forms (SVD = eigenvalues)")
def _psd():
    rng = _rng()
    worst = 0.0
    for d in range(1, 9):
        nu = _random_measure(rng, d)
        nu = symbols.AtomicMeasure(tuple((z, abs(w)) for z, w in nu.atoms), 1.0)
        A = operators.measure_matrix(nu, 16).entries
        s = operators.numerical_rank(A).singular_values
        ev = np.sort(np.linalg.eigvalsh(A))[::-1]
        worst = max(worst, float(np.max(np.abs(s - ev))) / max(1.0, s[0]))
    return worst < 1e-10, worst


@check("Jacobi SVD reconstructs random matrices")
def _svd_self():
    rng = _rng()
    worst = 0.0
    for n in (1, 2, 5, 16, 33, 64):
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        U, s, Vh = jacobi_svd(A)
        worst = max(worst, float(np.linalg.norm(A - (U * s) @ Vh) / np.linalg.norm(A)))
    return worst < 1e-12, worst


@check("atomic measures: rank equals number of atoms")
def _atomic_rank():
    rng = _rng()
    failures = 0
    for d in range(1, 9):
        nu = _random_measure(rng, d, radius=0.9)
        failures += operators.numerical_rank(operators.measure_matrix(nu, max(2 * d, 16))).rank != d
    return failures == 0, float(failures)


# analysis ---------------------------------------------------------------


@check("determinant sum is antisymmetric in k")
def _antisym():
    rng = _rng()
    worst = 0.0
    ok = True
    for _ in range(20):
        nu = _random_measure(rng, 3)
        m = rng.integers(0, 6, size=3)
        k = rng.choice(8, size=3, replace=False)
        v = analysis.determinant_identity(nu, 3, m, k)
        ks = k[[1, 0, 2]]
        worst = max(worst, abs(v + analysis.determinant_identity(nu, 3, m, ks)) / max(1.0, abs(v)))
        ok &= analysis.determinant_identity(nu, 3, m, [k[0], k[0], k[1]]) == 0
    return bool(ok) and worst < 1e-12, worst


@check("determinant sum vanishes for fewer atoms than N")
def _vanish():
    rng = _rng()
    worst = 0.0
    for trial in range(100):
        d = 1 + trial % 5
        nu = _random_measure(rng, d)
        N = d + 1
        m = rng.integers(0, 9, size=N)
        k = rng.integers(0, 9, size=N)
        v, scale = analysis.determinant_identity(nu, N, m, k, return_scale=True)
        if scale > 0:
            worst = max(worst, abs(v) / scale)
    return worst <= 1e-12, worst


@check("F(s) equals the exponent-shifted determinant sum")
def _shift():
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(1, 5))
        N = int(rng.integers(1, d + 1))
        nu = _random_measure(rng, d)
        # distinct exponents, otherwise the sum vanishes identically
        m = rng.choice(6, size=N, replace=False)
        k = rng.choice(6, size=N, replace=False)
        s = int(rng.integers(0, 9))
        a = analysis.f_eval(nu, N, m, k, s)
        b = analysis.determinant_identity(nu, N, m + s, k + s)
        worst = max(worst, abs(a - b) / abs(b))
    return worst < 1e-13, worst


@check("|F(w)| R**(-2N Re w) stays below the explicit bound")
def _bounded():
    rng = _rng()
    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(1, 5))
        N = int(rng.integers(1, 4))
        nu = _random_measure(rng, d)
        m = rng.integers(0, 5, size=N)
        k = rng.integers(0, 5, size=N)
        C = analysis.f_eval_bound(nu, N, m, k)
        R = nu.radius_bound
        for re in np.linspace(0, 10, 6):
            w = complex(re, rng.normal() * 5)
            val = abs(analysis.f_eval(nu, N, m, k, w)) * R ** (-2 * N * re)
            worst = max(worst, val / C)
    return worst <= 1.0, worst


@check("triangular reconstruction closes")
def _triangular():
    n = 32
    worst = 0.0
    for terms in ([(1, 0, 1)], [(1, 0, 1), (0, 1, 1)], [(2, 0, 1), (0, 0, 1)], [(1, 0, 1), (0, 2, 2)]):
        f = symbols.symbol_from_bipoly(terms)
        M = f.top_mode
        for k in range(max(0, 1 - M), n):
            if not 1 <= k + M < n / 2:
                continue
            worst = max(worst, analysis.triangular_reconstruction(f, k, n).residual)
    return worst < 1e-10, worst


@check("product rank equals the predicted rank")
def _product():
    failures = 0
    cases = [
        ([({0, 1}, 3)], []),
        ([({1}, 2)], [({4}, 2)]),
        ([({0, 2}, 4), ({5}, 2)], [({1, 3, 6}, 6)]),
        ([], [({2, 7}, 4), ({2}, 2)]),
    ]
    for g, f in cases:
        gl = [symbols.prescribe_zero_set(S, d) for S, d in g]
        fl = [symbols.prescribe_zero_set(S, d) for S, d in f]
        for n in (8, 32, 64):
            rep = analysis.product_rank_experiment(gl, symbols.RadialProfile((1.0,)), fl, n)
            failures += not rep.passed
    return failures == 0, float(failures)


# reports ----------------------------------------------------------------


@check("CSV round trip is exact")
def _csv():
    rng = _rng()
    A = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    with tempfile.TemporaryDirectory() as tmp:
        p = Path(tmp) / "a.csv"
        io.write_matrix_csv(p, A)
        ok = np.array_equal(io.read_matrix_csv(p), A)
    return bool(ok), 0.0


@check("report documents are deterministic")
def _determinism():
    from .cli import run_config

    cfg = '{"kind": "product", "g": [[1, 0, -1.5]], "f_mid": {"radial": [0, 0, 1]}, "f": [[0, 0, 1]], "n": 8}'
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "p.json"
        path.write_text(cfg)
        outs = []
        for i in range(2):
            out = Path(tmp) / f"out{i}"
            run_config(path, out=out, stream=None)
            outs.append((out / "p.product.json").read_bytes())
    return outs[0] == outs[1], 0.0


def verify_suite(stream=None):
    """Run every check; return True when all pass."""
    stream = sys.stdout if stream is None else stream
    ok_all = True
    t0 = time.perf_counter()
    for name, fn in _CHECKS:
        try:
            ok, resid = fn()
            detail = f"residual {resid:.3e}"
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"error: {type(exc).__name__}: {exc}"
        ok_all &= bool(ok)
        print(f"{'PASS' if ok else 'FAIL'}  {name:55s} {detail}", file=stream)
    print(
        f"{'all checks passed' if ok_all else 'FAILURES'} "
        f"({len(_CHECKS)} checks, {time.perf_counter() - t0:.1f}s)",
        file=stream,
    )
    return ok_all


def check_names():
    return [name for name, _ in _CHECKS]


def run_check(name):
    for n, fn in _CHECKS:
        if n == name:
            return fn()
    raise KeyError(name)

