"""Symbols on the unit disk in Fourier-mode form.

A symbol is stored as a finite sum ``f(r e^{i theta}) = sum_m f_m(r) e^{i m theta}``
where every radial factor ``f_m`` is a polynomial in ``r``.  The mode-``m``
factor of an arbitrary ``f`` is ``(1/2pi) int f(r e^{i theta}) e^{-i m theta} dtheta``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .linalg import jacobi_svd
from .moments import omega

__all__ = [
    "RadialProfile",
    "Symbol",
    "AtomicMeasure",
    "InfeasibleZeroSet",
    "make_radial_polynomial",
    "symbol_from_bipoly",
    "prescribe_zero_set",
    "conjugate_symbol",
]


def _canonical(coeffs):
    c = [complex(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RadialProfile:
    """Polynomial ``u(r) = sum_j coeffs[j] r**j`` on ``[0, 1)``.

    Trailing zero coefficients are stripped on construction, so the zero
    profile has ``coeffs == ()`` and degree ``-1``.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _canonical(self.coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_real(self):
        return all(c.imag == 0 for c in self.coeffs)

    def __call__(self, r):
        if not self.coeffs:
            return np.zeros_like(np.asarray(r, dtype=float), dtype=complex)
        return np.polynomial.polynomial.polyval(r, np.array(self.coeffs))

    def conj(self):
        return RadialProfile(tuple(c.conjugate() for c in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, RadialProfile):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        a = a + (0j,) * (size - len(a))
        b = b + (0j,) * (size - len(b))
        return RadialProfile(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other):
        if isinstance(other, RadialProfile):
            if self.is_zero() or other.is_zero():
                return RadialProfile()
            prod = np.convolve(np.array(self.coeffs), np.array(other.coeffs))
            return RadialProfile(tuple(prod))
        if isinstance(other, (int, float, complex, np.number)):
            return RadialProfile(tuple(complex(other) * c for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"RadialProfile({list(self.coeffs)!r})"


def make_radial_polynomial(coeffs=()):
    return RadialProfile(tuple(coeffs))


@dataclass(frozen=True)
class Symbol:
    """Finite mode sum ``sum_m profile_m(r) e^{i m theta}``.

    ``modes`` is a tuple of ``(m, RadialProfile)`` pairs sorted by ``m``;
    modes with a zero profile are dropped.
    """

    modes: tuple = ()

    def __post_init__(self):
        seen = set()
        kept = []
        for m, prof in self.modes:
            m = int(m)
            if m in seen:
                raise ValueError(f"duplicate mode index {m}")
            seen.add(m)
            if not isinstance(prof, RadialProfile):
                prof = RadialProfile(tuple(prof))
            if not prof.is_zero():
                kept.append((m, prof))
        kept.sort(key=lambda t: t[0])
        object.__setattr__(self, "modes", tuple(kept))

    @classmethod
    def radial(cls, profile):
        if not isinstance(profile, RadialProfile):
            profile = RadialProfile(tuple(profile))
        return cls(((0, profile),))

    @classmethod
    def from_modes(cls, mapping):
        return cls(tuple(mapping.items()))

    def profile(self, m):
        """Radial factor of mode ``m`` (the zero profile if absent)."""
        for idx, prof in self.modes:
            if idx == m:
                return prof
        return RadialProfile()

    @property
    def indices(self):
        return tuple(m for m, _ in self.modes)

    @property
    def top_mode(self):
        if not self.modes:
            raise ValueError("the zero symbol has no top mode")
        return self.modes[-1][0]

    def is_zero(self):
        return not self.modes

    def is_radial(self):
        return all(m == 0 for m, _ in self.modes)

    def __call__(self, r, theta):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape, complex)
        for m, prof in self.modes:
            out = out + prof(r) * np.exp(1j * m * theta)
        return out

    def __repr__(self):
        body = ", ".join(f"{m}: {list(p.coeffs)!r}" for m, p in self.modes)
        return f"Symbol({{{body}}})"


def symbol_from_bipoly(terms):
    """Mode form of ``p(z, zbar) = sum a_jk z**j zbar**k``.

    Each term ``a z**j zbar**k = a r**(j+k) e^{i (j-k) theta}`` lands in mode
    ``j - k`` with radial factor ``a r**(j+k)``.  Duplicate ``(j, k)`` pairs
    are summed.  The extraction is exact.
    """
    acc = defaultdict(lambda: defaultdict(complex))
    for j, k, a in terms:
        if j < 0 or k < 0:
            raise ValueError("bipoly exponents must be nonnegative")
        acc[j - k][j + k] += complex(a)
    modes = []
    for m, powers in acc.items():
        coeffs = [0j] * (max(powers) + 1)
        for p, a in powers.items():
            coeffs[p] += a
        modes.append((m, RadialProfile(tuple(coeffs))))
    return Symbol(tuple(modes))


def conjugate_symbol(f):
    """Pointwise complex conjugate: mode ``m`` with ``u`` becomes mode ``-m`` with ``conj(u)``."""
    return Symbol(tuple((-m, p.conj()) for m, p in f.modes))


class InfeasibleZeroSet(ValueError):
    pass


def prescribe_zero_set(S, degree):
    """Nonzero polynomial profile whose radial eigenvalues vanish on ``S``.

    Solves ``omega(u, s) = 0`` for ``s`` in ``S``.  The unknowns are the
    coefficients of the even powers ``r**0, r**2, ... <= r**degree`` when
    there are more of them than constraints, otherwise all powers up to
    ``degree``.  The null vector is the right singular vector of the
    smallest singular value, scaled so its largest coefficient is 1.
    """
    S = sorted({int(s) for s in S})
    if any(s < 0 for s in S):
        raise ValueError("zero-set indices must be nonnegative")
    if degree < 0 or degree < len(S):
        raise InfeasibleZeroSet(
            f"degree {degree} cannot support {len(S)} prescribed zeros"
        )
    powers = np.arange(0, degree + 1, 2)
    if powers.size <= len(S):
        powers = np.arange(degree + 1)
    if not S:
        c = np.zeros(degree + 1, complex)
        c[0] = 1.0
        return RadialProfile(tuple(c))

    s = np.array(S)[:, None]
    # omega(r**p, s) / (2 (s+1)) = 1 / (p + 2s + 2)
    A = 1.0 / (powers[None, :] + 2 * s + 2.0)
    _, _, Vh = jacobi_svd(A)
    null = Vh[-1].conj()
    null = null / null[np.argmax(np.abs(null))]
    if not np.any(null.imag):
        null = null.real.astype(complex)
    c = np.zeros(degree + 1, complex)
    c[powers] = null
    u = RadialProfile(tuple(c))
    scan = max(4 * degree, S[-1] + 1)
    scale = max(abs(omega(u, t)) for t in range(scan))
    bad = [t for t in S if abs(omega(u, t)) > 1e-10 * scale]
    if bad:
        raise InfeasibleZeroSet(f"null-space solve left omega nonzero at {bad}")
    return u


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely supported complex measure ``sum_j w_j delta_{z_j}``.

    ``atoms`` holds ``(location, weight)`` pairs; locations are distinct,
    weights nonzero, and every ``|z_j| <= radius_bound``.
    """

    atoms: tuple = ()
    radius_bound: float = field(default=None)

    def __post_init__(self):
        atoms = tuple((complex(z), complex(w)) for z, w in self.atoms)
        locs = [z for z, _ in atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be pairwise distinct")
        if any(w == 0 for _, w in atoms):
            raise ValueError("atom weights must be nonzero")
        R = self.radius_bound
        if R is None:
            R = max((abs(z) for z in locs), default=0.0) or 1.0
        R = float(R)
        if not R > 0:
            raise ValueError("radius_bound must be positive")
        if any(abs(z) > R for z in locs):
            raise ValueError(f"atom outside the disk of radius {R}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "radius_bound", R)

    @property
    def locations(self):
        return np.array([z for z, _ in self.atoms], dtype=complex)

    @property
    def weights(self):
        return np.array([w for _, w in self.atoms], dtype=complex)

    def __len__(self):
        return len(self.atoms)

    def origin_mass(self):
        return sum((w for z, w in self.atoms if z == 0), 0j)

    def without_origin(self):
        """``nu - nu({0}) delta_0``; the radius bound is kept."""
        return AtomicMeasure(
            tuple((z, w) for z, w in self.atoms if z != 0), self.radius_bound
        )
