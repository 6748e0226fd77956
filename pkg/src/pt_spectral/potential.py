"""Algebra of the polynomial potential.

Problem instances are ``-u'' - [(iz)^m + P(iz)] u = lambda u`` with
``P(z) = a_1 z^{m-1} + ... + a_{m-1} z``.  After the rotation ``v(z) = u(-iz)``
the equation reads ``v'' = (z^m + P(z) + lambda) v``; everything in this module
refers to that rotated form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import BranchCutError, DivergenceError, InvalidSpecError, SeriesCapacityError

MAX_SERIES_TERMS = 64


def omega(m: int) -> complex:
    return cmath.exp(2j * math.pi / (m + 2))


def _unit(m: int, power: int) -> complex:
    """omega**power evaluated from the reduced exponent, so integer powers compose exactly."""
    n = m + 2
    return cmath.exp(2j * math.pi * (power % n) / n)


@dataclass(frozen=True)
class PotentialSpec:
    m: int
    a: tuple

    def __init__(self, m: int, a: Sequence[float] = ()):
        if isinstance(m, bool) or int(m) != m:
            raise InvalidSpecError(f"degree must be an integer, got {m!r}")
        m = int(m)
        if m < 2:
            raise InvalidSpecError(f"degree must be >= 2, got {m}")
        a = tuple(float(x) for x in a) if len(a) else (0.0,) * (m - 1)
        if len(a) != m - 1:
            raise InvalidSpecError(f"m = {m} needs {m - 1} coefficients, got {len(a)}")
        if not all(math.isfinite(x) for x in a):
            raise InvalidSpecError("coefficients must be finite")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "a", a)

    @property
    def coeffs(self) -> np.ndarray:
        return np.asarray(self.a, dtype=complex)

    def P(self, z):
        """P(z) = a_1 z^{m-1} + ... + a_{m-1} z."""
        return sum(ak * z ** (self.m - k) for k, ak in enumerate(self.a, start=1))


@dataclass(frozen=True)
class RotatedSpec:
    """Coefficients G^k(a) of the rotated equation together with the factor omega^{-mk}."""

    m: int
    coeffs: tuple
    lambda_factor: complex
    k: int

    def effective_lambda(self, lam: complex) -> complex:
        return self.lambda_factor * lam


SpecLike = Union[PotentialSpec, RotatedSpec]


def _coeffs_of(spec: SpecLike) -> np.ndarray:
    if isinstance(spec, RotatedSpec):
        return np.asarray(spec.coeffs, dtype=complex)
    return spec.coeffs


def _effective_lambda(spec: SpecLike, lam: complex) -> complex:
    if isinstance(spec, RotatedSpec):
        return spec.effective_lambda(lam)
    return complex(lam)


def qpoly(spec: SpecLike, lam: complex) -> np.ndarray:
    """Coefficients (descending) of z^m + P(z) + lambda for the given frame."""
    m = spec.m
    q = np.zeros(m + 1, dtype=complex)
    q[0] = 1.0
    q[1:m] = _coeffs_of(spec)
    q[m] = _effective_lambda(spec, lam)
    return q


def rotate_frame(spec: SpecLike, k: int) -> RotatedSpec:
    """Apply G^k: a_j -> omega^{-jk} a_j, and report the lambda multiplier omega^{-mk}.

    Rotating a RotatedSpec composes the two rotations.
    """
    m = spec.m
    k = int(k)
    coeffs = tuple(complex(c) * _unit(m, -j * k) for j, c in enumerate(_coeffs_of(spec), start=1))
    if isinstance(spec, RotatedSpec):
        return RotatedSpec(m, coeffs, spec.lambda_factor * _unit(m, -m * k), spec.k + k)
    return RotatedSpec(m, coeffs, _unit(m, -m * k), k)


@dataclass(frozen=True)
class SeriesCoeffs:
    b: np.ndarray
    r: complex
    nu_tilde: complex
    lambda_used: complex

    def __getitem__(self, j: int) -> complex:
        """b_j with the 1-based index used in the expansion."""
        if j < 1 or j > len(self.b):
            raise IndexError(j)
        return self.b[j - 1]


def _series_mul(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    return np.convolve(x, y)[:n]


def expand_b(spec: SpecLike, lam: complex, J: int) -> SeriesCoeffs:
    """Coefficients b_1..b_J of sqrt(1 + a_1 w + ... + a_{m-1} w^{m-1} + lam w^m) in w = 1/z.

    Computed by composing the binomial series of sqrt(1 + x) with the
    truncated polynomial x(w).
    """
    J = int(J)
    if J < 1:
        raise SeriesCapacityError("J must be >= 1")
    if J > MAX_SERIES_TERMS:
        raise SeriesCapacityError(f"J = {J} exceeds the series cap of {MAX_SERIES_TERMS}")
    lam = complex(lam)
    coeffs = _coeffs_of(spec)
    if not (cmath.isfinite(lam) and np.all(np.isfinite(coeffs))):
        raise InvalidSpecError("non-finite input")
    m = spec.m
    # nu-tilde needs b_{m/2+1} even when fewer terms are requested
    need = max(J, m // 2 + 1)
    n = need + 1
    x = np.zeros(n, dtype=complex)
    top = min(m, need)
    x[1:top + 1] = np.append(coeffs, _effective_lambda(spec, lam))[:top]

    total = np.zeros(n, dtype=complex)
    total[0] = 1.0
    power = np.zeros(n, dtype=complex)
    power[0] = 1.0
    binom = 1.0
    for k in range(1, need + 1):
        power = _series_mul(power, x, n)
        binom *= (0.5 - (k - 1)) / k
        total += binom * power
    b = total[1:]
    r, nu = _r_nu_from_b(m, b)
    return SeriesCoeffs(b=b[:J], r=r, nu_tilde=nu, lambda_used=lam)


def _r_nu_from_b(m: int, b: np.ndarray):
    if m % 2:
        return complex(-m / 4), 0j
    nu = complex(b[m // 2])
    return -m / 4 - nu, nu


def r_and_nu(spec: SpecLike, lam: complex = 0.0):
    """Exponent r_m of the solution's algebraic prefactor, and nu-tilde."""
    m = spec.m
    if m % 2:
        return complex(-m / 4), 0j
    s = expand_b(spec, lam, m // 2 + 1)
    return s.r, s.nu_tilde


def _check_branch(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise BranchCutError("z = 0 is a branch point of the fractional powers")
    if z.imag == 0 and z.real < 0:
        raise BranchCutError(f"z = {z} lies on the branch cut (negative real axis)")
    return z


def F_eval(z: complex, spec: SpecLike, lam: complex = 0.0) -> complex:
    """Exponent F(z, a, lambda) of the decaying solution, principal branch."""
    z = _check_branch(z)
    m = spec.m
    jmax = (m + 1) // 2 if m % 2 else m // 2
    s = expand_b(spec, lam, max(jmax, 1))
    logz = cmath.log(z)
    F = 2 / (m + 2) * cmath.exp((m + 2) / 2 * logz)
    for j in range(1, jmax + 1):
        if j < m / 2 + 1:
            F += 2 / (m + 2 - 2 * j) * s[j] * cmath.exp((m + 2 - 2 * j) / 2 * logz)
    return F


def asymptotic_series(spec: SpecLike, lam: complex, nterms: int = 40) -> np.ndarray:
    """Coefficients c_n of the formal log-derivative f'/f = sum_n c_n z^{(m-n)/2}.

    c_{2j} = -b_j for 2j < m + 2 and c_{m+2} = r_m; the later terms carry the
    corrections used to seed the integrator at finite radius.
    """
    return _kernels.riccati_coeffs(qpoly(spec, lam), spec.m, int(nterms))


def _K_integrand(t: float, m: int) -> float:
    return math.sqrt(1.0 + t ** m) - t ** (m / 2)


def K_const(m: int, method: str = "gamma") -> float:
    """K = int_0^inf (sqrt(1 + t^m) - t^{m/2}) dt."""
    if m < 3:
        raise DivergenceError("K diverges for m = 2 (integrand ~ 1/(2t))")
    if method == "gamma":
        return -math.gamma(-0.5 - 1.0 / m) * math.gamma(1.0 + 1.0 / m) / (2.0 * math.sqrt(math.pi))
    if method == "quadrature":
        head, _ = integrate.quad(_K_integrand, 0.0, 1.0, args=(m,), epsabs=1e-14, epsrel=1e-13, limit=200)
        # t = 1/s on [1, inf): integrand becomes s^{m/2-2} / (sqrt(1+s^m) + 1)
        tail, _ = integrate.quad(
            lambda s: 1.0 / (math.sqrt(1.0 + s ** m) + 1.0),
            0.0, 1.0, weight="alg", wvar=(m / 2 - 2, 0.0),
            epsabs=1e-14, epsrel=1e-13, limit=200,
        )
        return head + tail
    raise ValueError(f"unknown method {method!r}")


def asymptotic_eigenvalue(m: int, k: int) -> float:
    """Large-k approximation of the k-th eigenvalue (k = 1, 2, ...)."""
    if m < 3:
        raise DivergenceError("the asymptotic law is stated for m >= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    base = (math.gamma(1.5 + 1.0 / m) * math.sqrt(math.pi) * (k - 0.5)
            / (math.sin(math.pi / m) * math.gamma(1.0 + 1.0 / m)))
    return base ** (2.0 * m / (m + 2))


def asymptotic_eigenvalue_via_K(m: int, k: int) -> float:
    """Same law written through K: omega^m ((1-2k) pi / (2 K sin(2 pi/m)))^{2m/(m+2)}.

    With arg(1 - 2k) = -pi the power contributes exp(-i pi 2m/(m+2)) = omega^{-m},
    cancelling the rotation factor, so only the modulus remains.
    """
    K = K_const(m, "gamma")
    base = (2 * k - 1) * math.pi / (2 * K * math.sin(2 * math.pi / m))
    return base ** (2 * m / (m + 2))


def harmonic_eigenvalues(a1: float, count: int) -> np.ndarray:
    """Closed-form spectrum for m = 2: 2k + 1 + a_1^2 / 4."""
    k = np.arange(count)
    return 2.0 * k + 1.0 + a1 * a1 / 4.0
