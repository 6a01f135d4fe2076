"""Two-variable Hermite polynomials and the scalar identities built on them.

Coefficients are exact (:class:`~tvhp.gaussian_rational.GaussianRational`);
evaluation is double precision unless an mpmath working precision is
requested. The ``residual_*`` functions compare a truncated series with its
closed form and are evaluated at extended precision so that convergence
stays visible far below the double-precision floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

import mpmath
import numpy as np

from .errors import DomainError
from .gaussian_rational import ZERO, GaussianRational, as_gr

__all__ = [
    "BivariatePoly",
    "GenParams",
    "SqueezeParam",
    "as_point",
    "hermite_coeffs",
    "hermite_eval",
    "hermite_eval_conj",
    "hermite_eval_mp",
    "laguerre_coeffs",
    "laguerre_eval",
    "legendre_coeffs",
    "legendre_eval",
    "laguerre_relation_difference",
    "check_laguerre_relation",
    "monomial_in_hermite_basis",
    "residual_genfunc_single",
    "residual_genfunc_double",
    "residual_genfunc_fixed_m",
    "residual_laguerre_genfunc",
    "default_dps",
]


def as_point(z) -> complex:
    """Validate a ComplexPoint: any finite real or complex scalar."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex point {z!r}")
    return z


class BivariatePoly:
    """Sparse polynomial in two commuting indeterminates ``u`` and ``v``.

    ``terms`` maps an exponent pair ``(j, k)`` (the monomial ``u**j v**k``)
    to a nonzero GaussianRational. The mapping is read-only.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (j, k), c in (terms or {}).items():
            if j < 0 or k < 0:
                raise ValueError(f"negative exponent in {(j, k)}")
            c = as_gr(c)
            if c:
                clean[(int(j), int(k))] = c
        self._terms = MappingProxyType(clean)

    @property
    def terms(self) -> Mapping[tuple[int, int], GaussianRational]:
        return self._terms

    @classmethod
    def monomial(cls, j: int, k: int, coeff=1) -> BivariatePoly:
        return cls({(j, k): coeff})

    def __repr__(self):
        body = ", ".join(f"{jk}: {c}" for jk, c in sorted(self._terms.items(), reverse=True))
        return f"BivariatePoly({{{body}}})"

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other: BivariatePoly) -> BivariatePoly:
        out = dict(self._terms)
        for jk, c in other._terms.items():
            out[jk] = out.get(jk, ZERO) + c
        return BivariatePoly(out)

    def __neg__(self):
        return BivariatePoly({jk: -c for jk, c in self._terms.items()})

    def __sub__(self, other: BivariatePoly) -> BivariatePoly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BivariatePoly):
            out: dict = {}
            for (j1, k1), c1 in self._terms.items():
                for (j2, k2), c2 in other._terms.items():
                    key = (j1 + j2, k1 + k2)
                    out[key] = out.get(key, ZERO) + c1 * c2
            return BivariatePoly(out)
        c = as_gr(other)
        return BivariatePoly({jk: c * v for jk, v in self._terms.items()})

    __rmul__ = __mul__

    def swap(self) -> BivariatePoly:
        """The polynomial with the roles of ``u`` and ``v`` exchanged."""
        return BivariatePoly({(k, j): c for (j, k), c in self._terms.items()})

    def degree(self) -> int:
        return max((j + k for j, k in self._terms), default=-1)

    def __call__(self, u, v) -> complex:
        u, v = as_point(u), as_point(v)
        total = 0j
        for (j, k), c in self._terms.items():
            total += complex(c) * u**j * v**k
        return total

    def evaluate_array(self, u, v):
        """Vectorized double-precision evaluation on numpy arrays."""
        u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
        total = np.zeros(np.broadcast(u, v).shape, dtype=complex)
        for (j, k), c in self._terms.items():
            total += complex(c) * u**j * v**k
        return total

    def evaluate_mp(self, u, v):
        """Evaluate with mpmath at the current working precision."""
        u, v = mpmath.mpc(u), mpmath.mpc(v)
        total = mpmath.mpc(0)
        for (j, k), c in self._terms.items():
            cc = mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator,
                            mpmath.mpf(c.im.numerator) / c.im.denominator)
            total += cc * u**j * v**k
        return total


@lru_cache(maxsize=None)
def hermite_coeffs(m: int, n: int) -> BivariatePoly:
    """Exact coefficients of ``H_{m,n}(u, v)``.

    >>> hermite_coeffs(1, 1)
    BivariatePoly({(1, 1): 1, (0, 0): -1})
    """
    if m < 0 or n < 0:
        raise ValueError("degrees must be non-negative")
    if m == 0 or n == 0:
        return BivariatePoly.monomial(m, n)
    fm, fn = math.factorial(m), math.factorial(n)
    terms = {}
    for l in range(min(m, n) + 1):
        c = fm * fn // (math.factorial(l) * math.factorial(m - l) * math.factorial(n - l))
        terms[(m - l, n - l)] = -c if l % 2 else c
    return BivariatePoly(terms)


def hermite_eval(m: int, n: int, u, v) -> complex:
    """``H_{m,n}(u, v)`` in double precision, for independent ``u`` and ``v``."""
    return hermite_coeffs(m, n)(u, v)


def hermite_eval_conj(m: int, n: int, xi) -> complex:
    """``H_{m,n}(xi, conj(xi))``."""
    xi = as_point(xi)
    return hermite_eval(m, n, xi, xi.conjugate())


def hermite_eval_mp(m: int, n: int, u, v):
    return hermite_coeffs(m, n).evaluate_mp(u, v)


@lru_cache(maxsize=None)
def laguerre_coeffs(m: int) -> tuple[Fraction, ...]:
    """Coefficients of ``L_m(x)`` in ascending powers, from the standard sum."""
    if m < 0:
        raise ValueError("degree must be non-negative")
    return tuple(
        Fraction((-1) ** k * math.comb(m, k), math.factorial(k)) for k in range(m + 1)
    )


@lru_cache(maxsize=None)
def legendre_coeffs(m: int) -> tuple[Fraction, ...]:
    """Coefficients of ``P_m(x)`` in ascending powers."""
    if m < 0:
        raise ValueError("degree must be non-negative")
    coeffs = [Fraction(0)] * (m + 1)
    for l in range(m // 2 + 1):
        num = (-1) ** l * math.factorial(2 * m - 2 * l)
        den = 2**m * math.factorial(l) * math.factorial(m - l) * math.factorial(m - 2 * l)
        coeffs[m - 2 * l] = Fraction(num, den)
    return tuple(coeffs)


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def laguerre_eval(m: int, x) -> complex:
    x = as_point(x)
    return complex(_horner([float(c) for c in laguerre_coeffs(m)], x))


def legendre_eval(m: int, x) -> complex:
    x = as_point(x)
    return complex(_horner([float(c) for c in legendre_coeffs(m)], x))


def laguerre_relation_difference(m: int) -> BivariatePoly:
    """``H_{m,m}(u,v) - (-1)^m m! L_m(uv)`` as an exact polynomial."""
    scale = (-1) ** m * math.factorial(m)
    rhs = BivariatePoly({(k, k): scale * c for k, c in enumerate(laguerre_coeffs(m))})
    return hermite_coeffs(m, m) - rhs


def check_laguerre_relation(m: int, x, y) -> float:
    """Numeric residual ``|H_{m,m}(x,y) - (-1)^m m! L_m(xy)|``."""
    x, y = as_point(x), as_point(y)
    lhs = hermite_eval(m, m, x, y)
    rhs = (-1) ** m * math.factorial(m) * laguerre_eval(m, x * y)
    return abs(lhs - rhs)


@lru_cache(maxsize=None)
def monomial_in_hermite_basis(m: int, n: int) -> Mapping[tuple[int, int], GaussianRational]:
    """Expansion ``u^m v^n = sum c[j,k] H_{j,k}(u,v)``, solved exactly.

    Every ``H_{j,k}`` is ``u^j v^k`` plus lower terms on the same diagonal,
    so the system is triangular; it is peeled from the top without using
    any closed-form inverse.
    """
    remainder = dict(BivariatePoly.monomial(m, n).terms)
    out = {}
    while remainder:
        (j, k) = max(remainder, key=lambda jk: (jk[0] + jk[1], jk))
        c = remainder[(j, k)]
        out[(j, k)] = c
        for jk, h in hermite_coeffs(j, k).terms.items():
            val = remainder.get(jk, ZERO) - c * h
            if val:
                remainder[jk] = val
            else:
                remainder.pop(jk, None)
    return MappingProxyType(out)


# ---------------------------------------------------------------- residuals


@dataclass(frozen=True)
class GenParams:
    """Expansion parameters of the generating functions."""

    t: complex = 0j
    t_prime: complex = 0j
    s: complex = 0j

    def __post_init__(self):
        for name in ("t", "t_prime", "s"):
            object.__setattr__(self, name, as_point(getattr(self, name)))


@dataclass(frozen=True)
class SqueezeParam:
    """Real two-mode squeezing parameter ``lambda`` with ``tau = tanh(lambda)``."""

    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError("squeezing parameter must be finite")

    @classmethod
    def from_tau(cls, tau: float) -> SqueezeParam:
        if not -1 < tau < 1:
            raise DomainError(f"|tau| = {abs(tau)} must be below 1")
        return cls(math.atanh(tau))

    @property
    def tau(self) -> float:
        return math.tanh(self.lam)


def default_dps(M: int) -> int:
    """Working precision that keeps tail residuals above the rounding floor."""
    return 30 + 2 * M


def _mpc(z):
    return mpmath.mpc(z.real, z.imag)


def _residual(partial, closed, relative: bool) -> float:
    diff = abs(partial - closed)
    if relative and closed != 0:
        diff /= abs(closed)
    return float(diff)


def _scaled_hermite_table(M: int, u, v):
    """``H_{m,n}(u,v)/(m! n!)`` for all ``m, n <= M`` at mpmath precision."""
    upow = [mpmath.mpc(1)]
    vpow = [mpmath.mpc(1)]
    for _ in range(M):
        upow.append(upow[-1] * u)
        vpow.append(vpow[-1] * v)
    inv_fact = [1 / mpmath.factorial(k) for k in range(M + 1)]
    table = {}
    for m in range(M + 1):
        for n in range(M + 1):
            acc = mpmath.mpc(0)
            for l in range(min(m, n) + 1):
                term = upow[m - l] * vpow[n - l] * inv_fact[l] * inv_fact[m - l] * inv_fact[n - l]
                acc += -term if l % 2 else term
            table[m, n] = acc
    return table


def residual_genfunc_single(params: GenParams, u, v, M: int = 30, dps: int | None = None, relative: bool = False) -> float:
    """Truncation residual of the single generating function of ``H_{m,n}``.

    ``|sum_{m,n<=M} t^m t'^n H_{m,n}(u,v)/(m!n!) - exp(-t t' + t u + t' v)|``.
    """
    if M < 0:
        raise ValueError("M must be non-negative")
    u, v = as_point(u), as_point(v)
    with mpmath.workdps(dps or default_dps(M)):
        t, tp = _mpc(params.t), _mpc(params.t_prime)
        table = _scaled_hermite_table(M, _mpc(u), _mpc(v))
        partial = mpmath.mpc(0)
        for m in range(M + 1):
            for n in range(M + 1):
                partial += t**m * tp**n * table[m, n]
        closed = mpmath.exp(-t * tp + t * _mpc(u) + tp * _mpc(v))
        return _residual(partial, closed, relative)


def residual_genfunc_double(params: GenParams, x, y, x_prime, y_prime, M: int = 30,
                            dps: int | None = None, relative: bool = False) -> float:
    """Truncation residual of the product generating function.

    Compares ``sum s^m t^n H_{m,n}(x,y) H_{m,n}(x',y')/(m!n!)`` with
    ``exp{[s x x' + t y y' - ts(xy + x'y')]/(1 - ts)} / (1 - ts)``.
    """
    s, t = params.s, params.t
    if abs(t * s) >= 1:
        raise DomainError(f"|t*s| = {abs(t * s)} >= 1: closed form diverges")
    x, y, xp, yp = (as_point(z) for z in (x, y, x_prime, y_prime))
    with mpmath.workdps(dps or default_dps(M)):
        s_, t_ = _mpc(s), _mpc(t)
        x, y, xp, yp = (_mpc(z) for z in (x, y, xp, yp))
        h1 = _scaled_hermite_table(M, x, y)
        h2 = _scaled_hermite_table(M, xp, yp)
        partial = mpmath.mpc(0)
        for m in range(M + 1):
            fm = mpmath.factorial(m)
            for n in range(M + 1):
                # table holds H/(m!n!); the series wants H*H/(m!n!)
                partial += s_**m * t_**n * h1[m, n] * h2[m, n] * fm * mpmath.factorial(n)
        d = 1 - t_ * s_
        closed = mpmath.exp((s_ * x * xp + t_ * y * yp - t_ * s_ * (x * y + xp * yp)) / d) / d
        return _residual(partial, closed, relative)


def residual_genfunc_fixed_m(m: int, t: float, x, y, x_prime, y_prime, M: int = 40,
                             dps: int | None = None, relative: bool = False) -> float:
    """Residual of the single-index sum at fixed first index ``m``.

    Compares ``sum_n t^n H_{m,n}(x,y) H_{m,n}(x',y')/n!`` with
    ``(-t)^m e^{t y y'} H_{m,m}(i(sqrt(t) y' - x/sqrt(t)), i(sqrt(t) y - x'/sqrt(t)))``.
    Only real ``t > 0`` is accepted; the positive root is used.
    """
    if isinstance(t, complex) or not isinstance(t, (int, float)):
        if isinstance(t, complex) and t.imag == 0:
            t = t.real
        else:
            raise DomainError("t must be real and positive")
    if not t > 0:
        raise DomainError("t must be real and positive")
    x, y, xp, yp = (as_point(z) for z in (x, y, x_prime, y_prime))
    with mpmath.workdps(dps or default_dps(M)):
        t_ = mpmath.mpf(t)
        x, y, xp, yp = (_mpc(z) for z in (x, y, xp, yp))
        partial = mpmath.mpc(0)
        for n in range(M + 1):
            partial += t_**n / mpmath.factorial(n) * hermite_eval_mp(m, n, x, y) * hermite_eval_mp(m, n, xp, yp)
        r = mpmath.sqrt(t_)
        arg1 = 1j * (r * yp - x / r)
        arg2 = 1j * (r * y - xp / r)
        closed = (-t_) ** m * mpmath.exp(t_ * y * yp) * hermite_eval_mp(m, m, arg1, arg2)
        return _residual(partial, closed, relative)


def residual_laguerre_genfunc(s, x, M: int = 60, dps: int | None = None, relative: bool = False) -> float:
    """``|sum_{m<=M} L_m(x) s^m - exp(-xs/(1-s))/(1-s)|``."""
    s, x = as_point(s), as_point(x)
    if abs(s) >= 1:
        raise DomainError(f"|s| = {abs(s)} >= 1: Laguerre generating function diverges")
    with mpmath.workdps(dps or default_dps(M)):
        s_, x_ = _mpc(s), _mpc(x)
        partial = mpmath.mpc(0)
        for m in range(M + 1):
            lm = mpmath.mpc(0)
            for c in reversed(laguerre_coeffs(m)):
                lm = lm * x_ + mpmath.mpf(c.numerator) / c.denominator
            partial += lm * s_**m
        closed = mpmath.exp(-x_ * s_ / (1 - s_)) / (1 - s_)
        return _residual(partial, closed, relative)
