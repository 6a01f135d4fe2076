"""Gauss-Hermite evaluation of complex-plane Gaussian integrals.

All integrals here use the measure ``d^2 z / pi`` with ``d^2 z = dx dy``
for ``z = x + iy``. Wherever the integrand is a polynomial times a
Gaussian, the rule order is chosen so that the quadrature is exact; the
numeric value then serves as an oracle independent of the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from numpy.polynomial.hermite import hermgauss

from .errors import DomainError
from .hermite import (
    SqueezeParam,
    as_point,
    hermite_coeffs,
    hermite_eval_mp,
    laguerre_coeffs,
    legendre_eval,
    monomial_in_hermite_basis,
)

__all__ = [
    "HermiteRule",
    "hermite_rule",
    "hermite_rule_mp",
    "complex_plane_rule",
    "GaussianIntegralSpec",
    "gaussian_integral_analytic",
    "gaussian_integral_numeric",
    "integral_tvhp_forward",
    "integral_tvhp_reciprocal",
    "tvhp_reciprocal_closed_form",
    "mutual_transform",
    "QuadraticForm4",
    "laguerre_product_form",
    "LaguerreProductResult",
    "integral_laguerre_product",
]


@dataclass(frozen=True)
class HermiteRule:
    """Nodes and weights for ``int exp(-x^2) f(x) dx``."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return np.sum(self.weights * f(self.nodes))


@lru_cache(maxsize=None)
def hermite_rule(q: int) -> HermiteRule:
    if q < 1:
        raise ValueError("quadrature order must be positive")
    x, w = hermgauss(q)
    x.setflags(write=False)
    w.setflags(write=False)
    return HermiteRule(q, x, w)


@lru_cache(maxsize=None)
def complex_plane_rule(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor rule for ``int d^2 w / pi  exp(-|w|^2) f(w)``.

    Returns flattened complex nodes ``w`` and weights that already include
    the ``1/pi``.
    """
    rule = hermite_rule(q)
    x, y = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    wx, wy = np.meshgrid(rule.weights, rule.weights, indexing="ij")
    nodes = (x + 1j * y).ravel()
    weights = (wx * wy).ravel() / math.pi
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=None)
def hermite_rule_mp(q: int, dps: int = 40) -> tuple[tuple, tuple]:
    """Gauss-Hermite nodes and weights at ``dps`` digits.

    The double-precision nodes are polished by Newton steps on ``H_q``;
    weights follow from ``2^{q-1} q! sqrt(pi) / (q H_{q-1}(x))^2``.
    """
    rule = hermite_rule(q)
    with mpmath.workdps(dps + 10):
        nodes, weights = [], []
        for x0 in rule.nodes:
            x = mpmath.mpf(x0)
            for _ in range(100):
                h, hprev = _phys_hermite_pair(q, x)
                step = h / (2 * q * hprev)
                x -= step
                if abs(step) < mpmath.mpf(10) ** (-dps - 5):
                    break
            _, hprev = _phys_hermite_pair(q, x)
            nodes.append(x)
            weights.append(2 ** (q - 1) * mpmath.factorial(q) * mpmath.sqrt(mpmath.pi) / (q * hprev) ** 2)
    return tuple(nodes), tuple(weights)


def _phys_hermite_pair(q, x):
    """``(H_q(x), H_{q-1}(x))`` by the three-term recurrence."""
    h_prev, h = mpmath.mpf(1), 2 * x
    if q == 0:
        return h_prev, mpmath.mpf(0)
    for k in range(1, q):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h, h_prev


def _required_order(degree: int) -> int:
    # exact for polynomial degree <= 2q - 1 in each real variable
    return degree // 2 + 1


# --------------------------------------------------- basic Gaussian integral


@dataclass(frozen=True)
class GaussianIntegralSpec:
    """``int d^2z/pi exp(eta |z|^2 + f z + g z*)`` with ``Re eta < 0``."""

    eta: complex
    f: complex = 0j
    g: complex = 0j

    def __post_init__(self):
        for name in ("eta", "f", "g"):
            object.__setattr__(self, name, as_point(getattr(self, name)))
        if self.eta.real >= 0:
            raise DomainError(f"Re(eta) = {self.eta.real} must be negative for convergence")


def gaussian_integral_analytic(spec: GaussianIntegralSpec) -> complex:
    return -1 / spec.eta * np.exp(-spec.f * spec.g / spec.eta)


def gaussian_integral_numeric(spec: GaussianIntegralSpec, q: int = 24) -> complex:
    """Tensor Gauss-Hermite value after rescaling by ``sqrt(-Re eta)``."""
    if q < 8:
        raise ValueError("use at least 8 nodes per axis")
    c = -spec.eta.real
    w, weights = complex_plane_rule(q)
    rest = np.exp(1j * spec.eta.imag * np.abs(w) ** 2 / c
                  + (spec.f * w + spec.g * np.conj(w)) / math.sqrt(c))
    return complex(np.sum(weights * rest) / c)


# ------------------------------------------------- TVHP integration formulas


def _check_degrees(m, n):
    if m < 0 or n < 0:
        raise ValueError("degrees must be non-negative")


def _shifted_integral(poly, alpha, degree, q, dps):
    """``int d^2w/pi exp(-|w|^2) poly(alpha + w, conj(alpha + w))``.

    ``poly`` takes the two arguments as numpy arrays (``dps=None``) or as
    mpmath scalars.
    """
    alpha = as_point(alpha)
    q = q or max(8, _required_order(degree))
    if q < _required_order(degree):
        raise ValueError(f"order {q} is not exact for degree {degree}; need {_required_order(degree)}")
    if dps is None:
        w, weights = complex_plane_rule(q)
        xi = alpha + w
        return complex(np.sum(weights * poly(xi, np.conj(xi))))
    nodes, wts = hermite_rule_mp(q, dps)
    with mpmath.workdps(dps):
        a = mpmath.mpc(alpha.real, alpha.imag)
        total = mpmath.mpc(0)
        for x, wx in zip(nodes, wts):
            for y, wy in zip(nodes, wts):
                xi = a + mpmath.mpc(x, y)
                total += wx * wy * poly(xi, mpmath.conj(xi))
        return complex(total / mpmath.pi)


def integral_tvhp_forward(m: int, n: int, alpha, q: int | None = None, dps: int | None = 30) -> complex:
    """``int d^2xi/pi H_{m,n}(xi, xi*) exp(-|xi - alpha|^2)``; equals ``alpha^m alpha*^n``.

    The rule is exact for this integrand; ``dps`` sets the working
    precision of the node sum (``None`` for plain double precision).
    """
    _check_degrees(m, n)
    h = hermite_coeffs(m, n)
    poly = h.evaluate_array if dps is None else h.evaluate_mp
    return _shifted_integral(poly, alpha, m + n, q, dps)


def integral_tvhp_reciprocal(m: int, n: int, alpha, q: int | None = None, dps: int | None = 30) -> complex:
    """``int d^2xi/pi xi^m xi*^n exp(-|xi - alpha|^2)``."""
    _check_degrees(m, n)
    return _shifted_integral(lambda u, v: u**m * v**n, alpha, m + n, q, dps)


def tvhp_reciprocal_closed_form(m: int, n: int, alpha) -> complex:
    """``i^{m+n} H_{m,n}(-i alpha, -i alpha*)``."""
    alpha = as_point(alpha)
    with mpmath.workdps(30):
        a = mpmath.mpc(alpha.real, alpha.imag)
        value = hermite_eval_mp(m, n, -1j * a, -1j * mpmath.conj(a))
        return complex(mpmath.mpc(0, 1) ** (m + n) * value)


def mutual_transform(m: int, n: int, alpha, q: int | None = None, dps: int | None = 30) -> complex:
    """Reciprocal integral rebuilt from forward integrals.

    Expands ``xi^m xi*^n`` in the TVHP basis with exact coefficients and
    integrates term by term with :func:`integral_tvhp_forward`.
    """
    total = 0j
    for (j, k), c in monomial_in_hermite_basis(m, n).items():
        total += complex(c) * integral_tvhp_forward(j, k, alpha, q, dps)
    return total


# ------------------------------------------- 4D Laguerre-product integral


_INV_SQRT2 = 1 / math.sqrt(2)

# rows: (u+, u-, w+, w-) in terms of (alpha1, alpha2, beta1, beta2)
_ROTATION = np.array([
    [1, 0, 1, 0],
    [1, 0, -1, 0],
    [0, 1, 0, -1],
    [0, 1, 0, 1],
]) * _INV_SQRT2


@dataclass(frozen=True)
class QuadraticForm4:
    """Exponent ``x^T A x`` over ``x = (alpha1, alpha2, beta1, beta2)``."""

    matrix: np.ndarray
    eigenvalues: tuple[float, float, float, float]
    rotation: np.ndarray

    def is_negative_definite(self) -> bool:
        return all(e < 0 for e in self.eigenvalues)


def laguerre_product_form(tau: float) -> QuadraticForm4:
    """``-|alpha|^2 - |beta|^2 + (alpha beta + alpha* beta*) tau`` as a 4x4 form.

    ``alpha beta + c.c. = 2(alpha1 beta1 - alpha2 beta2)``; the rotation to
    ``(u+, u-, w+, w-)`` is fixed analytically, with eigenvalues
    ``-(1-tau), -(1+tau), -(1-tau), -(1+tau)`` in that order.
    """
    a = -np.eye(4)
    a[0, 2] = a[2, 0] = tau
    a[1, 3] = a[3, 1] = -tau
    eig = (-(1 - tau), -(1 + tau), -(1 - tau), -(1 + tau))
    return QuadraticForm4(a, eig, _ROTATION.copy())


@dataclass(frozen=True)
class LaguerreProductResult:
    numeric: float
    published_value: float
    corrected_value: float


def integral_laguerre_product(m: int, sq: SqueezeParam, q: int | None = None) -> LaguerreProductResult:
    """4D integral of ``L_m(-alpha beta tau) L_m(-alpha* beta* tau)`` against the squeezed Gaussian.

    The closed form published for this integral is
    ``cosh^{2m}(lambda) P_m(cosh 2 lambda)``; direct evaluation gives that
    times ``cosh^2(lambda)``, reported as ``corrected_value``.
    """
    if m < 0:
        raise ValueError("degree must be non-negative")
    tau = sq.tau
    if abs(tau) >= 1:
        raise DomainError("|tau| must be below 1")
    q = q or 2 * m + 4
    if q < _required_order(4 * m):
        raise ValueError(f"order {q} is not exact for degree {4 * m}")
    form = laguerre_product_form(tau)
    rule = hermite_rule(q)
    scale = 1 / np.sqrt(-np.array(form.eigenvalues))
    y = np.meshgrid(*(rule.nodes,) * 4, indexing="ij")
    wgt = np.ones_like(y[0])
    for g in np.meshgrid(*(rule.weights,) * 4, indexing="ij"):
        wgt = wgt * g
    rotated = [scale[i] * y[i] for i in range(4)]
    # invert the orthogonal rotation: x = R^T (u+, u-, w+, w-)
    x = [sum(form.rotation[j, i] * rotated[j] for j in range(4)) for i in range(4)]
    alpha = x[0] + 1j * x[1]
    beta = x[2] + 1j * x[3]
    coeffs = [float(c) for c in laguerre_coeffs(m)]

    def lag(z):
        acc = np.zeros_like(z)
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc

    integrand = lag(-alpha * beta * tau) * lag(-np.conj(alpha) * np.conj(beta) * tau)
    jacobian = float(np.prod(scale))
    numeric = float(np.real(np.sum(wgt * integrand))) * jacobian / math.pi**2
    ch = math.cosh(sq.lam)
    published = ch ** (2 * m) * legendre_eval(m, math.cosh(2 * sq.lam)).real
    return LaguerreProductResult(numeric, published, ch**2 * published)
