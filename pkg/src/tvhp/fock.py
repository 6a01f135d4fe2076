"""Truncated two-mode Fock space.

States are amplitude arrays ``amps[n_a, n_b]`` with ``0 <= n_a, n_b <= N``.
Operators are sparse matrices on the flattened basis, index
``n_a * (N + 1) + n_b``. Truncation only corrupts amplitudes near the
boundary; an operator word of length ``w`` is trusted on the guarded block
``n_a + n_b <= N - w``, and every residual below is measured there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
import scipy.sparse as sp

from .boson import NORMAL, OperatorPoly
from .errors import CutoffViolation, DomainError, TailTooLarge
from .hermite import (
    SqueezeParam,
    _scaled_hermite_table,
    as_point,
    hermite_coeffs,
    hermite_eval_mp,
    laguerre_coeffs,
    legendre_eval,
)
from .quadrature import complex_plane_rule

__all__ = [
    "SqueezeParam",
    "TwoModeState",
    "TwoModeOperator",
    "ladder_ops",
    "fock_state",
    "guard_mask",
    "operator_matrix",
    "apply_operator_poly",
    "build_entangled_state",
    "eigen_residual",
    "overlap_fock",
    "squeezed_vacuum_series",
    "psv_state_residual",
    "NormReport",
    "psv_norm_squared",
    "psv_norm_closed_sum",
    "completeness_gram",
]


def _check_cutoff(N: int) -> int:
    if int(N) != N or N < 1:
        raise ValueError(f"cutoff must be an integer >= 1, got {N!r}")
    return int(N)


@dataclass(frozen=True)
class TwoModeState:
    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("amplitudes must be a square (N+1, N+1) array")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def cutoff(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def vector(self) -> np.ndarray:
        return self.amps.ravel()

    def norm(self, mask: np.ndarray | None = None) -> float:
        a = self.amps if mask is None else self.amps[mask]
        return float(np.linalg.norm(a))

    def inner(self, other: TwoModeState) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amps, other.amps))

    def __add__(self, other: TwoModeState) -> TwoModeState:
        return TwoModeState(self.amps + other.amps)

    def __sub__(self, other: TwoModeState) -> TwoModeState:
        return TwoModeState(self.amps - other.amps)

    def __mul__(self, c) -> TwoModeState:
        return TwoModeState(self.amps * complex(c))

    __rmul__ = __mul__


@dataclass(frozen=True)
class TwoModeOperator:
    matrix: sp.csr_matrix
    cutoff: int

    def __post_init__(self):
        dim = (self.cutoff + 1) ** 2
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match cutoff {self.cutoff}")

    def __matmul__(self, other):
        if isinstance(other, TwoModeState):
            if other.cutoff != self.cutoff:
                raise ValueError("cutoff mismatch")
            out = self.matrix @ other.vector
            return TwoModeState(out.reshape(other.amps.shape))
        return TwoModeOperator((self.matrix @ other.matrix).tocsr(), self.cutoff)

    def __add__(self, other: TwoModeOperator) -> TwoModeOperator:
        return TwoModeOperator((self.matrix + other.matrix).tocsr(), self.cutoff)

    def __sub__(self, other: TwoModeOperator) -> TwoModeOperator:
        return TwoModeOperator((self.matrix - other.matrix).tocsr(), self.cutoff)

    def __mul__(self, c) -> TwoModeOperator:
        return TwoModeOperator((self.matrix * complex(c)).tocsr(), self.cutoff)

    __rmul__ = __mul__

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


@lru_cache(maxsize=None)
def _single_mode(N: int):
    low = sp.diags(np.sqrt(np.arange(1, N + 1)), 1, shape=(N + 1, N + 1), format="csr", dtype=complex)
    return low, low.T.tocsr()


@lru_cache(maxsize=None)
def ladder_ops(N: int) -> dict[str, TwoModeOperator]:
    """``a``, ``a+``, ``b``, ``b+`` on the cutoff-``N`` two-mode space."""
    N = _check_cutoff(N)
    low, high = _single_mode(N)
    eye = sp.identity(N + 1, dtype=complex, format="csr")
    return {
        "a": TwoModeOperator(sp.kron(low, eye, format="csr"), N),
        "a+": TwoModeOperator(sp.kron(high, eye, format="csr"), N),
        "b": TwoModeOperator(sp.kron(eye, low, format="csr"), N),
        "b+": TwoModeOperator(sp.kron(eye, high, format="csr"), N),
    }


def fock_state(m: int, n: int, N: int) -> TwoModeState:
    """``|m, n>``."""
    N = _check_cutoff(N)
    if not (0 <= m <= N and 0 <= n <= N):
        raise CutoffViolation(f"|{m},{n}> does not fit below cutoff {N}")
    amps = np.zeros((N + 1, N + 1), dtype=complex)
    amps[m, n] = 1
    return TwoModeState(amps)


def guard_mask(N: int, word_length: int) -> np.ndarray:
    """Boolean mask of the block ``n_a + n_b <= N - word_length``."""
    idx = np.arange(N + 1)
    return (idx[:, None] + idx[None, :]) <= N - word_length


def _mode_matrix(N, creation, annihilation, ordering):
    low, high = _single_mode(N)
    up = high ** creation if creation else sp.identity(N + 1, dtype=complex, format="csr")
    down = low ** annihilation if annihilation else sp.identity(N + 1, dtype=complex, format="csr")
    return up @ down if ordering == NORMAL else down @ up


def operator_matrix(op: OperatorPoly, N: int) -> TwoModeOperator:
    """Sparse matrix of an ordered polynomial on the cutoff-``N`` space."""
    N = _check_cutoff(N)
    dim = (N + 1) ** 2
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for (p, q, r, s), c in op.terms.items():
        ma = _mode_matrix(N, p, r, op.ordering)
        mb = _mode_matrix(N, q, s, op.ordering)
        total = total + complex(c) * sp.kron(ma, mb, format="csr")
    return TwoModeOperator(total.tocsr(), N)


def apply_operator_poly(op: OperatorPoly, state: TwoModeState) -> TwoModeState:
    """Matrix action of ``op``; exact on ``guard_mask(N, op.word_length())``."""
    if op.word_length() > state.cutoff:
        raise CutoffViolation(
            f"word length {op.word_length()} leaves no guarded block below cutoff {state.cutoff}")
    return operator_matrix(op, state.cutoff) @ state


# ---------------------------------------------------------- entangled state


def build_entangled_state(xi, cutoff: int, tail_tol: float | None = None) -> TwoModeState:
    """Truncated ``|xi>`` with ``amps(m,n) = e^{-|xi|^2/2} H_{m,n}(xi, xi*)/sqrt(m! n!)``.

    Amplitudes come from exact coefficients summed at extended precision;
    the float sum loses several digits to cancellation at ``|xi| ~ 1.5``.
    ``|xi>`` is not normalizable, so the boundary check is opt-in: with
    ``tail_tol`` set, :class:`TailTooLarge` is raised if any amplitude on
    the ``n_a = N`` or ``n_b = N`` edge exceeds it.
    """
    xi = as_point(xi)
    N = _check_cutoff(cutoff)
    with mpmath.workdps(40):
        x = mpmath.mpc(xi.real, xi.imag)
        table = _scaled_hermite_table(N, x, mpmath.conj(x))
        sqrt_fact = [mpmath.sqrt(mpmath.factorial(k)) for k in range(N + 1)]
        pref = mpmath.exp(-abs(x) ** 2 / 2)
        amps = np.array([[complex(pref * table[m, n] * sqrt_fact[m] * sqrt_fact[n])
                          for n in range(N + 1)] for m in range(N + 1)])
    if tail_tol is not None:
        edge = max(np.abs(amps[N, :]).max(), np.abs(amps[:, N]).max())
        if edge > tail_tol:
            raise TailTooLarge(f"boundary amplitude {edge:.3g} exceeds {tail_tol:.3g} at cutoff {N}")
    return TwoModeState(amps)


def eigen_residual(xi, cutoff: int, tail_tol: float | None = None, relative: bool = True) -> tuple[float, float]:
    """Residuals of ``(a+b†)|xi> = xi|xi>`` and ``(a†+b)|xi> = xi*|xi>``.

    Measured on the block ``n_a + n_b <= N - 2``; divided by the norm of
    ``|xi>`` on that block when ``relative``.
    """
    xi = as_point(xi)
    state = build_entangled_state(xi, cutoff, tail_tol)
    ops = ladder_ops(state.cutoff)
    mask = guard_mask(state.cutoff, 2)
    r1 = (ops["a"] + ops["b+"]) @ state - xi * state
    r2 = (ops["a+"] + ops["b"]) @ state - xi.conjugate() * state
    scale = state.norm(mask) if relative else 1.0
    return r1.norm(mask) / scale, r2.norm(mask) / scale


def overlap_fock(xi, m: int, n: int) -> complex:
    """``<xi|m,n> = e^{-|xi|^2/2} conj(H_{m,n}(xi, xi*)) / sqrt(m! n!)``."""
    xi = as_point(xi)
    if m < 0 or n < 0:
        raise ValueError("degrees must be non-negative")
    with mpmath.workdps(40):
        x = mpmath.mpc(xi.real, xi.imag)
        h = hermite_eval_mp(m, n, x, mpmath.conj(x))
        val = mpmath.exp(-abs(x) ** 2 / 2) * mpmath.conj(h) / mpmath.sqrt(mpmath.factorial(m) * mpmath.factorial(n))
        return complex(val)


# ------------------------------------------------ photon-subtracted states


def squeezed_vacuum_series(tau: float, cutoff: int) -> TwoModeState:
    """``e^{tau a†b†}|00> = sum_n tau^n |n,n>``, without the sech normalization."""
    N = _check_cutoff(cutoff)
    amps = np.zeros((N + 1, N + 1), dtype=complex)
    idx = np.arange(N + 1)
    amps[idx, idx] = tau**idx
    return TwoModeState(amps)


def _tau_of(sq: SqueezeParam) -> float:
    tau = sq.tau
    if abs(tau) >= 1:
        raise DomainError("|tau| must be below 1")
    return tau


def psv_state_residual(m: int, sq: SqueezeParam, cutoff: int = 40, tail_tol: float | None = 1e-10) -> float:
    """Relative residual of ``a^m b^m e^{tau a†b†}|00> = m! tau^m L_m(-tau a†b†) e^{tau a†b†}|00>``.

    Both sides act with truncated matrices on the truncated series and are
    compared on the block ``n_a + n_b <= N - 2m``. ``tail_tol`` bounds
    ``|tau|^N``.
    """
    tau = _tau_of(sq)
    N = _check_cutoff(cutoff)
    if tail_tol is not None and abs(tau) ** N > tail_tol:
        raise TailTooLarge(f"|tau|^N = {abs(tau) ** N:.3g} exceeds {tail_tol:.3g}")
    if 2 * m > N:
        raise CutoffViolation(f"m = {m} leaves no guarded block below cutoff {N}")
    vac = squeezed_vacuum_series(tau, N)
    ops = ladder_ops(N)
    pair_down = ops["a"] @ ops["b"]
    pair_up = ops["a+"] @ ops["b+"]
    lhs = vac
    for _ in range(m):
        lhs = pair_down @ lhs
    rhs_acc = TwoModeState(np.zeros_like(vac.amps))
    term = vac
    for j, c in enumerate(laguerre_coeffs(m)):
        if j:
            term = pair_up @ term
        # L_m(-tau x) = sum_j c_j (-tau)^j x^j
        rhs_acc = rhs_acc + float(c) * (-tau) ** j * term
    rhs = math.factorial(m) * tau**m * rhs_acc
    mask = guard_mask(N, 2 * m)
    scale = lhs.norm(mask)
    diff = (lhs - rhs).norm(mask)
    return diff / scale if scale else diff


@dataclass(frozen=True)
class NormReport:
    """Norm of the photon-subtracted state, with the published closed form.

    ``numeric`` is the direct truncated evaluation. ``published_value`` is
    ``(m!)^2 sinh^{2m}(lambda) P_m(cosh 2 lambda)``, which omits the
    ``sech(lambda)`` of the normalized squeezed vacuum, so ``ratio`` is
    expected to equal ``cosh^2(lambda)``.
    """

    numeric: float
    published_value: float
    ratio: float
    expected_ratio: float


def psv_norm_squared(m: int, sq: SqueezeParam, cutoff: int = 40, tail_tol: float | None = 1e-12) -> NormReport:
    """``<00| e^{tau ab} a†^m b†^m a^m b^m e^{tau a†b†} |00>`` on the truncated space.

    ``tail_tol`` bounds the first omitted term, ``tau^{2N} N^{2m}``.
    """
    tau = _tau_of(sq)
    N = _check_cutoff(cutoff)
    if tail_tol is not None and tau ** (2 * N) * float(N) ** (2 * m) > tail_tol:
        raise TailTooLarge(f"tau^(2N) N^(2m) = {tau ** (2 * N) * float(N) ** (2 * m):.3g} exceeds {tail_tol:.3g}")
    ops = ladder_ops(N)
    state = squeezed_vacuum_series(tau, N)
    pair_down = ops["a"] @ ops["b"]
    for _ in range(m):
        state = pair_down @ state
    numeric = state.norm() ** 2
    lam = sq.lam
    published = math.factorial(m) ** 2 * math.sinh(lam) ** (2 * m) * legendre_eval(m, math.cosh(2 * lam)).real
    return NormReport(numeric, published, numeric / published, math.cosh(lam) ** 2)


def psv_norm_closed_sum(m: int, tau: float, dps: int = 30) -> float:
    """``sum_{n>=m} [n!/(n-m)!]^2 tau^{2n}`` summed to convergence, no truncation."""
    if abs(tau) >= 1:
        raise DomainError("|tau| must be below 1")
    with mpmath.workdps(dps):
        x = mpmath.mpf(tau) ** 2
        return float(mpmath.nsum(lambda n: (mpmath.rf(n - m + 1, m)) ** 2 * x**n, [m, mpmath.inf]))


# ---------------------------------------------------------- completeness


def completeness_gram(basis_max: int, quad_order: int = 24) -> float:
    """``max |G - I|`` for ``G[(m,n),(m',n')] = int d^2xi/pi <m,n|xi><xi|m',n'>``.

    The integrand is ``e^{-|xi|^2}`` times a polynomial of degree at most
    ``4 * basis_max`` per real axis, so the Gauss-Hermite rule is exact once
    ``quad_order >= 2 * basis_max + 1``.
    """
    if basis_max < 0:
        raise ValueError("basis_max must be non-negative")
    if quad_order < 2 * basis_max + 1:
        raise ValueError(f"quad_order {quad_order} is not exact; need >= {2 * basis_max + 1}")
    nodes, weights = complex_plane_rule(quad_order)
    labels = [(m, n) for m in range(basis_max + 1) for n in range(basis_max + 1)]
    # <m,n|xi> without the e^{-|xi|^2/2}, which the rule weight supplies
    values = np.array([
        hermite_coeffs(m, n).evaluate_array(nodes, np.conj(nodes)) / math.sqrt(math.factorial(m) * math.factorial(n))
        for m, n in labels
    ])
    gram = (values * weights) @ values.conj().T
    return float(np.max(np.abs(gram - np.eye(len(labels)))))
