"""Photon-subtracted squeezed vacuum and its normalization.

Run with ``python3 demos/05_squeezed_normalization.py``.
"""

# %%
import math

from tvhp.fock import psv_norm_closed_sum, psv_norm_squared, psv_state_residual
from tvhp.hermite import SqueezeParam
from tvhp.quadrature import integral_laguerre_product

# %% [markdown]
# a^m b^m applied to e^{tau a+b+}|00> is a Laguerre excitation of the same
# series. Both sides are built in the truncated space.

# %%
for m in range(4):
    print(f"  m={m}: residual {psv_state_residual(m, SqueezeParam.from_tau(0.5)):.1e}")

# %% [markdown]
# The squared norm computed directly, summed in closed form, and from the
# published closed form. The published value leaves out the sech(lambda)
# normalization of the squeezed vacuum, so the direct value is larger by
# cosh^2(lambda).

# %%
print("  m  tau   direct        closed sum    published     ratio   cosh^2")
for m in range(4):
    for tau in (0.3, 0.5):
        sq = SqueezeParam.from_tau(tau)
        rep = psv_norm_squared(m, sq)
        print(f"  {m}  {tau}  {rep.numeric:.10f}  {psv_norm_closed_sum(m, tau):.10f}  "
              f"{rep.published_value:.10f}  {rep.ratio:.6f}  {math.cosh(sq.lam) ** 2:.6f}")

# %% [markdown]
# The same quantity as a 4D Gaussian integral of two Laguerre polynomials,
# diagonalized by a fixed rotation. It shows the same cosh^2 factor.

# %%
for m in range(4):
    res = integral_laguerre_product(m, SqueezeParam.from_tau(0.3))
    print(f"  m={m}: numeric {res.numeric:.12f}  corrected {res.corrected_value:.12f}  "
          f"published {res.published_value:.12f}")
