"""Complex-plane Gaussian integrals with Gauss-Hermite rules.

Run with ``python3 demos/04_gaussian_integrals.py``.
"""

# %%
import numpy as np

from tvhp.quadrature import (
    GaussianIntegralSpec,
    gaussian_integral_analytic,
    gaussian_integral_numeric,
    integral_tvhp_forward,
    integral_tvhp_reciprocal,
    mutual_transform,
    tvhp_reciprocal_closed_form,
)

# %% [markdown]
# Against a shifted Gaussian, H_{m,n} integrates to alpha^m alpha*^n, and
# the monomial xi^m xi*^n integrates to i^{m+n} H_{m,n}(-i alpha, -i alpha*).
# The integrands are polynomial times Gaussian, so the rule is exact.

# %%
alpha = 1.2 * np.exp(0.6j)
for m, n in [(1, 0), (2, 1), (4, 4), (6, 3)]:
    fwd = integral_tvhp_forward(m, n, alpha)
    rec = integral_tvhp_reciprocal(m, n, alpha)
    print(f"  ({m},{n}) forward err {abs(fwd - alpha**m * np.conj(alpha)**n):.1e}"
          f"  reciprocal err {abs(rec - tvhp_reciprocal_closed_form(m, n, alpha)):.1e}"
          f"  via forward {abs(mutual_transform(m, n, alpha) - rec):.1e}")

# %% [markdown]
# The exponential integrand is not polynomial; the rule converges as q grows.

# %%
spec = GaussianIntegralSpec(-1.5 + 0.5j, 1.0 + 0.5j, 0.8)
exact = gaussian_integral_analytic(spec)
for q in (8, 12, 16, 24, 32):
    print(f"  q={q:2d}: {abs(gaussian_integral_numeric(spec, q) - exact):.1e}")
