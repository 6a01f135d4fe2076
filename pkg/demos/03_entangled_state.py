"""The two-mode entangled state |xi> on a truncated Fock space.

Run with ``python3 demos/03_entangled_state.py``.
"""

# %%
import numpy as np

from tvhp.fock import build_entangled_state, completeness_gram, eigen_residual, overlap_fock

# %% [markdown]
# Amplitudes are e^{-|xi|^2/2} H_{m,n}(xi, xi*) / sqrt(m! n!). At xi = 0
# only the diagonal survives, with alternating signs.

# %%
print(np.real(build_entangled_state(0, 4).amps))

# %% [markdown]
# (a + b+) and (a+ + b) act on |xi> as multiplication by xi and xi*. The
# truncation spoils this only at the boundary, so residuals are measured on
# the block n_a + n_b <= N - 2.

# %%
for N in (10, 20, 30, 40):
    r1, r2 = eigen_residual(1 + 1j, N)
    print(f"  N={N}: {r1:.2e} {r2:.2e}")

# %% [markdown]
# The states are delta-normalized, so completeness is checked through the
# Gram matrix of <m,n|xi> integrated over the plane.

# %%
print("overlap <xi|2,1> at xi=0.5+0.5i:", overlap_fock(0.5 + 0.5j, 2, 1))
for basis_max in range(5):
    print(f"  block {basis_max}: max |G - I| = {completeness_gram(basis_max, 24):.1e}")
