"""Exact normal and antinormal ordering of two-mode boson operators.

Run with ``python3 demos/02_operator_ordering.py``.
"""

# %%
from tvhp.boson import (
    antinormal_order,
    check_factorization_normal,
    check_identity_laguerre_operator,
    check_identity_normal,
    normal_order,
    reorder_naive,
)

# %% [markdown]
# Words are plain text: ``a``, ``a+``, ``b``, ``b+`` with optional ``^k``
# and a rational complex prefix.

# %%
for word in ("a a+", "a^2 a+^2", "(1/2 i) a b a+ b+"):
    print(f"{word:22} ->  {normal_order(word)}")
print("antinormal a+^2 a^2   -> ", antinormal_order("a+^2 a^2"))

# %% [markdown]
# The closed contraction sums agree with brute-force adjacent swapping.

# %%
w = "a b a+ a b+ a+ b"
print(normal_order(w) == reorder_naive(w))

# %% [markdown]
# H_{m,n} evaluated at the commuting pair (a + b+, a+ + b) equals the
# normal-ordered product of their powers. The check is exact: no tolerances.

# %%
print(all(check_identity_normal(m, n).passed for m in range(5) for n in range(5)))

# %% [markdown]
# Disentangling e^{s ab} e^{t a+b+} order by order in (s, t). The closed
# form puts s on ab and t on a+b+; the assignment with s and t exchanged
# fails already at first order.

# %%
v = check_factorization_normal(8)
print(v.passed, "|", v.notes)

# %% [markdown]
# a^m b^m e^{tau a+b+} as a Laguerre polynomial: the 1/tau terms inside the
# Laguerre argument cancel against the tau^m prefactor.

# %%
for m in range(4):
    v = check_identity_laguerre_operator(m, 8)
    print(m, v.passed, v.details)
