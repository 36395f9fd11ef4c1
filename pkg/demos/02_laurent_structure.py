# %% [markdown]
# How the poles grow with differentiation
#
# Each derivative of Gamma raises the pole order by one, and psi^(i) has a pole
# of order i + 1 at every non-positive integer. The leading coefficients are
# known in closed form; everything after them comes from the Taylor jet of the
# analytic factor f_m.

# %%
from math import factorial

from gammalim import poles

P = 256

# %% f_m is normalised to 1 at the pole for every m.
for m in (0, 1, 5, 20):
    print(f"f_{m}(-{m}) - 1 = {(poles.fn_jet(m, 8, P).coeffs[0] - 1).to_decimal(3)}")

# %% Gamma^(i) at -2: leading coefficient (-1)^(m+i) i!/m!.
m = 2
for i in range(5):
    s = poles.gamma_derivative_laurent(i, m, 16, P)
    print(f"Gamma^({i}) at -{m}: order {s.pole_order}, leading {s.exact_leading}, computed {s.leading.to_decimal(12)}")

# %% The two constructions (product rule vs. differentiating the Gamma series).
lb = poles.gamma_derivative_laurent(3, 1, 16, P, method="leibniz")
tw = poles.gamma_derivative_laurent(3, 1, 16, P, method="termwise")
worst = max(abs(lb.coeff(p) - tw.coeff(p)) for p in range(-4, 5))
print("largest coefficient difference between the two routes:", worst.to_decimal(3))

# %% psi^(i): the principal part is exact, the regular part is (f'/f)^(i).
for i in range(4):
    s = poles.psi_laurent(i, 3, 16, P)
    assert s.leading == (-1) ** (i + 1) * factorial(i)
    a0 = s.coeff(0).to_decimal(15)
    joined = f"- {a0[1:]}" if a0.startswith("-") else f"+ {a0}"
    print(f"psi^({i}) at -3: {s.leading}/w^{i + 1} {joined} + ...")

# %% Gamma' = Gamma * psi holds as an identity of Laurent series.
prod = poles.gamma_laurent(0, 16, P) * poles.psi_laurent(0, 0, 16, P)
d1 = poles.gamma_derivative_laurent(1, 0, 16, P)
print("a_0 of Gamma*psi:", prod.coeff(0).to_decimal(20), "  a_0 of Gamma':", d1.coeff(0).to_decimal(20))
