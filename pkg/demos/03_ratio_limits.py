# %% [markdown]
# Ratio limits at the poles
#
# Gamma^(i)(nz) and Gamma^(i)(qz) both blow up as z -> -k, but their ratio has a
# finite limit (-1)^((n-q)k) (q/n)^(i+1) (qk)!/(nk)!. For psi^(i) the limit is
# simply (q/n)^(i+1). Here the exact values are set against numerical ones.

# %%
from gammalim.limits import RatioLimitSpec, closed_form, numeric_ratio_limit

cases = [
    RatioLimitSpec("gamma_deriv", 2, 1, 0, 1),
    RatioLimitSpec("gamma_deriv", 3, 2, 2, 1),
    RatioLimitSpec("gamma_deriv", 4, 3, 1, 3),
    RatioLimitSpec("psi_deriv", 3, 2, 1, 2),
    RatioLimitSpec("psi_deriv", 2, 3, 2, 0),
]

# %%
print(f"{'family':<12}{'n q i k':<10}{'exact':>16}  {'numerical':<32}{'rel. error':>12}")
for spec in cases:
    rep = numeric_ratio_limit(spec)
    tag = f"{spec.n} {spec.q} {spec.i} {spec.k}"
    print(
        f"{spec.family:<12}{tag:<10}{str(closed_form(spec)):>16}  "
        f"{rep.extrapolated.to_decimal(28):<32}{rep.relative_error.to_decimal(2):>12}"
    )

# %% [markdown]
# The psi limit does not depend on k, which the numbers confirm:

# %%
for k in range(4):
    rep = numeric_ratio_limit(RatioLimitSpec("psi_deriv", 4, 1, 2, k))
    print(f"k = {k}: {rep.extrapolated.to_decimal(30)}")
