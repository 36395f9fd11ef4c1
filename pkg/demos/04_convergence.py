# %% [markdown]
# Watching the extrapolation converge
#
# The raw ratio at offset h differs from its limit by a power series in h.
# Sampling h = h0 r^j and applying Richardson's scheme removes those terms one
# at a time. The observed order of the raw error tells which term leads.

# %%
from fractions import Fraction

from gammalim.limits import RatioLimitSpec, closed_form, numeric_ratio_limit

spec = RatioLimitSpec("gamma_deriv", 3, 1, 2, 1)
exact = closed_form(spec).to_ext(256)
rep = numeric_ratio_limit(spec, h0=Fraction(1, 64), steps=16, side="above")

# %% Raw samples approach the limit like h^(i+1): each halving of h gains about 3 bits.
for s in rep.samples[::3]:
    print(f"h = {s.h.to_decimal(6):>14}   raw error {abs(s.value / exact - 1).to_decimal(3):>12}   via {s.path}")

# %%
print("observed order:", rep.observed_order.to_decimal(4))
print("extrapolated relative error:", rep.relative_error.to_decimal(3))

# %% [markdown]
# From the other side the samples alternate in a different way, but the
# limit is the same:

# %%
both = numeric_ratio_limit(spec)
for side, v in sorted(both.side_values.items()):
    print(f"{side:>5}: {v.to_decimal(30)}")
print("two-sided gap:", both.two_sided_gap.to_decimal(3))
