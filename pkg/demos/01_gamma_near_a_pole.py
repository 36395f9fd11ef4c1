# %% [markdown]
# Gamma just beside a pole
#
# Gamma(z) blows up at 0, -1, -2, ... but the blow-up is a clean simple pole.
# Close to z = -m we write z = -m + w and expand in w. This script compares
# that expansion with the reflection formula as w shrinks.

# %%
from fractions import Fraction

from gammalim import kernel, poles
from gammalim.numerics import ExtReal

P = 256

# %% The series around z = -1: a simple pole with residue -1.
s = poles.gamma_laurent(1, degree=8, prec=P)
print("pole order:", s.pole_order, " residue:", s.exact_leading)
for power in range(-1, 4):
    print(f"  a_{power:<2} = {s.coeff(power).to_decimal(30)}")

# %% Walk towards -1 from the right and compare both evaluation routes.
for e in (4, 10, 30, 60):
    z = ExtReal(-1, P) + ExtReal(1, P).ldexp(-e)
    near = poles.eval_near_pole("gamma", z, P)
    far = kernel.gamma(z, P)
    rel = abs(near / far - 1)
    print(f"z = -1 + 2^-{e:<2}  Gamma = {near.to_decimal(25):>40}   rel. diff {rel.to_decimal(3)}")

# %% Subtracting the pole leaves the regular part, which tends to a_0 = gamma - 1.
z = ExtReal(-1, P) + ExtReal(1, P).ldexp(-40)
w = z + 1
print("Gamma(z) + 1/w =", (poles.eval_near_pole("gamma", z, P) + 1 / w).to_decimal(20))
print("gamma - 1      =", (kernel.polygamma(0, 1, P) * -1 - 1).to_decimal(20))

# %% Exactly on the pole there is nothing to evaluate.
try:
    kernel.gamma(Fraction(-1), P)
except Exception as exc:
    print(type(exc).__name__ + ":", exc)
