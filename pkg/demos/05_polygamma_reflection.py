# %% [markdown]
# Polygamma on the negative axis
#
# For x < 0 the kernel evaluates psi^(i) by reflection, which needs the i-th
# derivative of cot. Those derivatives are integer polynomials in cot itself,
# generated by P_{i+1}(c) = -(1 + c^2) P_i'(c).

# %%
from gammalim import kernel
from gammalim.numerics import ExtReal, const_pi

P = 256

# %%
for i in range(5):
    print(f"P_{i}(c) coefficients:", kernel.cot_derivative_polynomial(i))

# %% Reflection identity, checked at a few points.
pi = const_pi(P)
for x in ("-0.3", "-2.75", "-7.1"):
    xv = ExtReal(x, P)
    for i in (0, 2):
        lhs = kernel.polygamma(i, 1 - xv, P) * (-1) ** i - kernel.polygamma(i, xv, P)
        rhs = kernel.cot_derivative(i, pi * xv, P) * pi ** (i + 1)
        print(f"x = {x:>5}, i = {i}: residual {abs(lhs - rhs).to_decimal(3)}")

# %% Near a pole psi^(i) is dominated by (-1)^(i+1) i! / w^(i+1).
for i in range(3):
    x = ExtReal(-2, P) + ExtReal("1e-5", P)
    print(f"psi^({i})(-2 + 1e-5) = {kernel.polygamma(i, x, P).to_decimal(20)}")
