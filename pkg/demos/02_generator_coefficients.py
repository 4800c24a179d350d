"""The analytic side: generator coefficients and the critical strength.

Tabulates gamma(alpha, p) with its harmonicity classification, shows the two
independent integral representations agreeing, traces the strictly
increasing curve phi(p) whose value at p = 1 is the critical driving
strength theta0(alpha), and prints theta0 across (1,2).
"""

from levyloewner import (
    classify_power,
    frac_constant,
    gamma_coeff,
    gamma_coeff_alt,
    phi,
    theta0,
)

alpha = 1.5
print(f"alpha = {alpha}:  A = {frac_constant(alpha):.12f}\n")
print(" p      gamma(alpha,p)   alt-representation   class")
for p in (0.3, 0.8, 1.0, 1.2, 1.5, 1.8, 2.2):
    g = gamma_coeff(alpha, p)
    g2 = gamma_coeff_alt(alpha, p)
    print(f"{p:4.2f}  {g: .12f}  {g2: .12f}   {classify_power(alpha, p).value}")

print("\nphi(p) is strictly increasing on (0, alpha) with phi(1) = theta0:")
for p in (0.2, 0.6, 1.0, 1.2, 1.4, 1.45):
    print(f"  phi({p:4.2f}) = {phi(alpha, p):10.4f}")

print("\ncritical strength theta0(alpha) = 2 / (A |gamma(alpha,1)|):")
for a in (1.1, 1.3, 1.5, 1.7, 1.9):
    print(f"  theta0({a}) = {theta0(a):.6f}")
