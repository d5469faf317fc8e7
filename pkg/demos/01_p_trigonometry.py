"""
Generalised sine and its half-period
====================================

sin_p inverts the integral of (1 - s^p)^(-1/p); its half-period pi_p has a
closed form. Here we tabulate both and watch the shape change with p.
"""

import math

import numpy as np

from stripembed import cos_p, pi_p_closed_form, pi_p_quadrature, sin_p

# pi_p two ways: Gauss-Legendre after a substitution, and 2 pi / (p sin(pi/p))
for p in (1.1, 1.5, 2.0, 3.0, 10.0, 100.0):
    q, c = pi_p_quadrature(p), pi_p_closed_form(p)
    print(f"p = {p:6.1f}   pi_p = {c:.15f}   quadrature - closed = {q - c:+.1e}")

# p = 2 is the ordinary sine
x = np.linspace(0, 2 * math.pi, 9)
print("\nmax |sin_2 - sin| =", np.max(np.abs(sin_p(2, x) - np.sin(x))))

# the peak flattens as p grows: sample a quarter period
print("\n  t/(pi_p/2)   p=1.5     p=2       p=4       p=10")
for t in np.linspace(0, 1, 6):
    row = [sin_p(p, t * pi_p_closed_form(p) / 2) for p in (1.5, 2, 4, 10)]
    print(f"  {t:9.2f}  " + "  ".join(f"{v:8.5f}" for v in row))

# the Pythagorean identity with the p-th power
p = 3.0
x = np.linspace(-5, 5, 11)
print("\n|sin_3|^3 + |cos_3|^3 :", np.round(np.abs(sin_p(p, x)) ** p + np.abs(cos_p(p, x)) ** p, 14))
