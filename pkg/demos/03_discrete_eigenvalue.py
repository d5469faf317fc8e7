"""
The p-Laplacian eigenvalue on a grid
====================================

A forward-difference quotient is minimised by preconditioned descent. For
p = 2 the answer is known exactly, which shows the discretisation error is
O(h^2) and has nothing to do with the optimiser.
"""

import math

import numpy as np

from stripembed import Rectangle, StripDomain, first_eigenpair, lambda_closed_form, pi_p_closed_form, sin_p
from stripembed.eigensolve import eigenfunction_error

unit = Rectangle(((0.0, 1.0),))
print("p = 2 on (0,1): lambda = pi^2 =", math.pi ** 2)
for n in (31, 63, 127, 255):
    r = first_eigenpair(2, unit, [n])
    h = 1 / (n + 1)
    exact_discrete = 4 / h ** 2 * math.sin(math.pi * h / 2) ** 2
    print(f"  n = {n:3d}: lambda_h = {r.lambda_h:.10f}  discrete exact = {exact_discrete:.10f}"
          f"  error x (n+1)^2 = {(math.pi ** 2 - r.lambda_h) * (n + 1) ** 2:.4f}")

# other exponents against the closed form
for p in (1.5, 3.0, 6.0):
    lam = lambda_closed_form(p, StripDomain(0, unit.intervals))
    r = first_eigenpair(p, unit, [255])
    print(f"p = {p}: lambda_h = {r.lambda_h:.6f}, lambda = {lam:.6f}, "
          f"rel err {abs(r.lambda_h - lam) / lam:.1e}, {r.iterations} iterations")

# the minimiser is a rescaled sin_p
p = 3.0
r = first_eigenpair(p, Rectangle(((0.0, 2.0),)), [127])
print(f"\np = 3 on (0,2): eigenfunction vs sin_p profile, max deviation {eigenfunction_error(r, p):.1e}")
x = np.linspace(0, 2, 9)[1:-1]
grid = np.linspace(0, 2, 129)[1:-1]
vals = np.interp(x, grid, r.eigenfunction.values)
prof = sin_p(p, pi_p_closed_form(p) * x / 2)
print("  x      u_h / max   sin_p profile")
for xi, a, b in zip(x, vals / vals.max(), prof):
    print(f"  {xi:4.2f}   {a:.5f}     {b:.5f}")
