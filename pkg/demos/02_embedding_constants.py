"""
Embedding constants on strips
=============================

On R^k x prod (a_i, b_i) the infimum of the Rayleigh quotient is a sum over
the bounded sides only, and the norm of W_0^{1,p} -> L^p follows from it.
"""

import math

from stripembed import StripDomain, embedding_norm, rayleigh, strip_trial
from stripembed.extremal import strip_gap

d = StripDomain(1, ((0.0, math.pi),))
c = embedding_norm(2, d)
print(f"p=2, R x (0, pi): lambda = {c.lambda_}, norm = {c.norm!r}, 1/sqrt(2) = {1 / math.sqrt(2)!r}")

# the constant ignores how many free axes there are
for k in (0, 1, 2, 3):
    print(f"  k = {k}: norm = {embedding_norm(2, StripDomain(k, ((0.0, math.pi),))).norm:.15f}")

# wider strips make the embedding worse conditioned: the norm grows
print("\nnorm as the second side widens, p = 3")
for w in (0.5, 1.0, 2.0, 4.0, 8.0):
    print(f"  (0,1) x (0,{w:<3}) : {embedding_norm(3, StripDomain(1, ((0, 1), (0, w)))).norm:.6f}")

# nothing attains lambda on a strip, but truncated trial functions approach it
p = 2.0
lam = embedding_norm(p, d).lambda_
print("\n      l        quotient - lambda     predicted")
for l in (math.pi, 2 * math.pi, 4 * math.pi, 8 * math.pi):
    u = strip_trial(p, d, l)
    gap = rayleigh(u, d.truncated(l), p).quotient - lam
    print(f"  {l:8.4f}   {gap:.12e}   {strip_gap(p, d, l):.12e}")
