"""
Why the embedding is not compact
================================

Translating one near-extremal bump along the free axis gives functions with
disjoint supports. Every one of them has the same L^p norm, so no finite set
of balls of radius below the embedding norm can cover their images.
"""

import math

import numpy as np

from stripembed import StripDomain, build_translates, certify_isomorphism_bound, embedding_norm, refute_net
from stripembed.noncompact import random_net

d = StripDomain(1, ((0.0, math.pi),))
norm = embedding_norm(2, d).norm
print(f"embedding norm: {norm:.6f}")

# the base bump gets closer to extremal as its half-length grows
for l in (4 * math.pi, 8 * math.pi, 16 * math.pi, 32 * math.pi):
    ts = build_translates(2, d, l, 2, resolution=8)
    print(f"  l = {l / math.pi:4.0f} pi : ||u||_p = {ts.base_lp_norm:.6f}, gap to norm {norm - ts.base_lp_norm:.2e}")

# m translates span an isometric copy of l^p_m, checked on random coefficients
ts = build_translates(2, d, 16 * math.pi, 4)
cert = certify_isomorphism_bound(ts, trials=40)
print(f"\nm = 4 certificate: B deviation {cert.b_isometry_dev:.1e}, AIB - id {cert.aib_identity_dev:.1e}, "
      f"lower bound {cert.lower_bound:.6f}")

# any finite net of radius 0.6 misses a translate
rng = np.random.default_rng(1)
net = random_net(d, rng, 5, 80.0, 0.6)
ref = refute_net(2, d, 16 * math.pi, net, 0.65)
print(f"\nnet with {len(net.centers)} centres: witness moved by {ref.translation:.2f}, "
      f"distances {', '.join(f'{m:.4f}' for m in ref.margins)} all > 0.6")
