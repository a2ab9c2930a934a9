"""The four-dimensional construction: dyadic labels and the forced translate jump.

Prints the label of a few points of the unit circle, the three kinds of
intersection of a unit segment's endpoints with the cylinder, and the
obstruction report for a few random rotation paths.
"""
import math

import numpy as np

from kakeya import fourd

for x in (0.5, 0.75, 0.9, 0.6, 0.55, 0.0):
    p = (x, math.sqrt(1 - x * x))
    print(f"x = {x:.2f}: set {fourd.ap_label(p)}")

for v in ([1.0, 0, 0, 0], [0.3, 0.4, math.sqrt(0.75), 0], [math.sqrt(0.2), 0, math.sqrt(0.8), 0]):
    inter = fourd.sv_cylinder_intersection(v)
    print(f"v = {np.round(v, 3)}: {inter.kind}, {len(inter.all_points)} points")

rng = np.random.default_rng(0)
for i in range(5):
    rep = fourd.verify_4d_obstruction(None, fourd.random_path_attempt(rng))
    print(f"path {i}: forced jump {rep['forced_jump']:.4f} (>= {fourd.OBSTRUCTION}), "
          f"largest early motion {rep['max_early_motion']:.4f}, continuity violated {rep['continuity_violated']}")
