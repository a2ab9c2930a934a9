"""Continuous placement of a unit segment in planar convex bodies.

For each body the selector picks the centre of the translate set at every
angle; the printed gaps show the placement path tightening as the angle grid
doubles.
"""
import numpy as np

from kakeya import bodies
from kakeya.geometry import Segment
from kakeya.selector2d import trace

unit = Segment([0, 0], [1, 0], 1.0)
for name, K in bodies.corpus_2d().items():
    tr = trace(K, unit, 1024)
    gaps = [tr.subsample(s).max_gap for s in (4, 2, 1)]
    print(f"{name:15s} max gap at n=256/512/1024: " + " ".join(f"{g:.2e}" for g in gaps)
          + f"   min slack {tr.slacks.min():.3f}")

f0 = trace(bodies.disk(1.0, 256), unit, 8)
print("disk placements (expected -1/2 (cos, sin)):")
for th, f in zip(f0.angles, f0.translates):
    print(f"  theta {th:.3f}  f {np.round(f, 6)}")
