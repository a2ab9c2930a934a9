"""Rotating a unit segment inside the cylinder between two equatorial directions.

Directions on the equator x = 0 have flat translate sets, so the planner
routes through off-equator directions; the path is checked at 10x density.
"""
import numpy as np

from kakeya import bodies
from kakeya.planner import _deepest, build_graph, plan, validate

K = bodies.cylinder()
graph = build_graph(K, 4)
v0, v1 = np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])
path = plan(K, (v0, _deepest(K, v0)[0]), (v1, _deepest(K, v1)[0]), margin=1e-3, graph=graph)
rep = validate(path, K, 10)
print(f"{len(path)} samples, anchors {path.info['start_kind']}/{path.info['goal_kind']}, "
      f"validated {rep.passed} (min slack {rep.min_slack:.2e})")
print(f"largest |x| along the direction path: {np.abs(path.directions[:, 0]).max():.3f}")
