"""A convex body in R^3 containing unit segments in all directions whose
placements cannot be chosen continuously.

The body is the convex hull of the surface f(t, x, y) = (t + x, y cos t, y sin t) / 2
over t in [0, pi] and (x, y) on the unit circle.  For a direction
v = (0, cos phi, sin phi) in the yz-plane the unit segments along v inside
the body form a single placement, and that placement jumps by pi/2 in the
first coordinate as phi crosses 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .erosion import FEAS_TOL, dimension_class, erode_direction, sampled_extreme_points
from .errors import DomainError, PreconditionViolated
from .geometry import HPolytope, Hull, VPolytope, hull3d
from .metrics import chebyshev_center


def swept_point(t, x, y) -> np.ndarray:
    """f(t, x, y); broadcasts over array arguments."""
    t, x, y = np.broadcast_arrays(np.asarray(t, float), np.asarray(x, float), np.asarray(y, float))
    return 0.5 * np.stack([t + x, y * np.cos(t), y * np.sin(t)], axis=-1)


def witness_pair(v) -> tuple[np.ndarray, np.ndarray]:
    """Two points of the swept surface whose difference is the unit vector v.

    Writing v = (r1, r2 cos phi, r2 sin phi) with phi in [0, pi] gives
    f(phi, r1, r2) - f(phi, -r1, -r2) = v.
    """
    v = np.asarray(v, dtype=float)
    r2 = float(np.hypot(v[1], v[2]))
    phi = float(np.arctan2(v[2], v[1]))
    if phi < 0:
        phi += np.pi
        r2 = -r2
    if phi > np.pi:  # arctan2 returns pi for v[2] = +0 with v[1] < 0
        phi -= np.pi
        r2 = -r2
    return swept_point(phi, v[0], r2), swept_point(phi, -v[0], -r2)


@dataclass
class SweptCircleBody:
    n_t: int
    n_circle: int
    points: VPolytope
    hull: Hull
    hrep: HPolytope
    witness: dict = field(default_factory=dict)

    @property
    def grid_error(self) -> float:
        """Bound on the distance from any surface point to the sampled hull.

        The surface has second derivatives of norm at most 1/2 in t and in the
        circle angle, so bilinear interpolation of the grid is within
        (h_t^2 + h_phi^2) / 16 of it.
        """
        h_t = np.pi / (self.n_t - 1)
        h_phi = 2 * np.pi / self.n_circle
        return (h_t ** 2 + h_phi ** 2) / 16

    @property
    def plane_error(self) -> float:
        """Same bound for the surface curves used by directions in the yz-plane.

        Their witnesses sit at circle angles pi/2 and 3pi/2, which are grid
        angles when n_circle is a multiple of 4.
        """
        h_t = np.pi / (self.n_t - 1)
        return h_t ** 2 / 16 if self.n_circle % 4 == 0 else self.grid_error

    def inflated(self, tau: float | None = None) -> HPolytope:
        return self.hrep.inflate(self.grid_error if tau is None else tau)


def build_swept_body(n_t: int = 512, n_circle: int = 256, n_witness: int = 100,
                     seed: int = 0) -> SweptCircleBody:
    if n_t < 8 or n_circle < 8:
        raise PreconditionViolated("n_t and n_circle must be at least 8")
    t = np.linspace(0.0, np.pi, n_t)
    ang = 2 * np.pi * np.arange(n_circle) / n_circle
    T, A = np.meshgrid(t, ang, indexing="ij")
    P = swept_point(T, np.cos(A), np.sin(A)).reshape(-1, 3)
    hull = hull3d(P)
    body = SweptCircleBody(n_t, n_circle, VPolytope(P), hull, hull.as_hrep())
    body.witness = witness_check(body, n_witness, seed)
    return body


def witness_check(body: SweptCircleBody, n_dirs: int = 100, seed: int = 0) -> dict:
    """Check that both witness points of random directions are in the hull.

    Tolerance is the grid error bound; failing directions are listed.
    """
    rng = np.random.default_rng(seed)
    V = rng.normal(size=(n_dirs, 3))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    tol = body.grid_error + 1e-9
    worst, failing = 0.0, []
    for v in V:
        a, b = witness_pair(v)
        s = float(body.hrep.slack(np.vstack([a, b])).min())
        worst = min(worst, s)
        if s < -tol:
            failing.append(v.tolist())
    return {"passed": not failing, "n_directions": n_dirs, "tolerance": tol,
            "min_slack": worst, "failing_directions": failing}


def expected_translate_3d(phi: float) -> np.ndarray:
    """The unique translate of the unit segment along (0, cos phi, sin phi)."""
    if phi == 0 or not abs(phi) < np.pi:
        raise DomainError("phi must lie in (-pi, 0) or (0, pi)")
    c, s = np.cos(phi), np.sin(phi)
    if phi > 0:
        return 0.5 * np.array([phi, -c, -s])
    return 0.5 * np.array([np.pi + phi, -c, -s])


def yz_direction(phi: float) -> np.ndarray:
    return np.array([0.0, np.cos(phi), np.sin(phi)])


def measure_translate_set(K: HPolytope, phi: float, point_tol: float):
    """Translate set of the yz-plane direction at angle phi: samples, class, centre."""
    I = erode_direction(K, yz_direction(phi))
    if not I.feasible:
        return None
    pts = sampled_extreme_points(I, n_extra=48)
    return {"points": pts, "class": dimension_class(I, point_tol),
            "centre": chebyshev_center(pts).center,
            "diameter": float(max(np.linalg.norm(pts - p, axis=1).max() for p in pts))}


def verify_discontinuity(body: SweptCircleBody, phi_list, hausdorff_tol: float = 0.02,
                         point_tol: float | None = None, jump_delta: float = 0.01,
                         tau: float | None = None) -> dict:
    """Compare computed translate sets with the closed form and measure the jump at phi = 0.

    The hull is inflated by tau (default: the yz-plane grid error) so the
    exact singleton placements are admissible.  A translate set counts as a
    point when its sampled diameter is at most point_tol (default
    hausdorff_tol).  The jump is |psi(-delta) - psi(delta)| extrapolated to
    delta -> 0 from delta and 2 delta; the exact value is pi/2.
    """
    if not body.witness.get("passed", False):
        raise PreconditionViolated(f"body fails its witness check: {body.witness.get('failing_directions')}")
    K = body.hrep.inflate(body.plane_error + 1e-9 if tau is None else tau)
    point_tol = hausdorff_tol if point_tol is None else point_tol
    checks, holes = [], []
    for phi in phi_list:
        m = measure_translate_set(K, phi, point_tol)
        if m is None:
            holes.append(phi)
            continue
        target = expected_translate_3d(phi)
        # Hausdorff distance from a convex set to a point is attained at a vertex
        h = float(np.linalg.norm(m["points"] - target, axis=1).max())
        checks.append({"phi": phi, "class": str(m["class"]), "diameter": m["diameter"],
                       "hausdorff": h, "translate": m["centre"], "expected": target,
                       "passed": h <= hausdorff_tol and m["class"].kind == "Point"})
    jumps = {}
    for d in (jump_delta, 2 * jump_delta):
        mp, mm = measure_translate_set(K, d, point_tol), measure_translate_set(K, -d, point_tol)
        if mp is None or mm is None:
            holes.append(d if mp is None else -d)
            continue
        jumps[d] = float(np.linalg.norm(mm["centre"] - mp["centre"]))
    jump = None
    if len(jumps) == 2:
        jump = 2 * jumps[jump_delta] - jumps[2 * jump_delta]
    return {"checks": checks, "holes": holes, "jump": jump, "jump_samples": jumps,
            "jump_target": np.pi / 2, "inflation": float(K.offsets[0] - body.hrep.offsets[0]),
            "passed": not holes and all(c["passed"] for c in checks)}
