"""Containers used by the demos, tests and CLI."""
from __future__ import annotations

import numpy as np

from .geometry import HPolytope


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    th = np.pi * (1 + 5 ** 0.5) * i
    r = np.sqrt(1 - z * z)
    return np.stack([r * np.cos(th), r * np.sin(th), z], axis=1)


def ball(radius: float = 0.5, n_facets: int = 512) -> HPolytope:
    """Polytope with n_facets tangent planes of the ball (it contains the ball)."""
    return HPolytope(fibonacci_sphere(n_facets), np.full(n_facets, float(radius)))


def cylinder(half_length: float = 1.0, radius: float = 0.5, n_sides: int = 256) -> HPolytope:
    """{|x| <= half_length} times a regular n_sides-gon circumscribing the yz-disk."""
    ang = 2 * np.pi * np.arange(n_sides) / n_sides
    side = np.stack([np.zeros(n_sides), np.cos(ang), np.sin(ang)], axis=1)
    N = np.vstack([[1.0, 0, 0], [-1.0, 0, 0], side])
    b = np.concatenate([[half_length, half_length], np.full(n_sides, float(radius))])
    return HPolytope(N, b)


def disk(radius: float = 1.0, n_sides: int = 256) -> HPolytope:
    ang = 2 * np.pi * np.arange(n_sides) / n_sides
    return HPolytope(np.stack([np.cos(ang), np.sin(ang)], axis=1), np.full(n_sides, float(radius)))


def swept_hull(n_t: int = 64, n_circle: int = 64) -> HPolytope:
    """The swept-circle body at coarse resolution, pushed out by its grid error bound
    so that every unit segment of the exact body fits."""
    from .swept import build_swept_body
    body = build_swept_body(n_t, n_circle)
    return body.inflated()


def reuleaux(width: float = 1.1, n_arc: int = 64) -> HPolytope:
    """Hull of a sampled Reuleaux triangle of the given width (constant width, not centrally symmetric)."""
    from .geometry import hull2d
    corners = width / np.sqrt(3) * np.stack(
        [np.cos(np.pi / 2 + 2 * np.pi * np.arange(3) / 3), np.sin(np.pi / 2 + 2 * np.pi * np.arange(3) / 3)], 1)
    pts = []
    for i in range(3):
        c = corners[i]
        a, b = corners[(i + 1) % 3] - c, corners[(i + 2) % 3] - c
        t0, t1 = np.arctan2(a[1], a[0]), np.arctan2(b[1], b[0])
        if t1 < t0:
            t1 += 2 * np.pi
        t = np.linspace(t0, t1, n_arc)
        pts.append(c + width * np.stack([np.cos(t), np.sin(t)], 1))
    return hull2d(np.vstack(pts)).as_hrep()


def heptagon(seed: int = 7) -> HPolytope:
    """Random heptagon whose width in every direction exceeds 1."""
    rng = np.random.default_rng(seed)
    ang = np.sort(rng.uniform(0, 2 * np.pi, 7))
    while np.max(np.diff(np.append(ang, ang[0] + 2 * np.pi))) > 1.2:
        ang = np.sort(rng.uniform(0, 2 * np.pi, 7))
    N = np.stack([np.cos(ang), np.sin(ang)], 1)
    return HPolytope(N, rng.uniform(0.8, 1.0, 7) + N @ rng.normal(size=2) * 0.1)


def corpus_2d() -> dict:
    """Planar containers holding a unit segment in every direction."""
    return {
        "disk": disk(1.0, 256),
        "square": HPolytope.box([0, 0], [1.2, 1.2]),
        "heptagon": heptagon(),
        "thin_rectangle": HPolytope.box([0, 0], [3.0, 1.02]),
        "reuleaux": reuleaux(1.1),
    }
