"""Continuous placement of a planar probe under all rotations.

For each rotation angle the set of admissible translations is a convex
polygon; choosing the centre of its minimum enclosing ball gives a
placement that varies continuously with the angle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .erosion import FEAS_TOL, erode_rotated
from .errors import EmptyBody, NotKakeyaAtAngle
from .geometry import HPolytope, Rotation, VPolytope, h_to_v_2d, probe_points
from .metrics import chebyshev_center


@dataclass
class SelectorTrace:
    angles: np.ndarray
    translates: np.ndarray
    gaps: np.ndarray  # gaps[i] = |f(angles[i+1]) - f(angles[i])|, last entry wraps to angles[0]
    slacks: np.ndarray  # smallest container slack of each placement

    @property
    def max_gap(self) -> float:
        return float(self.gaps.max()) if len(self.gaps) else 0.0

    def subsample(self, step: int) -> "SelectorTrace":
        """Trace on every step-th angle (a coarser uniform grid)."""
        a, t, s = self.angles[::step], self.translates[::step], self.slacks[::step]
        return SelectorTrace(a, t, _gaps(t), s)


def _gaps(translates) -> np.ndarray:
    return np.linalg.norm(np.roll(translates, -1, axis=0) - translates, axis=1)


def admissible_polygon(K: HPolytope, S, theta: float) -> VPolytope:
    I = erode_rotated(K, S, Rotation.planar(theta))
    if not I.feasible:
        raise NotKakeyaAtAngle(theta)
    try:
        return h_to_v_2d(I.poly)
    except EmptyBody:
        raise NotKakeyaAtAngle(theta) from None


def select(K: HPolytope, S, theta: float, seed: int = 0) -> np.ndarray:
    """Translation placing the probe rotated by theta inside K."""
    f, slack = _select(K, S, theta, seed)
    if slack < -FEAS_TOL:
        raise NotKakeyaAtAngle(theta)
    return f


def _select(K, S, theta, seed):
    V = admissible_polygon(K, S, theta)
    f = chebyshev_center(V, seed).center
    placed = Rotation.planar(theta).apply(probe_points(S)) + f
    return f, float(K.slack(placed).min())


def trace(K: HPolytope, S, n_samples: int, seed: int = 0) -> SelectorTrace:
    """Selector on the uniform grid 2 pi i / n, i = 0..n-1, with wrap-around gap."""
    if n_samples < 2:
        raise ValueError("need at least two samples")
    angles = 2 * np.pi * np.arange(n_samples) / n_samples
    out = np.empty((n_samples, 2))
    slacks = np.empty(n_samples)
    for i, th in enumerate(angles):
        out[i], slacks[i] = _select(K, S, th, seed)
        if slacks[i] < -FEAS_TOL:
            raise NotKakeyaAtAngle(th)
    return SelectorTrace(angles, out, _gaps(out), slacks)
