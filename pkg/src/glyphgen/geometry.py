"""Polyline geometry: arc length, resampling, turning angles, splines."""

from __future__ import annotations

import numpy as np


def arc_length(points: np.ndarray) -> float:
    """Total polyline length of an (N, 2) point array."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def cumulative_arclength(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def resample_polyline(points: np.ndarray, n: int) -> np.ndarray:
    """Resample a polyline to n points uniformly spaced by arc length."""
    pts = np.asarray(points, dtype=float)
    if len(pts) == 1:
        return np.repeat(pts, n, axis=0)
    s = cumulative_arclength(pts)
    total = s[-1]
    if total <= 0.0:
        return np.repeat(pts[:1], n, axis=0)
    targets = np.linspace(0.0, total, n)
    out = np.empty((n, 2))
    out[:, 0] = np.interp(targets, s, pts[:, 0])
    out[:, 1] = np.interp(targets, s, pts[:, 1])
    return out


def point_at_fraction(points: np.ndarray, tau: float) -> np.ndarray:
    """Point at arc-length fraction tau in [0, 1] along a polyline."""
    pts = np.asarray(points, dtype=float)
    s = cumulative_arclength(pts)
    total = s[-1]
    if total <= 0.0:
        return pts[0].copy()
    target = float(np.clip(tau, 0.0, 1.0)) * total
    x = np.interp(target, s, pts[:, 0])
    y = np.interp(target, s, pts[:, 1])
    return np.array([x, y])


def turning_angles(points: np.ndarray, window: int = 2) -> np.ndarray:
    """Absolute direction change at each interior vertex, in radians.

    Directions are averaged over `window` steps on each side, which keeps
    pixel-chain staircase noise from registering as curvature.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    angles = np.zeros(n)
    for i in range(1, n - 1):
        a = pts[max(0, i - window)]
        b = pts[i]
        c = pts[min(n - 1, i + window)]
        v1 = b - a
        v2 = c - b
        n1 = np.linalg.norm(v1)
        n2 = np.linalg.norm(v2)
        if n1 < 1e-12 or n2 < 1e-12:
            continue
        cosang = np.clip(np.dot(v1, v2) / (n1 * n2), -1.0, 1.0)
        angles[i] = np.arccos(cosang)
    return angles


def catmull_rom(control: np.ndarray, samples_per_segment: int = 8) -> np.ndarray:
    """Interpolate a centripetal-free (uniform) Catmull-Rom spline.

    Passes through every control point; end tangents come from duplicated
    endpoints. Returns a dense (M, 2) polyline.
    """
    pts = np.asarray(control, dtype=float)
    if len(pts) < 2:
        return pts.copy()
    if len(pts) == 2 or samples_per_segment <= 1:
        return resample_polyline(pts, max(2, (len(pts) - 1) * samples_per_segment + 1))
    padded = np.vstack([pts[0], pts, pts[-1]])
    out = [pts[0]]
    t = np.linspace(0.0, 1.0, samples_per_segment + 1)[1:]
    t2 = t * t
    t3 = t2 * t
    for i in range(len(pts) - 1):
        p0, p1, p2, p3 = padded[i], padded[i + 1], padded[i + 2], padded[i + 3]
        # Standard uniform Catmull-Rom basis
        a = 2.0 * p1
        b = p2 - p0
        c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3
        d = -p0 + 3.0 * p1 - 3.0 * p2 + p3
        seg = 0.5 * (a[None, :] + np.outer(t, b) + np.outer(t2, c) + np.outer(t3, d))
        out.append(seg)
    return np.vstack([out[0][None, :], *out[1:]])


def densify(points: np.ndarray, max_spacing: float = 0.5) -> np.ndarray:
    """Insert points so consecutive samples are at most max_spacing apart."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return pts.copy()
    total = arc_length(pts)
    n = max(2, int(np.ceil(total / max_spacing)) + 1)
    return resample_polyline(pts, n)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def affine_2d(rotation: float = 0.0,
              scale: tuple[float, float] = (1.0, 1.0),
              shear: float = 0.0) -> np.ndarray:
    """2x2 linear map: rotation after shear after anisotropic scale."""
    rot = rotation_matrix(rotation)
    sh = np.array([[1.0, shear], [0.0, 1.0]])
    sc = np.diag(scale)
    return rot @ sh @ sc
