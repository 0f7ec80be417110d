"""Procedural demo alphabet and handcrafted libraries.

Real cipher crops cannot ship with the package, so the demos, the CLI
--demo mode, and the end-to-end tests run on a small procedural alphabet
of ten structurally distinct glyph classes (bars, crosses, corners, a
ring, a zigzag, ...). The shapes cover the interesting skeleton topology:
endpoints, junctions, and cycles.

straight_line_library builds a fully specified library from analytic
primitive trajectories with tight covariances; it is the controlled
environment for sampling/parsing round-trip checks.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import resample_polyline
from .images import stamp_path
from .stroke_model import (
    CountModel,
    FitConfig,
    PositionPrior,
    Primitive,
    PrimitiveLibrary,
    RelationPrior,
    TransitionModel,
)


def _glyph(paths, canvas_size: int, pen_width: float) -> np.ndarray:
    img = np.zeros((canvas_size, canvas_size))
    s = canvas_size
    for path in paths:
        pts = np.asarray(path, dtype=np.float64) * s
        dense = resample_polyline(pts, max(2, int(np.ceil(len(pts) * s / 4))))
        stamp_path(img, dense, pen_width / 2.0)
    return img


def _circle(cx, cy, r, n=64, sweep=2 * math.pi, start=0.0):
    t = np.linspace(start, start + sweep, n)
    return np.stack([cx + r * np.cos(t), cy + r * np.sin(t)], axis=1)


def demo_alphabet(canvas_size: int = 105, pen_width: float = 3.0) -> dict[str, np.ndarray]:
    """Ten distinct glyph classes, one clean seed exemplar each."""
    shapes = {
        "bar": [[(0.5, 0.15), (0.5, 0.85)]],
        "dash": [[(0.15, 0.5), (0.85, 0.5)]],
        "cross": [[(0.5, 0.15), (0.5, 0.85)], [(0.15, 0.5), (0.85, 0.5)]],
        "saltire": [[(0.2, 0.2), (0.8, 0.8)], [(0.8, 0.2), (0.2, 0.8)]],
        "ell": [[(0.25, 0.15), (0.25, 0.8), (0.8, 0.8)]],
        "tee": [[(0.15, 0.2), (0.85, 0.2)], [(0.5, 0.2), (0.5, 0.85)]],
        "ring": [_circle(0.5, 0.5, 0.32)],
        "vee": [[(0.2, 0.15), (0.5, 0.85), (0.8, 0.15)]],
        "zig": [[(0.2, 0.2), (0.8, 0.2), (0.2, 0.8), (0.8, 0.8)]],
        "hook": [_circle(0.5, 0.5, 0.32, sweep=1.5 * math.pi, start=0.25 * math.pi)],
    }
    return {
        label: _glyph(paths, canvas_size, pen_width)
        for label, paths in shapes.items()
    }


def procedural_corpus(n: int = 50, seed: int = 0,
                      canvas_size: int = 105) -> list[np.ndarray]:
    """n varied binary glyphs: the alphabet under random rotation, scale,
    thickness, and pixel dropout. Used to exercise thinning and parsing."""
    from .augment import AugmentParams, augment
    from .images import binarize

    base = list(demo_alphabet(canvas_size).values())
    params = AugmentParams(rotation_deg=(-30.0, 30.0), scale=(0.7, 1.3),
                           thickness_delta=(-1, 2), erosion_noise=0.02)
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        img = augment(base[i % len(base)], params, rng)
        out.append(binarize(img, threshold=0.5))
    return out


# ---------------------------------------------------------------------------
# Handcrafted libraries
# ---------------------------------------------------------------------------


def _line_mean(p0, p1, n_points: int) -> np.ndarray:
    return np.linspace(np.asarray(p0, float), np.asarray(p1, float), n_points)


def straight_line_library(kappa_max: int = 3, n_points: int = 10,
                          sigma: float = 0.02, canvas_size: int = 105,
                          scale_mean: float = 28.0,
                          position_sigma: float = 16.0) -> PrimitiveLibrary:
    """Four straight-line primitives with tight diagonal covariance.

    Primitive means are already in canonical orientation (the top-left
    endpoint first), matching how parses orient strokes. Part and sub-part
    counts concentrate on small values so sampled symbols stay simple.
    """
    ends = [
        ((-0.5, 0.0), (0.5, 0.0)),      # horizontal, left to right
        ((0.0, -0.5), (0.0, 0.5)),      # vertical, top to bottom
        ((-0.5, -0.5), (0.5, 0.5)),     # diagonal, top-left down
        ((0.5, -0.5), (-0.5, 0.5)),     # anti-diagonal, top-right down
    ]
    k = len(ends)
    prims = tuple(
        Primitive(mean=_line_mean(p0, p1, n_points),
                  cov=np.full(2 * n_points, sigma ** 2),
                  weight=1.0 / k)
        for p0, p1 in ends
    )
    p_kappa = np.array([0.5, 0.3, 0.2][:kappa_max], dtype=np.float64)
    p_kappa = p_kappa / p_kappa.sum()
    n_max = 4
    p_n = np.tile(np.array([0.997, 0.001, 0.001, 0.001]), (kappa_max, 1))
    count = CountModel(p_kappa=p_kappa, p_n_given_kappa=p_n)
    trans = TransitionModel(initial=np.full(k, 1.0 / k),
                            matrix=np.full((k, k), 1.0 / k))
    half = canvas_size / 2.0
    prior = RelationPrior(
        kind_probs=(1.0, 0.0, 0.0, 0.0),
        position=PositionPrior(kind="gaussian", center=(half, half),
                               sigma=position_sigma))
    cfg = FitConfig(n_points=n_points, kappa_max=kappa_max, n_max=n_max,
                    canvas_size=canvas_size)
    return PrimitiveLibrary(
        primitives=prims, count_model=count, transition_model=trans,
        relation_prior=prior,
        scale_log_mean=float(np.log(scale_mean)), scale_log_sigma=0.15,
        config=cfg)


def toy_library(n_primitives: int = 2, kappa_max: int = 2, n_max: int = 2,
                n_points: int = 4, sigma: float = 0.05,
                canvas_size: int = 8,
                position_kind: str = "uniform") -> PrimitiveLibrary:
    """A minimal library sized for exhaustive-enumeration checks."""
    ends = [
        ((-0.5, 0.0), (0.5, 0.0)),
        ((0.0, -0.5), (0.0, 0.5)),
        ((-0.5, -0.5), (0.5, 0.5)),
        ((0.5, -0.5), (-0.5, 0.5)),
    ][:n_primitives]
    prims = tuple(
        Primitive(mean=_line_mean(p0, p1, n_points),
                  cov=np.full(2 * n_points, sigma ** 2),
                  weight=1.0 / n_primitives)
        for p0, p1 in ends
    )
    p_kappa = np.full(kappa_max, 1.0 / kappa_max)
    p_n = np.full((kappa_max, n_max), 1.0 / n_max)
    trans = TransitionModel(
        initial=np.full(n_primitives, 1.0 / n_primitives),
        matrix=np.full((n_primitives, n_primitives), 1.0 / n_primitives))
    position = PositionPrior(kind=position_kind,
                             center=(canvas_size / 2.0, canvas_size / 2.0),
                             sigma=canvas_size / 3.0,
                             lo=(0.0, 0.0), hi=(float(canvas_size), float(canvas_size)))
    cfg = FitConfig(n_points=n_points, kappa_max=kappa_max, n_max=n_max,
                    canvas_size=canvas_size)
    return PrimitiveLibrary(
        primitives=prims,
        count_model=CountModel(p_kappa=p_kappa, p_n_given_kappa=p_n),
        transition_model=trans,
        relation_prior=RelationPrior(position=position),
        scale_log_mean=float(np.log(canvas_size / 3.0)),
        scale_log_sigma=0.2,
        config=cfg)
