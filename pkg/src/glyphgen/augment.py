"""Classic image-level augmentation for real symbol crops.

Transforms are applied in a fixed order — rotation, uniform scale, signed
stroke thickness (iterated 3x3 dilation or erosion), pixel dropout — so a
given seed always reproduces the same output. Identity parameters are a
bit-exact no-op, and rotations at exact multiples of 90 degrees bypass
interpolation entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import ConfigError, DegenerateOutput
from .images import dilate, erode


@dataclass(frozen=True)
class AugmentParams:
    """Sampling ranges for each transform (inclusive)."""

    rotation_deg: tuple[float, float] = (-10.0, 10.0)
    scale: tuple[float, float] = (0.9, 1.1)
    thickness_delta: tuple[int, int] = (-1, 1)
    erosion_noise: float = 0.02

    def __post_init__(self):
        for name in ("rotation_deg", "scale", "thickness_delta"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} range is reversed")
        if self.scale[0] <= 0:
            raise ConfigError("scale must stay positive")
        if not 0 <= self.erosion_noise < 1:
            raise ConfigError("erosion_noise must be in [0, 1)")


IDENTITY = AugmentParams(rotation_deg=(0.0, 0.0), scale=(1.0, 1.0),
                         thickness_delta=(0, 0), erosion_noise=0.0)


def _rotate(img: np.ndarray, angle: float) -> np.ndarray:
    if angle == 0.0:
        return img
    if angle % 90.0 == 0.0:
        return np.rot90(img, k=int(angle // 90) % 4).copy()
    im = Image.fromarray(img.astype(np.float32), mode="F")
    rot = im.rotate(angle, resample=Image.BILINEAR, expand=True, fillcolor=0.0)
    return np.clip(np.asarray(rot, dtype=np.float64), 0.0, 1.0)


def _scale(img: np.ndarray, factor: float) -> np.ndarray:
    if factor == 1.0:
        return img
    h, w = img.shape
    nh, nw = int(round(h * factor)), int(round(w * factor))
    if nh < 1 or nw < 1:
        raise DegenerateOutput(f"scale {factor} collapses {w}x{h} below 1x1")
    im = Image.fromarray(img.astype(np.float32), mode="F")
    return np.clip(
        np.asarray(im.resize((nw, nh), Image.BILINEAR), dtype=np.float64), 0.0, 1.0)


def _thickness(img: np.ndarray, delta: int) -> np.ndarray:
    out = img
    for _ in range(abs(delta)):
        out = dilate(out, 1) if delta > 0 else erode(out, 1)
    return out


def augment_with_params(img: np.ndarray, p: AugmentParams,
                        rng: np.random.Generator) -> tuple[np.ndarray, dict]:
    """Augment and also return the sampled parameter values (for manifests)."""
    angle = float(rng.uniform(*p.rotation_deg))
    factor = float(rng.uniform(*p.scale))
    delta = int(rng.integers(p.thickness_delta[0], p.thickness_delta[1] + 1))
    out = np.asarray(img, dtype=np.float64)
    out = _rotate(out, angle)
    out = _scale(out, factor)
    if delta != 0:
        out = _thickness(out, delta)
    if p.erosion_noise > 0:
        out = out * (rng.uniform(size=out.shape) >= p.erosion_noise)
    params = {"rotation_deg": angle, "scale": factor,
              "thickness_delta": delta, "erosion_noise": p.erosion_noise}
    return out, params


def augment(img: np.ndarray, p: AugmentParams,
            rng: np.random.Generator) -> np.ndarray:
    """Rotate, rescale, thicken/thin, and drop pixels, per sampled parameters."""
    return augment_with_params(img, p, rng)[0]
