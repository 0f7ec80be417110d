"""Glyph image conventions and basic raster operations.

A glyph image is a 2D float array with values in [0, 1], indexed
``img[y, x]``, with ink = 1 and background = 0. Trajectory points elsewhere
in the package are (x, y) pairs in the same pixel frame.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from .errors import DataError

#: type alias used throughout: 2D float array, ink-high, values in [0, 1]
GlyphImage = np.ndarray

_EIGHT = np.ones((3, 3), dtype=bool)


def load_glyph(path: str | Path, invert: bool = True) -> GlyphImage:
    """Load a PNG as a float glyph image.

    RGB inputs are converted by luminance. Scanned crops are dark ink on a
    light page, so by default values are inverted to the ink-high convention.
    """
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("L"), dtype=np.float64) / 255.0
    except (OSError, ValueError) as e:
        raise DataError(f"cannot read image {path}: {e}") from e
    if invert:
        arr = 1.0 - arr
    return arr


def save_glyph(img: GlyphImage, path: str | Path, invert: bool = True) -> None:
    """Write a glyph image as an 8-bit grayscale PNG (dark ink by default)."""
    arr = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    if invert:
        arr = 1.0 - arr
    Image.fromarray(np.round(arr * 255.0).astype(np.uint8), mode="L").save(path)


def otsu_threshold(img: GlyphImage, bins: int = 256) -> float:
    """Otsu's threshold: maximize inter-class variance over a histogram."""
    values = np.asarray(img, dtype=np.float64).ravel()
    hist, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    hist = hist.astype(np.float64)
    total = hist.sum()
    if total == 0:
        return 0.5
    centers = 0.5 * (edges[:-1] + edges[1:])
    w0 = np.cumsum(hist)
    w1 = total - w0
    mu_cum = np.cumsum(hist * centers)
    mu_total = mu_cum[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        m0 = mu_cum / w0
        m1 = (mu_total - mu_cum) / w1
        between = w0 * w1 * (m0 - m1) ** 2
    between[~np.isfinite(between)] = -1.0
    k = int(np.argmax(between))
    # Threshold sits on the upper edge of the winning bin: ink is >= threshold.
    return float(edges[k + 1])


def binarize(img: GlyphImage, threshold: float | None = None) -> GlyphImage:
    """Threshold to {0, 1}: ink where value >= threshold (Otsu when unset)."""
    arr = np.asarray(img, dtype=np.float64)
    t = otsu_threshold(arr) if threshold is None else float(threshold)
    return (arr >= t).astype(np.float64)


def fit_canvas(img: GlyphImage, size: int, margin: int = 4) -> GlyphImage:
    """Scale a glyph to fit a size x size canvas, preserving aspect, centered.

    The ink bounding box is scaled to (size - 2*margin) on its longer side.
    """
    arr = np.asarray(img, dtype=np.float64)
    ys, xs = np.nonzero(arr > 0)
    if len(ys) == 0:
        return np.zeros((size, size))
    crop = arr[ys.min():ys.max() + 1, xs.min():xs.max() + 1]
    h, w = crop.shape
    target = max(1, size - 2 * margin)
    scale = target / max(h, w)
    nh = max(1, int(round(h * scale)))
    nw = max(1, int(round(w * scale)))
    im = Image.fromarray(np.round(np.clip(crop, 0, 1) * 255).astype(np.uint8))
    resized = np.asarray(im.resize((nw, nh), Image.BILINEAR), dtype=np.float64) / 255.0
    out = np.zeros((size, size))
    y0 = (size - nh) // 2
    x0 = (size - nw) // 2
    out[y0:y0 + nh, x0:x0 + nw] = resized
    return out


def dilate(img: GlyphImage, radius: int = 1) -> GlyphImage:
    """Binary dilation with a (2r+1) square structuring element."""
    if radius <= 0:
        return (np.asarray(img) > 0).astype(np.float64)
    selem = np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool)
    return ndimage.binary_dilation(np.asarray(img) > 0, structure=selem).astype(np.float64)


def erode(img: GlyphImage, radius: int = 1) -> GlyphImage:
    if radius <= 0:
        return (np.asarray(img) > 0).astype(np.float64)
    selem = np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool)
    return ndimage.binary_erosion(np.asarray(img) > 0, structure=selem).astype(np.float64)


def count_components(img: GlyphImage) -> int:
    """Number of 8-connected ink components."""
    _, n = ndimage.label(np.asarray(img) > 0, structure=_EIGHT)
    return int(n)


def ink_center_of_mass(img: GlyphImage) -> np.ndarray:
    """(x, y) center of mass of the ink; canvas center for blank images."""
    arr = np.asarray(img, dtype=np.float64)
    total = arr.sum()
    if total <= 0:
        return np.array([arr.shape[1] / 2.0, arr.shape[0] / 2.0])
    ys, xs = np.mgrid[0:arr.shape[0], 0:arr.shape[1]]
    return np.array([float((xs * arr).sum() / total), float((ys * arr).sum() / total)])


def shift_image(img: GlyphImage, dx: int, dy: int) -> GlyphImage:
    """Integer shift with zero fill."""
    arr = np.asarray(img, dtype=np.float64)
    out = np.zeros_like(arr)
    h, w = arr.shape
    ys0, ys1 = max(0, dy), min(h, h + dy)
    xs0, xs1 = max(0, dx), min(w, w + dx)
    yt0, yt1 = max(0, -dy), min(h, h - dy)
    xt0, xt1 = max(0, -dx), min(w, w - dx)
    out[ys0:ys1, xs0:xs1] = arr[yt0:yt1, xt0:xt1]
    return out


def iou(a: GlyphImage, b: GlyphImage) -> float:
    """Intersection over union of two binary masks (0 if both empty)."""
    am = np.asarray(a) > 0
    bm = np.asarray(b) > 0
    union = np.logical_or(am, bm).sum()
    if union == 0:
        return 0.0
    return float(np.logical_and(am, bm).sum() / union)


def aligned_iou(a: GlyphImage, b: GlyphImage, dilation_radius: int = 2) -> float:
    """IoU after aligning a's ink center of mass onto b's, with dilation."""
    ca = ink_center_of_mass(a)
    cb = ink_center_of_mass(b)
    dx = int(round(cb[0] - ca[0]))
    dy = int(round(cb[1] - ca[1]))
    moved = shift_image(np.asarray(a) > 0, dx, dy)
    return iou(dilate(moved, dilation_radius), dilate(b, dilation_radius))


def crop_to_ink(img: GlyphImage, margin: int = 2) -> GlyphImage:
    """Crop to the ink bounding box plus a margin (clipped at the borders)."""
    arr = np.asarray(img, dtype=np.float64)
    ys, xs = np.nonzero(arr > 0)
    if len(ys) == 0:
        raise DataError("cannot crop an empty image to its ink")
    y0 = max(0, ys.min() - margin)
    y1 = min(arr.shape[0], ys.max() + 1 + margin)
    x0 = max(0, xs.min() - margin)
    x1 = min(arr.shape[1], xs.max() + 1 + margin)
    return arr[y0:y1, x0:x1].copy()


def stamp_path(canvas: GlyphImage, points: np.ndarray, radius: float) -> None:
    """Max-combine anti-aliased pen discs along a point path, in place.

    A pixel's value is clip(radius + 0.5 - distance_to_nearest_point, 0, 1),
    so radius 0.5 draws an exact one-pixel axis-aligned line.
    """
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) == 0:
        return
    h, w = canvas.shape
    reach = int(np.ceil(radius + 1.0))
    offs = np.arange(-reach, reach + 1)
    oy, ox = np.meshgrid(offs, offs, indexing="ij")
    ax = np.round(pts[:, 0]).astype(np.int64)
    ay = np.round(pts[:, 1]).astype(np.int64)
    px = ax[:, None, None] + ox[None]
    py = ay[:, None, None] + oy[None]
    dx = px - pts[:, 0][:, None, None]
    dy = py - pts[:, 1][:, None, None]
    val = np.clip(radius + 0.5 - np.sqrt(dx * dx + dy * dy), 0.0, 1.0)
    ok = (px >= 0) & (px < w) & (py >= 0) & (py < h) & (val > 0)
    np.maximum.at(canvas, (py[ok], px[ok]), val[ok])
