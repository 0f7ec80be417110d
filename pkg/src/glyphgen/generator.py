"""Token-level sampling and rendering of symbol programs.

A program fixes what a symbol is; a token fixes how one instance of it is
written: per-point trajectory wobble, per-part affine jitter, start
jitter, and a global rescale plus translation of the center of mass.
Rendering resolves part start positions through the relations, interpolates
the control points with a Catmull-Rom spline, and stamps an anti-aliased
pen disc along the path.

generate_exemplars ties it together for one-shot generation: parse the
input glyph, pick a parse by weight, sample a token, render. The weighted
sum over parses and token draws is the sampling distribution of each
exemplar; the program is shared across the N token slots of a parse, so
the inner mixture collapses to a fresh token draw per exemplar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import ConfigError, OffCanvas
from .geometry import affine_2d, catmull_rom, densify, point_at_fraction
from .images import stamp_path
from .parsing import parse_glyph, parse_to_program
from .stroke_model import PrimitiveLibrary, SymbolProgram


@dataclass(eq=False)
class TokenParams:
    """Instance-level writing parameters for one rendered exemplar."""

    trajectory_noise: tuple[np.ndarray, ...]   # per part: (n_i, P, 2) pixels
    part_rotations: np.ndarray                 # (kappa,) radians
    part_scales: np.ndarray                    # (kappa, 2) anisotropic factors
    part_shears: np.ndarray                    # (kappa,)
    start_jitter: np.ndarray                   # (kappa, 2) pixels
    global_scale: float
    global_translation: np.ndarray             # (2,) pixels


@dataclass(frozen=True)
class InkModel:
    """How the pen meets the page."""

    pen_width: float = 3.0
    blur_sigma: float = 0.0
    ink_noise: float = 0.0          # dropout probability per pixel
    binary_output: bool = False

    def __post_init__(self):
        if self.pen_width <= 0 or self.blur_sigma < 0 or not 0 <= self.ink_noise < 1:
            raise ConfigError("ink model parameters out of range")


@dataclass(frozen=True)
class GenerationConfig:
    """Noise magnitudes and mixture sizes for exemplar generation."""

    K: int = 1                      # parses in the mixture
    N: int = 10                     # token slots per parse (provenance only)
    sigma_trajectory: float = 0.02  # canvas-size fractions, per control point
    sigma_rotation: float = 0.1     # radians per part
    sigma_scale: float = 0.1        # log-scale per part, per axis
    sigma_shear: float = 0.0
    sigma_start: float = 0.0        # pixels per part
    sigma_global_scale: float = 0.05
    sigma_translation: float = 2.0  # pixels
    ink: InkModel = field(default_factory=InkModel)
    canvas_size: int = 105
    fast_mode: bool = False         # True keeps primitive means as shapes
    seed: int | None = None

    def __post_init__(self):
        if self.K < 1 or self.N < 1:
            raise ConfigError("K and N must be at least 1")


_PRESETS = {
    "zero": dict(sigma_trajectory=0.0, sigma_rotation=0.0, sigma_scale=0.0,
                 sigma_shear=0.0, sigma_start=0.0, sigma_global_scale=0.0,
                 sigma_translation=0.0, ink=InkModel()),
    "subtle": dict(sigma_trajectory=0.01, sigma_rotation=0.05, sigma_scale=0.05,
                   sigma_shear=0.0, sigma_start=0.0, sigma_global_scale=0.025,
                   sigma_translation=1.0),
    "default": dict(),
    "wild": dict(sigma_trajectory=0.04, sigma_rotation=0.2, sigma_scale=0.2,
                 sigma_shear=0.1, sigma_start=2.0, sigma_global_scale=0.1,
                 sigma_translation=4.0),
}


def preset(name: str, **overrides) -> GenerationConfig:
    """Named noise presets: zero | subtle | default | wild."""
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}")
    kwargs = dict(_PRESETS[name])
    kwargs.update(overrides)
    return GenerationConfig(**kwargs)


# ---------------------------------------------------------------------------
# Token sampling
# ---------------------------------------------------------------------------


def _clipped_normal(rng, sigma: float, size=None):
    if sigma == 0.0:
        return np.zeros(size) if size is not None else 0.0
    draw = rng.normal(0.0, sigma, size=size)
    return np.clip(draw, -6.0 * sigma, 6.0 * sigma)


def sample_token(psi: SymbolProgram, cfg: GenerationConfig,
                 rng: np.random.Generator) -> TokenParams:
    """Draw token parameters: zero-mean Gaussians, scales log-normal around 1."""
    kappa = psi.kappa
    traj_sigma = cfg.sigma_trajectory * cfg.canvas_size
    noise = tuple(
        np.asarray(_clipped_normal(rng, traj_sigma, size=part.offsets.shape))
        for part in psi.parts
    )
    rotations = np.asarray(_clipped_normal(rng, cfg.sigma_rotation, size=kappa))
    scales = np.exp(_clipped_normal(rng, cfg.sigma_scale, size=(kappa, 2)))
    shears = np.asarray(_clipped_normal(rng, cfg.sigma_shear, size=kappa))
    jitter = np.asarray(_clipped_normal(rng, cfg.sigma_start, size=(kappa, 2)))
    gscale = float(np.exp(_clipped_normal(rng, cfg.sigma_global_scale)))
    gtrans = np.asarray(_clipped_normal(rng, cfg.sigma_translation, size=2))
    return TokenParams(
        trajectory_noise=noise, part_rotations=rotations, part_scales=scales,
        part_shears=shears, start_jitter=jitter, global_scale=gscale,
        global_translation=gtrans)


def identity_token(psi: SymbolProgram) -> TokenParams:
    """The zero-noise token: renders the program exactly as written."""
    kappa = psi.kappa
    return TokenParams(
        trajectory_noise=tuple(np.zeros(p.offsets.shape) for p in psi.parts),
        part_rotations=np.zeros(kappa),
        part_scales=np.ones((kappa, 2)),
        part_shears=np.zeros(kappa),
        start_jitter=np.zeros((kappa, 2)),
        global_scale=1.0,
        global_translation=np.zeros(2))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _part_local_trajectory(part, lib: PrimitiveLibrary, noise: np.ndarray) -> np.ndarray:
    """Chain the part's scaled sub-strokes from the origin, with wobble."""
    pos = np.zeros(2)
    pieces = []
    for j, pid in enumerate(part.primitive_ids):
        shape = lib.primitives[pid].mean + part.offsets[j]
        seg = (shape - shape[0]) * part.scales[j]
        wob = noise[j] - noise[j][0]     # anchor stays exact so chaining holds
        seg = seg + wob + pos
        pieces.append(seg if j == 0 else seg[1:])
        pos = seg[-1]
    return np.concatenate(pieces, axis=0)


def _resolve_start(relation, resolved: list[np.ndarray]) -> np.ndarray:
    if relation.kind == "independent":
        return np.asarray(relation.position, dtype=np.float64)
    target = resolved[relation.target_part]
    if relation.kind == "at_start":
        return target[0].copy()
    if relation.kind == "at_end":
        return target[-1].copy()
    return point_at_fraction(target, relation.along_position)


def program_trajectories(psi: SymbolProgram, theta: TokenParams,
                         lib: PrimitiveLibrary) -> list[np.ndarray]:
    """Absolute control-point trajectories of every part under a token."""
    resolved: list[np.ndarray] = []
    for i, (part, rel) in enumerate(zip(psi.parts, psi.relations)):
        local = _part_local_trajectory(part, lib, theta.trajectory_noise[i])
        a = affine_2d(float(theta.part_rotations[i]),
                      tuple(theta.part_scales[i]),
                      float(theta.part_shears[i]))
        local = local @ a.T
        start = _resolve_start(rel, resolved) + theta.start_jitter[i]
        resolved.append(local + start)
    all_pts = np.concatenate(resolved, axis=0)
    com = all_pts.mean(axis=0)
    return [
        (t - com) * theta.global_scale + com + theta.global_translation
        for t in resolved
    ]


def render(psi: SymbolProgram, theta: TokenParams, ink: InkModel,
           canvas, lib: PrimitiveLibrary,
           rng: np.random.Generator | None = None) -> np.ndarray:
    """Rasterize a token of a program onto a canvas.

    Pipeline: resolve trajectories, Catmull-Rom interpolation, disc
    stamping, optional blur, optional ink dropout, clamp. Raises OffCanvas
    when fewer than half the control points land on the canvas; partial
    overhang is clipped.
    """
    if isinstance(canvas, int):
        w = h = canvas
    else:
        w, h = canvas
    trajs = program_trajectories(psi, theta, lib)
    all_pts = np.concatenate(trajs, axis=0)
    on = (all_pts[:, 0] >= 0) & (all_pts[:, 0] < w) \
        & (all_pts[:, 1] >= 0) & (all_pts[:, 1] < h)
    frac = float(np.mean(on))
    if frac < 0.5:
        raise OffCanvas(f"only {frac:.0%} of the trajectory lands on canvas")
    out = np.zeros((h, w))
    for t in trajs:
        path = densify(catmull_rom(t, samples_per_segment=8), max_spacing=0.5)
        stamp_path(out, path, ink.pen_width / 2.0)
    if ink.blur_sigma > 0:
        out = ndimage.gaussian_filter(out, ink.blur_sigma)
    if ink.ink_noise > 0:
        if rng is None:
            raise ConfigError("ink dropout requires a random generator")
        keep = rng.uniform(size=out.shape) >= ink.ink_noise
        out = out * keep
    out = np.clip(out, 0.0, 1.0)
    if ink.binary_output:
        out = (out >= 0.5).astype(np.float64)
    return out


# ---------------------------------------------------------------------------
# One-shot exemplar generation
# ---------------------------------------------------------------------------


def draw_exemplar(programs: list[SymbolProgram], weights: np.ndarray,
                  lib: PrimitiveLibrary, cfg: GenerationConfig,
                  rng: np.random.Generator,
                  max_attempts: int = 20) -> tuple[np.ndarray, int]:
    """Sample (image, parse index) from the parse-weighted token mixture."""
    idx = int(rng.choice(len(programs), p=weights))
    psi = programs[idx]
    last_err = None
    for _ in range(max_attempts):
        theta = sample_token(psi, cfg, rng)
        try:
            img = render(psi, theta, cfg.ink, cfg.canvas_size, lib, rng=rng)
            return img, idx
        except OffCanvas as err:      # extreme jitter; redraw the token
            last_err = err
    raise last_err


def generate_exemplars(img: np.ndarray, n: int, lib: PrimitiveLibrary,
                       cfg: GenerationConfig,
                       rng: np.random.Generator) -> list[np.ndarray]:
    """Generate n new exemplars of the glyph in img (one-shot generation)."""
    if n == 0:
        return []
    ps = parse_glyph(img, lib, rng=rng, K_max=cfg.K)
    if cfg.fast_mode:
        programs = list(ps.programs)
    else:
        programs = [parse_to_program(p, lib, fast_mode=False) for p in ps.parses]
    return [
        draw_exemplar(programs, ps.weights, lib, cfg, rng)[0]
        for _ in range(n)
    ]


def contact_sheet(images: list[np.ndarray], cols: int = 3,
                  pad: int = 2) -> np.ndarray:
    """Tile exemplars into a grid image (white separators)."""
    if not images:
        return np.ones((1, 1))
    h = max(im.shape[0] for im in images)
    w = max(im.shape[1] for im in images)
    rows = (len(images) + cols - 1) // cols
    sheet = np.zeros((rows * h + (rows + 1) * pad, cols * w + (cols + 1) * pad))
    for k, im in enumerate(images):
        r, c = divmod(k, cols)
        y0 = pad + r * (h + pad)
        x0 = pad + c * (w + pad)
        sheet[y0:y0 + im.shape[0], x0:x0 + im.shape[1]] = im
    return sheet
