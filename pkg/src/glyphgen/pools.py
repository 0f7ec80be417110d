"""Symbol pools: ingest real crops, fit libraries, build BPL and augmented pools.

A pool maps source -> class label -> list of SymbolInstance, the currency
of line composition. Real crops come from a `<class>/<name>.png` directory
layout; the BPL pool is drawn from parses of one seed glyph per class; the
REAL_AUG pool applies classic augmentation to the real crops. All sampling
uses child seeds keyed by (purpose, class, index), so pools are stable
under extension.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .augment import AugmentParams, augment_with_params
from .compose import BPL, REAL_AUG, SymbolInstance
from .errors import InsufficientData, MissingClass
from .generator import GenerationConfig, draw_exemplar
from .images import binarize, crop_to_ink, fit_canvas, load_glyph
from .parsing import deterministic_program, extract_substrokes, parse_glyph, parse_to_program
from .seeding import child_rng, child_seed
from .stroke_model import (
    FitConfig,
    PrimitiveLibrary,
    fit_count_models,
    fit_primitive_library,
)


def ingest(root: str | Path, scenario: int | None = None, seed: int = 0,
           canvas_size: int = 105) -> dict[str, list[np.ndarray]]:
    """Read class-labelled glyph crops from `<class-id>/<name>.png` dirs.

    Images are binarized and fit to the working canvas. When scenario is
    set, exactly that many crops are kept per class (seeded subsample);
    classes with fewer crops keep what they have.
    """
    root = Path(root)
    classes = sorted(p for p in root.iterdir() if p.is_dir())
    if not classes:
        raise MissingClass(f"no class directories under {root}")
    out: dict[str, list[np.ndarray]] = {}
    for cdir in classes:
        files = sorted(cdir.glob("*.png"))
        if not files:
            raise MissingClass(f"class directory {cdir} has no crops")
        if scenario is not None and len(files) > scenario:
            rng = child_rng(seed, "ingest", cdir.name)
            idx = sorted(rng.choice(len(files), size=scenario, replace=False))
            files = [files[int(i)] for i in idx]
        out[cdir.name] = [
            binarize(fit_canvas(binarize(load_glyph(f)), canvas_size))
            for f in files
        ]
    return out


def fit_library_from_glyphs(images, k: int, seed: int,
                            config: FitConfig | None = None) -> PrimitiveLibrary:
    """Fit primitives on glyph sub-strokes, then count/transition models."""
    cfg = config or FitConfig()
    imgs = list(images)
    subs = []
    for img in imgs:
        subs.extend(extract_substrokes(img, n_points=cfg.n_points,
                                       n_max=cfg.n_max,
                                       canvas_size=cfg.canvas_size))
    if len(subs) < k:
        raise InsufficientData(
            f"{len(subs)} sub-strokes from {len(imgs)} glyphs cannot fit k={k}")
    lib = fit_primitive_library(subs, k, seed, config=cfg)
    programs = [deterministic_program(img, lib, fast_mode=True) for img in imgs]
    count, trans = fit_count_models(programs, lib.n_primitives,
                                    kappa_max=cfg.kappa_max, n_max=cfg.n_max)
    return lib.with_models(count, trans)


def _shrink_to_fit(img: np.ndarray, max_h: int, max_w: int) -> np.ndarray:
    h, w = img.shape
    if h <= max_h and w <= max_w:
        return img
    f = min(max_h / h, max_w / w)
    nh, nw = max(1, int(h * f)), max(1, int(w * f))
    im = Image.fromarray(img.astype(np.float32), mode="F")
    return np.clip(np.asarray(im.resize((nw, nh), Image.BILINEAR),
                              dtype=np.float64), 0.0, 1.0)


def build_bpl_pool(seeds_by_class: dict[str, np.ndarray], lib: PrimitiveLibrary,
                   cfg: GenerationConfig, per_class: int,
                   seed: int) -> dict[str, list[SymbolInstance]]:
    """Generate per_class one-shot exemplars for every class seed glyph."""
    pool: dict[str, list[SymbolInstance]] = {}
    for label in sorted(seeds_by_class):
        ps = parse_glyph(seeds_by_class[label], lib,
                         rng=child_rng(seed, "bpl-parse", label), K_max=cfg.K)
        if cfg.fast_mode:
            programs = list(ps.programs)
        else:
            programs = [parse_to_program(p, lib, fast_mode=False)
                        for p in ps.parses]
        instances = []
        for i in range(per_class):
            token_seed = child_seed(seed, "bpl", label, i)
            img, parse_idx = draw_exemplar(
                programs, ps.weights, lib, cfg, np.random.default_rng(token_seed))
            instances.append(SymbolInstance(
                image=crop_to_ink(img),
                label=label, source=BPL,
                provenance={"seed_glyph": label, "parse_index": parse_idx,
                            "token_seed": token_seed}))
        pool[label] = instances
    return pool


def build_aug_pool(crops_by_class: dict[str, list[np.ndarray]],
                   params: AugmentParams, per_class: int, seed: int,
                   max_height: int = 105) -> dict[str, list[SymbolInstance]]:
    """Augment real crops into per_class instances per class."""
    pool: dict[str, list[SymbolInstance]] = {}
    for label in sorted(crops_by_class):
        crops = crops_by_class[label]
        if not crops:
            raise MissingClass(f"class {label!r} has no real crops")
        instances = []
        for i in range(per_class):
            rng = child_rng(seed, "aug", label, i)
            src = int(rng.integers(len(crops)))
            img, sampled = augment_with_params(crops[src], params, rng)
            img = _shrink_to_fit(crop_to_ink(img), max_height, max_height)
            instances.append(SymbolInstance(
                image=img, label=label, source=REAL_AUG,
                provenance={"seed_glyph": f"{label}/{src}",
                            "augment_params": sampled}))
        pool[label] = instances
    return pool


def demo_pools(seed: int, per_class: int = 20, lib_k: int = 6,
               generation: GenerationConfig | None = None,
               augment_params: AugmentParams | None = None,
               canvas_size: int = 105):
    """Pools + library + alphabet for the procedural demo classes.

    Returns (pools, alphabet_labels, library, seed_glyphs). The same seed
    always produces the same pools.
    """
    from .demo import demo_alphabet

    glyphs = demo_alphabet(canvas_size)
    cfg = FitConfig(canvas_size=canvas_size)
    lib = fit_library_from_glyphs(glyphs.values(), lib_k,
                                  child_seed(seed, "lib"), config=cfg)
    gen_cfg = generation or GenerationConfig(canvas_size=canvas_size)
    aug = augment_params or AugmentParams()
    pools = {
        BPL: build_bpl_pool(glyphs, lib, gen_cfg, per_class,
                            child_seed(seed, "bpl-pool")),
        REAL_AUG: build_aug_pool({k: [v] for k, v in glyphs.items()}, aug,
                                 per_class, child_seed(seed, "aug-pool"),
                                 max_height=canvas_size),
    }
    return pools, sorted(glyphs), lib, glyphs
