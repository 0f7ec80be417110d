"""Command-line surface: fit, parse, gen, augment, compose, mix, eval, sweep.

Every sampling command requires --seed; identical invocations produce
byte-identical outputs. Exit codes: 0 ok, 2 config error, 3 data error,
4 runtime error. Dataset commands write a manifest.json whose recipe is
enough to regenerate the outputs via `glyphgen regen`.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .augment import AugmentParams, augment
from .compose import (
    BPL,
    REAL_AUG,
    MixPolicy,
    build_dataset,
    build_pure_dataset,
    uniform_text_source,
)
from .config import (
    PipelineConfig,
    config_from_dict,
    config_to_jsonable,
    dataclass_from_dict,
    load_config,
)
from .errors import ConfigError, DataError, GlyphgenError
from .evaluation import levenshtein_counts, sweep_mix
from .generator import GenerationConfig, contact_sheet, generate_exemplars, preset
from .images import binarize, load_glyph
from .manifest import (
    encode_png,
    file_records,
    file_sha256,
    load_manifest,
    read_transcriptions,
    save_dataset,
    save_images,
    verify_dataset,
    write_manifest,
)
from .parsing import extract_substrokes, parse_glyph
from .pools import (
    build_aug_pool,
    build_bpl_pool,
    demo_pools,
    fit_library_from_glyphs,
    ingest,
)
from .seeding import child_rng, child_seed
from .stroke_model import load_library, save_library


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------


def _resolve_config(args) -> PipelineConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else PipelineConfig()
    return cfg


def _checked_input(path: str, expected_sha: str | None = None) -> Path:
    p = Path(path)
    if not p.exists():
        raise DataError(f"input image not found: {p}")
    if expected_sha is not None and file_sha256(p) != expected_sha:
        raise DataError(f"input image changed since the manifest was written: {p}")
    return p


def _self_fit_library(img: np.ndarray, cfg: PipelineConfig, seed: int,
                      k: int | None = None):
    """One-shot library fitted from the single input glyph's own sub-strokes."""
    subs = extract_substrokes(img, n_points=cfg.fit.n_points,
                              n_max=cfg.fit.n_max,
                              canvas_size=cfg.fit.canvas_size)
    k = max(1, min(cfg.library_k, len(subs))) if k is None else k
    lib = fit_library_from_glyphs([img], k, child_seed(seed, "lib"),
                                  config=cfg.fit)
    return lib, k


def _load_pools(cfg: PipelineConfig, seed: int, data_dir: str | None):
    """Build (pools, alphabet, recipe) from --data crops or the demo classes."""
    if data_dir is None:
        pools, alphabet, _lib, _glyphs = demo_pools(
            seed, per_class=cfg.pool_size, lib_k=cfg.library_k,
            generation=cfg.generation, augment_params=cfg.augment,
            canvas_size=cfg.fit.canvas_size)
        recipe = {"kind": "demo", "seed": seed, "per_class": cfg.pool_size,
                  "lib_k": cfg.library_k, "canvas_size": cfg.fit.canvas_size}
        return pools, alphabet, recipe
    crops = ingest(data_dir, cfg.scenario, seed=child_seed(seed, "ingest"),
                   canvas_size=cfg.fit.canvas_size)
    glyphs = [img for imgs in crops.values() for img in imgs]
    lib = fit_library_from_glyphs(glyphs, cfg.library_k,
                                  child_seed(seed, "lib"), config=cfg.fit)
    seeds_by_class = {label: imgs[0] for label, imgs in crops.items()}
    pools = {
        BPL: build_bpl_pool(seeds_by_class, lib, cfg.generation,
                            cfg.pool_size, child_seed(seed, "bpl-pool")),
        REAL_AUG: build_aug_pool(crops, cfg.augment, cfg.pool_size,
                                 child_seed(seed, "aug-pool"),
                                 max_height=cfg.compose.baseline_height),
    }
    recipe = {"kind": "data", "data_dir": str(Path(data_dir).resolve()),
              "scenario": cfg.scenario, "seed": seed,
              "pool_size": cfg.pool_size, "library_k": cfg.library_k}
    return pools, sorted(crops), recipe


def _pools_from_recipe(recipe: dict, cfg: PipelineConfig):
    if recipe["kind"] == "demo":
        pools, alphabet, _lib, _glyphs = demo_pools(
            recipe["seed"], per_class=recipe["per_class"],
            lib_k=recipe["lib_k"], generation=cfg.generation,
            augment_params=cfg.augment, canvas_size=recipe["canvas_size"])
        return pools, alphabet
    data_dir = recipe["data_dir"]
    if not Path(data_dir).is_dir():
        raise DataError(f"original crop directory is gone: {data_dir}")
    pools, alphabet, _ = _load_pools(cfg, recipe["seed"], data_dir)
    return pools, alphabet


def _line_summary(lines) -> dict:
    pure_bpl = sum(1 for ln in lines if all(s == BPL for s in ln.sources))
    pure_aug = sum(1 for ln in lines if all(s == REAL_AUG for s in ln.sources))
    symbols = sum(len(ln.sources) for ln in lines)
    bpl_symbols = sum(sum(1 for s in ln.sources if s == BPL) for ln in lines)
    return {
        "num_lines": len(lines),
        "lines_pure_bpl": pure_bpl,
        "lines_pure_real_aug": pure_aug,
        "lines_mixed": len(lines) - pure_bpl - pure_aug,
        "num_symbols": symbols,
        "symbols_bpl": bpl_symbols,
        "symbols_real_aug": symbols - bpl_symbols,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_fit(args) -> int:
    cfg = _resolve_config(args)
    if args.data:
        crops = ingest(args.data, cfg.scenario,
                       seed=child_seed(args.seed, "ingest"),
                       canvas_size=cfg.fit.canvas_size)
        glyphs = [img for imgs in crops.values() for img in imgs]
    else:
        from .demo import demo_alphabet

        glyphs = list(demo_alphabet(cfg.fit.canvas_size).values())
    k = args.k if args.k is not None else cfg.library_k
    lib = fit_library_from_glyphs(glyphs, k, args.seed, config=cfg.fit)
    save_library(lib, args.out)
    print(f"fitted {lib.n_primitives} primitives from {len(glyphs)} glyphs "
          f"-> {args.out}")
    return 0


def cmd_parse(args) -> int:
    lib = load_library(args.lib)
    img = binarize(load_glyph(_checked_input(args.input)))
    ps = parse_glyph(img, lib, rng=child_rng(args.seed, "parse"),
                     K_max=args.k_max)
    for i, parse in enumerate(ps.parses):
        print(f"parse {i}: {parse.n_strokes} strokes  "
              f"log_prob {parse.log_prob:.3f}  weight {parse.weight:.4f}")
    if args.out:
        payload = {
            "format": 1,
            "source": str(Path(args.input)),
            "parses": [{
                "log_prob": float(p.log_prob),
                "weight": float(p.weight),
                "strokes": [s.tolist() for s in p.strokes],
            } for p in ps.parses],
        }
        Path(args.out).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        print(f"wrote {len(ps.parses)} parses -> {args.out}")
    return 0


def _run_gen(input_path: Path, n: int, seed: int, out_dir: str,
             cfg: PipelineConfig, gen_cfg: GenerationConfig,
             lib_spec: dict, grid: bool) -> dict:
    img = binarize(load_glyph(input_path))
    if "path" in lib_spec:
        lib = load_library(lib_spec["path"])
    else:
        lib, _ = _self_fit_library(img, cfg, seed, k=lib_spec["k"])
    images = generate_exemplars(img, n, lib, gen_cfg, child_rng(seed, "gen"))
    recipe = {
        "command": "gen",
        "input": {"path": str(input_path.resolve()),
                  "sha256": file_sha256(input_path)},
        "n": n, "seed": seed, "lib": lib_spec, "grid": grid,
        "generation": config_to_jsonable(gen_cfg),
    }
    manifest = save_images(out_dir, images, recipe,
                           config_snapshot=config_to_jsonable(cfg),
                           prefix="gen")
    if grid:
        sheet = contact_sheet(images, cols=3)
        (Path(out_dir) / "grid.png").write_bytes(encode_png(sheet))
    return manifest


def cmd_gen(args) -> int:
    cfg = _resolve_config(args)
    gen_cfg = preset(args.preset) if args.preset else cfg.generation
    input_path = _checked_input(args.input)
    if args.lib:
        lib_spec = {"path": str(Path(args.lib).resolve()),
                    "sha256": file_sha256(args.lib)}
    else:
        img = binarize(load_glyph(input_path))
        _, k = _self_fit_library(img, cfg, args.seed)
        lib_spec = {"self_fit": True, "k": k}
    _run_gen(input_path, args.n, args.seed, args.out, cfg, gen_cfg,
             lib_spec, args.grid)
    print(f"generated {args.n} exemplars -> {args.out}")
    return 0


def _run_augment(input_path: Path, n: int, seed: int, out_dir: str,
                 cfg: PipelineConfig, params: AugmentParams) -> dict:
    img = binarize(load_glyph(input_path))
    images = [augment(img, params, child_rng(seed, "augment", i))
              for i in range(n)]
    recipe = {
        "command": "augment",
        "input": {"path": str(input_path.resolve()),
                  "sha256": file_sha256(input_path)},
        "n": n, "seed": seed,
        "params": config_to_jsonable(params),
    }
    return save_images(out_dir, images, recipe,
                       config_snapshot=config_to_jsonable(cfg), prefix="aug")


def cmd_augment(args) -> int:
    cfg = _resolve_config(args)
    _run_augment(_checked_input(args.input), args.n, args.seed, args.out,
                 cfg, cfg.augment)
    print(f"augmented {args.n} variants -> {args.out}")
    return 0


def _run_compose(cfg: PipelineConfig, pools, alphabet, pools_recipe: dict,
                 source: str, num_lines: int, seed: int, out_dir: str) -> dict:
    text = uniform_text_source(alphabet, cfg.compose.length_range)
    lines = build_pure_dataset(pools, source, cfg.compose, num_lines,
                               text, seed)
    recipe = {"command": "compose", "source": source, "num_lines": num_lines,
              "seed": seed, "pools": pools_recipe}
    return save_dataset(out_dir, lines, recipe,
                        config_snapshot=config_to_jsonable(cfg),
                        summary=_line_summary(lines))


def cmd_compose(args) -> int:
    cfg = _resolve_config(args)
    pools, alphabet, pools_recipe = _load_pools(cfg, args.seed, args.data)
    manifest = _run_compose(cfg, pools, alphabet, pools_recipe, args.source,
                            args.lines, args.seed, args.out)
    s = manifest["summary"]
    print(f"composed {s['num_lines']} {args.source} lines "
          f"({s['num_symbols']} symbols) -> {args.out}")
    return 0


def _run_mix(cfg: PipelineConfig, pools, alphabet, pools_recipe: dict,
             mode: str, rho: float, num_lines: int, seed: int,
             out_dir: str) -> dict:
    text = uniform_text_source(alphabet, cfg.compose.length_range)
    lines = build_dataset(pools, MixPolicy(mode=mode, rho=rho), cfg.compose,
                          num_lines, text, seed)
    recipe = {"command": "mix", "mode": mode, "rho": rho,
              "num_lines": num_lines, "seed": seed, "pools": pools_recipe}
    return save_dataset(out_dir, lines, recipe,
                        config_snapshot=config_to_jsonable(cfg),
                        summary=_line_summary(lines))


def cmd_mix(args) -> int:
    cfg = _resolve_config(args)
    mode = args.mode if args.mode is not None else cfg.mix.mode
    rho = args.rho if args.rho is not None else cfg.mix.rho
    pools, alphabet, pools_recipe = _load_pools(cfg, args.seed, args.data)
    manifest = _run_mix(cfg, pools, alphabet, pools_recipe, mode, rho,
                        args.lines, args.seed, args.out)
    s = manifest["summary"]
    print(f"mixed {mode} rho={rho:g}: {s['num_lines']} lines "
          f"(pure BPL {s['lines_pure_bpl']}, pure REAL_AUG "
          f"{s['lines_pure_real_aug']}, mixed {s['lines_mixed']}); "
          f"symbols BPL {s['symbols_bpl']}/{s['num_symbols']} -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    hyps = read_transcriptions(args.hyp)
    refs = read_transcriptions(args.ref)
    if len(hyps) != len(refs):
        raise DataError(
            f"hyp has {len(hyps)} lines but ref has {len(refs)}")
    if not refs:
        raise DataError("reference file is empty")
    s = d = ins = total = 0
    for hyp, ref in zip(hyps, refs):
        c = levenshtein_counts(hyp, ref)
        if c.N == 0:
            raise DataError("reference line with no symbols")
        s, d, ins, total = s + c.S, d + c.D, ins + c.I, total + c.N
    print(f"SER {(s + d + ins) / total:.3f}")
    print(f"substitutions {s}  deletions {d}  insertions {ins}  "
          f"reference symbols {total}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _resolve_config(args)
    try:
        ratios = [float(t) for t in args.ratios.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --ratios value: {exc}") from exc
    if not ratios or any(not 0.0 <= r <= 1.0 for r in ratios):
        raise ConfigError(f"ratios must lie in [0, 1], got {args.ratios!r}")
    pools, alphabet, pools_recipe = _load_pools(cfg, args.seed, args.data)
    text = uniform_text_source(alphabet, cfg.compose.length_range)
    sweep_cfg = dataclasses.replace(cfg.sweep, seed=args.seed)
    rows = sweep_mix(ratios, pools, alphabet, cfg.compose, text, sweep_cfg,
                     out_dir=args.out)
    out = Path(args.out)
    manifest = {
        "format": 1,
        "recipe": {"command": "sweep", "ratios": ratios, "seed": args.seed,
                   "pools": pools_recipe},
        "config": config_to_jsonable(cfg),
        "files": [{"file": name, "sha256": file_sha256(out / name)}
                  for name in ("sweep.tsv", "sweep.png")],
    }
    write_manifest(out, manifest)
    for r in rows:
        print(f"rho {r['rho']:.2f}  SER {r['ser']:.3f}  "
              f"(S {r['S']} D {r['D']} I {r['I']} / N {r['N']})")
    print(f"sweep table and plot -> {args.out}")
    return 0


def cmd_verify(args) -> int:
    problems = verify_dataset(args.dir)
    if problems:
        raise DataError("; ".join(problems))
    print(f"all files match the manifest in {args.dir}")
    return 0


def cmd_regen(args) -> int:
    src_dir = Path(args.dir)
    manifest = load_manifest(src_dir)
    recipe = manifest.get("recipe") or {}
    command = recipe.get("command")
    out_dir = args.out if args.out else str(src_dir)
    cfg = (config_from_dict(manifest["config"])
           if manifest.get("config") else PipelineConfig())
    if command == "gen":
        gen_cfg = dataclass_from_dict(GenerationConfig, recipe["generation"],
                                      "generation")
        lib_spec = recipe["lib"]
        if "path" in lib_spec:
            _checked_input(lib_spec["path"], lib_spec["sha256"])
        input_path = _checked_input(recipe["input"]["path"],
                                    recipe["input"]["sha256"])
        new = _run_gen(input_path, recipe["n"], recipe["seed"], out_dir,
                       cfg, gen_cfg, lib_spec, recipe.get("grid", False))
    elif command == "augment":
        params = dataclass_from_dict(AugmentParams, recipe["params"], "params")
        input_path = _checked_input(recipe["input"]["path"],
                                    recipe["input"]["sha256"])
        new = _run_augment(input_path, recipe["n"], recipe["seed"], out_dir,
                           cfg, params)
    elif command in ("compose", "mix"):
        pools, alphabet = _pools_from_recipe(recipe["pools"], cfg)
        if command == "compose":
            new = _run_compose(cfg, pools, alphabet, recipe["pools"],
                               recipe["source"], recipe["num_lines"],
                               recipe["seed"], out_dir)
        else:
            new = _run_mix(cfg, pools, alphabet, recipe["pools"],
                           recipe["mode"], recipe["rho"],
                           recipe["num_lines"], recipe["seed"], out_dir)
    else:
        raise DataError(f"manifest recipe is not regenerable: {command!r}")
    old_files = dict(file_records(manifest))
    new_files = dict(file_records(new))
    bad = sorted(name for name in old_files
                 if new_files.get(name) != old_files[name])
    bad += sorted(name for name in new_files if name not in old_files)
    if bad:
        raise DataError(f"regeneration differs from manifest: {', '.join(bad)}")
    print(f"regenerated {len(new_files)} files -> {out_dir}; checksums match")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glyphgen",
        description="One-shot glyph generation, line composition and "
                    "prototype-decoder evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=fn)
        p.add_argument("--config", help="JSON pipeline config file")
        return p

    p = add("fit", cmd_fit, "fit a primitive library from glyph crops")
    p.add_argument("--data", help="directory of <class>/<name>.png crops "
                                  "(default: built-in demo classes)")
    p.add_argument("--k", type=int, help="number of primitives")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output library JSON")

    p = add("parse", cmd_parse, "parse one glyph image into stroke programs")
    p.add_argument("--input", required=True)
    p.add_argument("--lib", required=True, help="library JSON from fit")
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write parses as JSON")

    p = add("gen", cmd_gen, "generate new exemplars from one glyph image")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lib", help="library JSON (default: fit from the input)")
    p.add_argument("--preset", choices=["zero", "subtle", "default", "wild"],
                   help="token noise preset (default: config generation)")
    p.add_argument("--grid", action="store_true",
                   help="also write a contact sheet grid.png")

    p = add("augment", cmd_augment, "classic augmentation of one glyph image")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = add("compose", cmd_compose, "compose text lines from one source pool")
    p.add_argument("--source", choices=[BPL, REAL_AUG], default=BPL)
    p.add_argument("--lines", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--data", help="real crop directory (default: demo classes)")

    p = add("mix", cmd_mix, "compose a mixed BPL/augmented-real dataset")
    p.add_argument("--mode", choices=["homl", "hetl"])
    p.add_argument("--rho", type=float, help="BPL fraction in [0, 1]")
    p.add_argument("--lines", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--data", help="real crop directory (default: demo classes)")

    p = add("eval", cmd_eval, "symbol error rate between two transcription files")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)

    p = add("sweep", cmd_sweep, "SER vs mixing ratio sweep with table and plot")
    p.add_argument("--ratios", default="0,0.25,0.5,0.75,1.0")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--data", help="real crop directory (default: demo classes)")

    p = add("verify", cmd_verify, "check dataset files against their manifest")
    p.add_argument("--dir", required=True)

    p = add("regen", cmd_regen, "regenerate a dataset from its manifest recipe")
    p.add_argument("--dir", required=True, help="directory with manifest.json")
    p.add_argument("--out", help="write elsewhere (default: in place)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except GlyphgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # pragma: no cover - last-resort runtime guard
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
