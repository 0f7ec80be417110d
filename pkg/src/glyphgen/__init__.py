"""One-shot compositional glyph generation for low-resource text recognition.

Parse a single glyph image into a stroke program, sample new exemplars from
it, compose synthetic text lines mixing generated and augmented-real symbols,
and evaluate with a prototype recognizer under symbol error rate.
"""

from .augment import AugmentParams, augment
from .compose import (
    BPL,
    REAL_AUG,
    ComposePolicy,
    LineSample,
    MixPolicy,
    SymbolInstance,
    build_dataset,
    build_pure_dataset,
    compose_line,
    fixed_text_source,
    uniform_text_source,
)
from .config import PipelineConfig, config_from_dict, load_config
from .errors import ConfigError, DataError, GlyphgenError
from .evaluation import (
    EditCounts,
    PrototypeModel,
    SweepConfig,
    decode_line,
    fit_prototypes,
    random_baseline_ser,
    ser,
    ser_corpus,
    sweep_mix,
)
from .generator import (
    GenerationConfig,
    InkModel,
    TokenParams,
    generate_exemplars,
    identity_token,
    preset,
    render,
    sample_token,
)
from .images import binarize, fit_canvas, load_glyph, save_glyph
from .parsing import (
    Parse,
    ParseSet,
    parse_glyph,
    parse_to_program,
    random_walk_parses,
    skeletonize,
)
from .pools import build_aug_pool, build_bpl_pool, demo_pools, ingest
from .seeding import child_rng, child_seed
from .skeleton import SkeletonGraph, build_skeleton_graph, thin
from .stroke_model import (
    FitConfig,
    Primitive,
    PrimitiveLibrary,
    SymbolProgram,
    fit_primitive_library,
    load_library,
    sample_program,
    save_library,
    score_program,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentParams",
    "BPL",
    "ComposePolicy",
    "ConfigError",
    "DataError",
    "EditCounts",
    "FitConfig",
    "GenerationConfig",
    "GlyphgenError",
    "InkModel",
    "LineSample",
    "MixPolicy",
    "Parse",
    "ParseSet",
    "PipelineConfig",
    "Primitive",
    "PrimitiveLibrary",
    "PrototypeModel",
    "REAL_AUG",
    "SkeletonGraph",
    "SweepConfig",
    "SymbolInstance",
    "SymbolProgram",
    "TokenParams",
    "augment",
    "binarize",
    "build_aug_pool",
    "build_bpl_pool",
    "build_dataset",
    "build_pure_dataset",
    "build_skeleton_graph",
    "child_rng",
    "child_seed",
    "compose_line",
    "config_from_dict",
    "decode_line",
    "demo_pools",
    "fit_canvas",
    "fit_primitive_library",
    "fit_prototypes",
    "fixed_text_source",
    "generate_exemplars",
    "identity_token",
    "ingest",
    "load_config",
    "load_glyph",
    "load_library",
    "parse_glyph",
    "parse_to_program",
    "preset",
    "random_baseline_ser",
    "random_walk_parses",
    "render",
    "sample_program",
    "sample_token",
    "save_glyph",
    "save_library",
    "score_program",
    "ser",
    "ser_corpus",
    "skeletonize",
    "sweep_mix",
    "thin",
]
