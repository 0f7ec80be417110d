"""Synthetic text-line composition and dataset mixing.

Lines are built by horizontal concatenation of symbol images on a shared
bottom baseline, with sampled gaps (negative gaps overlap ink, union by
max), per-symbol vertical jitter, and optional salt speckle. Datasets mix
two symbol sources — "BPL" (generated) and "REAL_AUG" (augmented real
crops) — either per line (homogeneous) or per symbol (heterogeneous).

Every line is derived from child seed (master, "line", index), so adding
lines never changes earlier ones, and a homogeneous build at rho 1 or 0 is
byte-identical to the corresponding single-source build.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, EmptyLine, PoolExhausted
from .seeding import child_rng

BPL = "BPL"
REAL_AUG = "REAL_AUG"


@dataclass(eq=False)
class SymbolInstance:
    """One placeable symbol image with its class and origin."""

    image: np.ndarray
    label: str
    source: str                      # BPL | REAL_AUG | REAL
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if float(np.asarray(self.image).sum()) <= 0:
            raise DataError(f"symbol instance of class {self.label!r} has no ink")

    @property
    def width(self) -> int:
        return self.image.shape[1]

    @property
    def height(self) -> int:
        return self.image.shape[0]


@dataclass(frozen=True)
class ComposePolicy:
    """Placement and noise parameters for line composition."""

    gap: tuple[int, int] = (-4, 8)            # negative = horizontal overlap
    vertical_jitter: tuple[int, int] = (-3, 3)
    baseline_height: int = 105
    background_noise: float = 0.005           # salt speckle probability
    length_range: tuple[int, int] = (3, 8)    # symbols per line, uniform

    def __post_init__(self):
        if self.gap[0] > self.gap[1] or self.vertical_jitter[0] > self.vertical_jitter[1]:
            raise DataError("policy ranges are reversed")
        if not 0 <= self.background_noise < 1:
            raise DataError("background_noise must be in [0, 1)")
        if self.length_range[0] < 1 or self.length_range[0] > self.length_range[1]:
            raise DataError("length_range must be a positive ordered range")


@dataclass(frozen=True)
class MixPolicy:
    """How the two symbol sources are mixed into a dataset."""

    mode: str = "homl"              # homl (per line) | hetl (per symbol)
    rho: float = 0.5                # BPL fraction

    def __post_init__(self):
        if self.mode not in ("homl", "hetl"):
            raise DataError(f"unknown mix mode {self.mode!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise DataError("rho must lie in [0, 1]")


@dataclass(eq=False)
class LineSample:
    """A composed line image with aligned ground truth."""

    image: np.ndarray
    transcription: list[str]
    boxes: list[tuple[int, int, int, int]]    # (x0, y0, x1, y1), exclusive ends
    sources: list[str]
    provenance: list[dict] = field(default_factory=list)

    @property
    def width(self) -> int:
        return self.image.shape[1]


def compose_line(symbols: list[SymbolInstance], policy: ComposePolicy,
                 rng: np.random.Generator) -> LineSample:
    """Place symbols left to right on a shared baseline."""
    if not symbols:
        raise EmptyLine("cannot compose a line from zero symbols")
    height = policy.baseline_height
    for s in symbols:
        if s.height > height:
            raise DataError(
                f"symbol of class {s.label!r} is taller ({s.height}) than the "
                f"baseline canvas ({height})")
    gaps = []
    for a, b in zip(symbols[:-1], symbols[1:]):
        g = int(rng.integers(policy.gap[0], policy.gap[1] + 1))
        # Overlap may never swallow a whole symbol.
        g = max(g, -(min(a.width, b.width) - 1))
        gaps.append(g)
    jit = [int(rng.integers(policy.vertical_jitter[0], policy.vertical_jitter[1] + 1))
           for _ in symbols]
    width = sum(s.width for s in symbols) + sum(gaps)
    out = np.zeros((height, width))
    boxes = []
    x = 0
    for k, s in enumerate(symbols):
        y0 = height - s.height + jit[k]
        y0 = min(max(y0, 0), height - s.height)
        out[y0:y0 + s.height, x:x + s.width] = np.maximum(
            out[y0:y0 + s.height, x:x + s.width], s.image)
        boxes.append((x, y0, x + s.width, y0 + s.height))
        x += s.width + (gaps[k] if k < len(gaps) else 0)
    if policy.background_noise > 0:
        salt = rng.uniform(size=out.shape) < policy.background_noise
        out = np.maximum(out, salt.astype(np.float64))
    return LineSample(
        image=out,
        transcription=[s.label for s in symbols],
        boxes=boxes,
        sources=[s.source for s in symbols],
        provenance=[dict(s.provenance, label=s.label, source=s.source)
                    for s in symbols])


# ---------------------------------------------------------------------------
# Dataset assembly
# ---------------------------------------------------------------------------

Pools = dict  # source -> {label -> list[SymbolInstance]}


def uniform_text_source(alphabet: list[str], length_range: tuple[int, int]):
    """Labels drawn i.i.d. uniform; length uniform over the range."""
    labels = list(alphabet)

    def draw(rng: np.random.Generator, _index: int) -> list[str]:
        n = int(rng.integers(length_range[0], length_range[1] + 1))
        return [labels[int(rng.integers(len(labels)))] for _ in range(n)]

    return draw


def fixed_text_source(lines: list[list[str]]):
    """Cycle through user-supplied transcriptions by line index."""
    if not lines:
        raise DataError("no transcriptions supplied")

    def draw(_rng: np.random.Generator, index: int) -> list[str]:
        return list(lines[index % len(lines)])

    return draw


def _pick(pools: Pools, source: str, label: str,
          rng: np.random.Generator) -> SymbolInstance:
    by_label = pools.get(source)
    if not by_label or label not in by_label or not by_label[label]:
        raise PoolExhausted(f"no {source} instances for class {label!r}")
    pool = by_label[label]
    return pool[int(rng.integers(len(pool)))]


def _compose_indexed_line(pools: Pools, line_source, policy: ComposePolicy,
                          text_source, seed: int, index: int) -> LineSample:
    """Compose line `index`; line_source(label_index, rng) picks the pool.

    The rng stream is: labels first, then one instance index per symbol, then
    composition draws — identical across builds that share (seed, index).
    """
    rng = child_rng(seed, "line", index)
    labels = text_source(rng, index)
    symbols = [
        _pick(pools, line_source(k, rng), label, rng)
        for k, label in enumerate(labels)
    ]
    return compose_line(symbols, policy, rng)


def build_pure_dataset(pools: Pools, source: str, policy: ComposePolicy,
                       num_lines: int, text_source, seed: int) -> list[LineSample]:
    """A dataset drawn from a single symbol source (pure BPLL or pure DAL)."""
    return [
        _compose_indexed_line(pools, lambda _k, _rng: source, policy,
                              text_source, seed, i)
        for i in range(num_lines)
    ]


def build_dataset(pools: Pools, mix: MixPolicy, policy: ComposePolicy,
                  num_lines: int, text_source, seed: int) -> list[LineSample]:
    """Mixed dataset: homogeneous (per line) or heterogeneous (per symbol).

    Homogeneous: exactly round(rho * num_lines) lines are drawn purely from
    the BPL pools, the rest purely from REAL_AUG; no line mixes sources.
    Heterogeneous: each symbol's source is an independent Bernoulli(rho).
    """
    lines = []
    if mix.mode == "homl":
        n_bpl = int(round(mix.rho * num_lines))
        order = child_rng(seed, "homl-assign").permutation(num_lines)
        bpl_lines = set(int(i) for i in order[:n_bpl])
        for i in range(num_lines):
            src = BPL if i in bpl_lines else REAL_AUG
            lines.append(_compose_indexed_line(
                pools, lambda _k, _rng, s=src: s, policy, text_source, seed, i))
    else:
        def bernoulli_source(_k, rng, rho=mix.rho):
            return BPL if float(rng.uniform()) < rho else REAL_AUG
        for i in range(num_lines):
            lines.append(_compose_indexed_line(
                pools, bernoulli_source, policy, text_source, seed, i))
    return lines
