"""Symbol error rate, a prototype-matching line decoder, and the mix sweep.

SER = (substitutions + deletions + insertions) / reference length, from a
unit-cost Levenshtein alignment. The decoder slides per-class prototype
templates over a line (normalized cross-correlation on dilated ink, best
over prototypes and small vertical shifts) and picks a non-overlapping set
of detections by dynamic programming. sweep_mix retrains the decoder at
several BPL/real mixing ratios and reports SER per ratio with a plot.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

from .compose import (
    BPL,
    ComposePolicy,
    LineSample,
    MixPolicy,
    build_dataset,
    build_pure_dataset,
)
from .errors import (
    EmptyCorpus,
    EmptyReference,
    LineTooNarrow,
    MissingClass,
)
from .images import dilate
from .seeding import child_seed


# ---------------------------------------------------------------------------
# Edit distance and SER
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EditCounts:
    S: int
    D: int
    I: int
    N: int

    @property
    def total(self) -> int:
        return self.S + self.D + self.I

    @property
    def rate(self) -> float:
        return self.total / self.N


def levenshtein_counts(hyp, ref) -> EditCounts:
    """Unit-cost alignment counts; S + D + I equals the edit distance."""
    h, r = list(hyp), list(ref)
    n, m = len(h), len(r)
    dist = np.zeros((m + 1, n + 1), dtype=np.int64)
    dist[:, 0] = np.arange(m + 1)
    dist[0, :] = np.arange(n + 1)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            sub = dist[i - 1, j - 1] + (r[i - 1] != h[j - 1])
            dist[i, j] = min(sub, dist[i - 1, j] + 1, dist[i, j - 1] + 1)
    s = d = ins = 0
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dist[i, j] == dist[i - 1, j - 1] + (r[i - 1] != h[j - 1]):
            s += int(r[i - 1] != h[j - 1])
            i, j = i - 1, j - 1
        elif i > 0 and dist[i, j] == dist[i - 1, j] + 1:
            d += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return EditCounts(S=s, D=d, I=ins, N=m)


def ser(hyp, ref) -> tuple[float, EditCounts]:
    """Symbol error rate of one hypothesis against its reference."""
    if len(ref) == 0:
        raise EmptyReference("reference transcription is empty")
    counts = levenshtein_counts(hyp, ref)
    return counts.rate, counts


def ser_corpus(pairs) -> float:
    """Micro-averaged SER: total edits over total reference symbols."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyCorpus("no (hypothesis, reference) pairs")
    edits = 0
    total = 0
    for hyp, ref in pairs:
        _, c = ser(hyp, ref)
        edits += c.total
        total += c.N
    return edits / total


# ---------------------------------------------------------------------------
# Prototype decoder
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class PrototypeModel:
    """k-shot templates per class plus matching hyperparameters."""

    prototypes: dict[str, list[np.ndarray]]
    stride: int = 1
    threshold: float = 0.35
    vertical_shift: int = 3
    dilation_radius: int = 1

    def __post_init__(self):
        for label, protos in self.prototypes.items():
            if not protos:
                raise MissingClass(f"class {label!r} has no prototypes")

    @property
    def shots(self) -> int:
        return max(len(p) for p in self.prototypes.values())

    @property
    def min_width(self) -> int:
        return min(p.shape[1] for ps in self.prototypes.values() for p in ps)


def fit_prototypes(lines: list[LineSample], k: int,
                   alphabet: list[str] | None = None,
                   **model_kwargs) -> PrototypeModel:
    """Crop up to k full-height exemplars per class from ground-truth boxes."""
    protos: dict[str, list[np.ndarray]] = {}
    for line in lines:
        for label, (x0, _y0, x1, _y1) in zip(line.transcription, line.boxes):
            got = protos.setdefault(label, [])
            if len(got) < k:
                got.append(line.image[:, x0:x1].copy())
    if alphabet is not None:
        for label in alphabet:
            if label not in protos:
                raise MissingClass(f"no training crops for class {label!r}")
    return PrototypeModel(prototypes=protos, **model_kwargs)


def normxcorr2(template: np.ndarray, image: np.ndarray) -> np.ndarray:
    """Normalized cross-correlation, valid mode, in [-1, 1]."""
    t = template - template.mean()
    tss = float((t * t).sum())
    th, tw = t.shape
    if tss <= 1e-12 or image.shape[0] < th or image.shape[1] < tw:
        return np.zeros((max(image.shape[0] - th + 1, 0),
                         max(image.shape[1] - tw + 1, 0)))
    num = fftconvolve(image, t[::-1, ::-1], mode="valid")
    box = np.ones((th, tw))
    s1 = fftconvolve(image, box, mode="valid")
    s2 = fftconvolve(image * image, box, mode="valid")
    var = np.maximum(s2 - s1 * s1 / (th * tw), 0.0)
    denom = np.sqrt(tss * var)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(denom > 1e-9, num / denom, 0.0)
    return np.clip(out, -1.0, 1.0)


def _class_similarity(line_pad: np.ndarray, protos: list[np.ndarray],
                      radius: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Best similarity per x over a class's prototypes and vertical shifts."""
    best = np.full(width, -np.inf)
    best_w = np.zeros(width, dtype=np.int64)
    for p in protos:
        pd = dilate(p, radius)
        curve = normxcorr2(pd, line_pad)
        if curve.size == 0:
            continue
        curve = curve.max(axis=0)     # over vertical shifts
        w = p.shape[1]
        span = len(curve)
        upd = curve > best[:span]
        best[:span][upd] = curve[upd]
        best_w[:span][upd] = w
    return best, best_w


def _local_maxima(curve: np.ndarray, widths: np.ndarray,
                  threshold: float, stride: int) -> list[int]:
    out = []
    n = len(curve)
    x = 0
    while x < n:
        if x % stride == 0 and curve[x] >= threshold:
            r = max(int(widths[x] // 3), 1)
            lo, hi = max(0, x - r), min(n, x + r + 1)
            if x == lo + int(np.argmax(curve[lo:hi])):
                out.append(x)
                x += r
                continue
        x += 1
    return out


def decode_line(line: np.ndarray, model: PrototypeModel) -> list[str]:
    """Transcribe a line by non-overlapping best-match template detections."""
    img = np.asarray(line, dtype=np.float64)
    h, w = img.shape
    if w < model.min_width:
        raise LineTooNarrow(f"line width {w} < narrowest prototype {model.min_width}")
    pad = model.vertical_shift
    work = np.pad(dilate(img, model.dilation_radius), ((pad, pad), (0, 0)))
    detections = []     # (start, end, margin, label)
    for label in sorted(model.prototypes):
        best, best_w = _class_similarity(
            work, model.prototypes[label], model.dilation_radius, w)
        for x in _local_maxima(best, best_w, model.threshold, model.stride):
            detections.append((x, x + int(best_w[x]),
                               float(best[x]) - model.threshold, label))
    if not detections:
        return []
    # Weighted interval scheduling: maximize total above-threshold similarity.
    detections.sort(key=lambda t: (t[1], t[0]))
    n = len(detections)
    compat = []          # last detection index ending before each one starts
    for i in range(n):
        j = i - 1
        while j >= 0 and detections[j][1] > detections[i][0]:
            j -= 1
        compat.append(j)
    best = [0.0] * (n + 1)
    for i in range(n):
        best[i + 1] = max(best[i], detections[i][2] + best[compat[i] + 1])
    chosen = []
    i = n - 1
    while i >= 0:
        if best[i + 1] > best[i]:
            chosen.append(detections[i])
            i = compat[i]
        else:
            i -= 1
    chosen.sort(key=lambda t: t[0])
    return [label for _s, _e, _m, label in chosen]


def random_baseline_ser(refs: list[list[str]], alphabet: list[str],
                        rng: np.random.Generator) -> float:
    """SER of a uniform-random decoder emitting matched-length hypotheses."""
    pairs = []
    letters = list(alphabet)
    for ref in refs:
        hyp = [letters[int(rng.integers(len(letters)))] for _ in ref]
        pairs.append((hyp, ref))
    return ser_corpus(pairs)


# ---------------------------------------------------------------------------
# Mixing-ratio sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    """Everything one sweep run needs besides the pools."""

    num_train_lines: int = 30
    num_test_lines: int = 20
    k_shots: int = 3
    test_source: str = BPL
    threshold: float = 0.35
    seed: int = 0


def sweep_mix(ratios: list[float], pools, alphabet: list[str],
              policy: ComposePolicy, text_source, cfg: SweepConfig,
              out_dir: str | Path | None = None) -> list[dict]:
    """SER vs BPL fraction rho: one homogeneous retrain + decode per ratio.

    The held-out test set is built once from a separate child seed and is
    identical across ratios. Returns one row per rho and, when out_dir is
    given, writes sweep.tsv and sweep.png there.
    """
    test = build_pure_dataset(pools, cfg.test_source, policy,
                              cfg.num_test_lines, text_source,
                              child_seed(cfg.seed, "sweep-test"))
    train_seed = child_seed(cfg.seed, "sweep-train")
    rows = []
    for rho in ratios:
        train = build_dataset(pools, MixPolicy(mode="homl", rho=float(rho)),
                              policy, cfg.num_train_lines, text_source,
                              train_seed)
        model = fit_prototypes(train, cfg.k_shots, alphabet=alphabet,
                               threshold=cfg.threshold)
        s = d = ins = total = 0
        for line in test:
            hyp = decode_line(line.image, model)
            c = levenshtein_counts(hyp, line.transcription)
            s, d, ins, total = s + c.S, d + c.D, ins + c.I, total + c.N
        rows.append({"rho": float(rho), "ser": (s + d + ins) / total,
                     "S": s, "D": d, "I": ins, "N": total})
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_sweep_table(rows, out / "sweep.tsv")
        write_sweep_plot(rows, out / "sweep.png")
    return rows


def write_sweep_table(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["rho", "ser", "S", "D", "I", "N"])
        for r in rows:
            writer.writerow([f"{r['rho']:.4f}", f"{r['ser']:.6f}",
                             r["S"], r["D"], r["I"], r["N"]])


def write_sweep_plot(rows: list[dict], path: str | Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rho = [r["rho"] for r in rows]
    vals = [r["ser"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(rho, vals, marker="o")
    ax.set_xlabel("BPL fraction (rho)")
    ax.set_ylabel("SER")
    ax.set_title("SER vs generated/real mixing ratio")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
