"""Random-walk parsing of glyph skeletons into ranked stroke programs.

A parse partitions the skeleton's edges into directed strokes, the way a
pen might have drawn them. Walks restart until enough distinct parses are
found (or the walk budget runs out), each parse is converted to a program
and scored under the library, and the survivors are ranked by descending
log probability with softmax weights.

Parses are kept in canonical form: every stroke runs from its
lexicographically smaller endpoint (top-left first, comparing (y, x)) and
strokes are sorted by that key, so the same decomposition found twice
deduplicates regardless of pen direction or stroke order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyGlyph
from .geometry import cumulative_arclength
from .images import binarize, fit_canvas
from .skeleton import SkeletonGraph, build_skeleton_graph, thin
from .stroke_model import (
    Part,
    PrimitiveLibrary,
    Relation,
    SubStroke,
    SymbolProgram,
    normalize_substroke,
    primitive_logdensities,
    score_program,
)

DEFAULT_K_MAX = 10
DEFAULT_WALK_BUDGET = 200
DEFAULT_P_CONTINUE = 0.85
DEFAULT_TEMPERATURE = 0.35
SNAP_RADIUS = 2.0
SPLIT_ANGLE = 0.8           # radians; turning sharper than this starts a new sub-stroke
MIN_SEGMENT = 5             # pixels; shorter runs never split


@dataclass(eq=False)
class Parse:
    """One directed decomposition of a skeleton into strokes."""

    strokes: list[np.ndarray]           # each (L, 2) float (x, y), canonical order
    edge_ids: list[list[int]]           # skeleton edges traversed per stroke
    log_prob: float = float("nan")
    weight: float = float("nan")

    @property
    def n_strokes(self) -> int:
        return len(self.strokes)


@dataclass(eq=False)
class ParseSet:
    """Parses of one glyph, sorted by descending log probability."""

    parses: list[Parse]
    programs: list[SymbolProgram]
    source_shape: tuple[int, int]

    def __len__(self) -> int:
        return len(self.parses)

    @property
    def log_probs(self) -> np.ndarray:
        return np.array([p.log_prob for p in self.parses])

    @property
    def weights(self) -> np.ndarray:
        return np.array([p.weight for p in self.parses])


# ---------------------------------------------------------------------------
# Walking
# ---------------------------------------------------------------------------


def _adjacency(graph: SkeletonGraph) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {n.id: [] for n in graph.nodes}
    for e in graph.edges:
        adj[e.u].append(e.id)
        if e.v != e.u:
            adj[e.v].append(e.id)
    return adj


def _oriented(edge, reverse: bool) -> np.ndarray:
    pts = edge.pixels.astype(np.float64)
    return pts[::-1] if reverse else pts


def _direction(pts: np.ndarray, from_end: bool) -> np.ndarray:
    step = min(3, len(pts) - 1)
    if step == 0:
        return np.zeros(2)
    d = pts[-1] - pts[-1 - step] if from_end else pts[step] - pts[0]
    n = np.linalg.norm(d)
    return d / n if n > 0 else np.zeros(2)


def _turn_angle(a: np.ndarray, b: np.ndarray) -> float:
    if np.linalg.norm(a) == 0 or np.linalg.norm(b) == 0:
        return 0.0
    cos = float(np.clip(np.dot(a, b), -1.0, 1.0))
    return math.acos(cos)


def _candidates(graph, adj, unused, node_id):
    out = []
    for eid in sorted(adj[node_id]):
        if eid not in unused:
            continue
        e = graph.edges[eid]
        if e.u == node_id:
            out.append((eid, False))
        if e.v == node_id and (e.u != e.v or len(e.pixels) > 1):
            out.append((eid, True))
    return out


def _pick_start(graph, adj, unused, rng) -> int:
    """Prefer nodes with an odd number of free edge slots (pen-stroke ends)."""
    live = []
    for node in graph.nodes:
        slots = 0
        for eid in adj[node.id]:
            if eid in unused:
                slots += 2 if graph.edges[eid].u == graph.edges[eid].v else 1
        if slots:
            live.append((node.id, slots))
    odd = [nid for nid, s in live if s % 2 == 1]
    pool = odd if odd else [nid for nid, _ in live]
    return int(pool[rng.integers(len(pool))])


def _one_walk(graph, adj, rng, p_continue, temperature):
    """Cover every edge once with random directed strokes."""
    unused = set(e.id for e in graph.edges)
    strokes = []
    while unused:
        node = _pick_start(graph, adj, unused, rng)
        pieces: list[np.ndarray] = []
        eids: list[int] = []
        in_dir = None
        while True:
            cands = _candidates(graph, adj, unused, node)
            if not cands:
                break
            if eids and float(rng.uniform()) >= p_continue:
                break
            if in_dir is None:
                idx = int(rng.integers(len(cands)))
            else:
                angles = np.array([
                    _turn_angle(in_dir, _direction(_oriented(graph.edges[e], r), False))
                    for e, r in cands
                ])
                # Shift by the min angle: softmax is shift-invariant and
                # this keeps the weights finite at tiny temperatures.
                w = np.exp(-(angles - angles.min()) / temperature)
                idx = int(rng.choice(len(cands), p=w / w.sum()))
            eid, rev = cands[idx]
            edge = graph.edges[eid]
            pts = _oriented(edge, rev)
            if pieces and np.array_equal(pieces[-1][-1], pts[0]):
                pts = pts[1:]
            if len(pts):
                pieces.append(pts)
            eids.append(eid)
            unused.discard(eid)
            in_dir = _direction(pieces[-1], True) if len(pieces[-1]) > 1 else in_dir
            node = edge.u if rev else edge.v
        strokes.append((np.concatenate(pieces, axis=0), eids))
    return strokes


def _stroke_key(pts: np.ndarray) -> tuple:
    return tuple((int(round(y)), int(round(x))) for x, y in pts)


def _canonicalize(strokes):
    """Orient strokes top-left first and sort them; returns (key, parse)."""
    canon = []
    for pts, eids in strokes:
        fwd = _stroke_key(pts)
        rev = tuple(reversed(fwd))
        if rev < fwd:
            canon.append((rev, pts[::-1].copy(), list(reversed(eids))))
        else:
            canon.append((fwd, pts.copy(), list(eids)))
    canon.sort(key=lambda t: t[0])
    key = tuple(t[0] for t in canon)
    parse = Parse(strokes=[t[1] for t in canon], edge_ids=[t[2] for t in canon])
    return key, parse


def random_walk_parses(graph: SkeletonGraph, lib: PrimitiveLibrary,
                       K_max: int = DEFAULT_K_MAX,
                       rng: np.random.Generator | None = None,
                       walk_budget: int = DEFAULT_WALK_BUDGET,
                       p_continue: float = DEFAULT_P_CONTINUE,
                       temperature: float = DEFAULT_TEMPERATURE) -> ParseSet:
    """Collect, dedupe, score, and rank random-walk parses of a skeleton."""
    if not graph.edges:
        raise EmptyGlyph("skeleton graph has no edges")
    rng = rng if rng is not None else np.random.default_rng(0)
    adj = _adjacency(graph)
    found: dict[tuple, Parse] = {}
    for _ in range(walk_budget):
        key, parse = _canonicalize(_one_walk(graph, adj, rng, p_continue, temperature))
        if key not in found:
            found[key] = parse
        if len(found) >= K_max:
            break
    scored = []
    for key, parse in found.items():
        program = parse_to_program(parse, lib, fast_mode=True)
        scored.append((-score_program(program, lib), key, parse, program))
    scored.sort(key=lambda t: (t[0], t[1]))
    scored = scored[:K_max]
    logp = np.array([-t[0] for t in scored])
    shifted = logp - logp.max()
    weights = np.exp(shifted) / np.exp(shifted).sum()
    parses = []
    programs = []
    for (neg, key, parse, program), lp, w in zip(scored, logp, weights):
        parse.log_prob = float(lp)
        parse.weight = float(w)
        parses.append(parse)
        programs.append(program)
    return ParseSet(parses=parses, programs=programs, source_shape=graph.shape)


# ---------------------------------------------------------------------------
# Parse -> program
# ---------------------------------------------------------------------------


def split_stroke(traj: np.ndarray, angle_threshold: float = SPLIT_ANGLE,
                 min_segment: int = MIN_SEGMENT, n_max: int = 4) -> list[np.ndarray]:
    """Split a stroke at sharp turning-angle maxima (at most n_max pieces).

    Consecutive pieces share their boundary point so they chain seamlessly.
    """
    pts = np.asarray(traj, dtype=np.float64)
    n = len(pts)
    if n < 2 * min_segment:
        return [pts]
    w = 3
    angles = np.zeros(n)
    for i in range(w, n - w):
        angles[i] = _turn_angle(pts[i] - pts[i - w], pts[i + w] - pts[i])
    cuts = []
    i = min_segment
    while i < n - min_segment:
        if angles[i] >= angle_threshold:
            lo = max(0, i - min_segment)
            hi = min(n, i + min_segment + 1)
            if i == lo + int(np.argmax(angles[lo:hi])):
                cuts.append(i)
                i += min_segment
                continue
        i += 1
    if not cuts:
        return [pts]
    cuts.sort(key=lambda j: -angles[j])
    cuts = sorted(cuts[:n_max - 1])
    pieces = []
    start = 0
    for c in cuts:
        pieces.append(pts[start:c + 1])
        start = c
    pieces.append(pts[start:])
    return pieces


def _substroke_from_piece(piece: np.ndarray, n_points: int) -> SubStroke:
    pts = np.asarray(piece, dtype=np.float64)
    if len(pts) < 2 or float(np.max(np.abs(pts - pts[0]))) == 0.0:
        # A dot: stand in a unit-length horizontal tick so the primitive
        # machinery applies; at scale ~1 it renders back to a dot.
        x, y = pts[0]
        pts = np.array([[x - 0.5, y], [x + 0.5, y]])
    return normalize_substroke(pts, n_points=n_points)


def _infer_relation(index: int, start_pt: np.ndarray,
                    earlier: list[np.ndarray], snap: float = SNAP_RADIUS) -> Relation:
    if index == 0:
        return Relation(kind="independent", position=start_pt.copy())
    best = None          # (distance, priority, target, kind, tau)
    for j, t in enumerate(earlier):
        d = np.linalg.norm(t - start_pt, axis=1)
        i_min = int(np.argmin(d))
        cands = [
            (float(d[0]), 0, j, "at_start", None),
            (float(d[-1]), 1, j, "at_end", None),
        ]
        if 0 < i_min < len(t) - 1:
            cum = cumulative_arclength(t)
            tau = float(cum[i_min] / cum[-1]) if cum[-1] > 0 else 0.5
            cands.append((float(d[i_min]), 2, j, "along", tau))
        for c in cands:
            if best is None or (c[0], c[1], c[2]) < (best[0], best[1], best[2]):
                best = c
    dist, _, target, kind, tau = best
    if dist > snap:
        return Relation(kind="independent", position=start_pt.copy())
    if kind == "along":
        return Relation(kind="along", target_part=target,
                        along_position=min(max(tau, 0.0), 1.0))
    return Relation(kind=kind, target_part=target)


def parse_to_program(parse: Parse, lib: PrimitiveLibrary,
                     fast_mode: bool = True) -> SymbolProgram:
    """Convert a parse into a symbol program under the library.

    Every stroke becomes a part: split at turning-angle maxima, each piece
    assigned its max-density primitive. fast_mode keeps primitive means as
    the shapes (zero offsets); otherwise offsets are the least-squares
    residuals of the traced trajectory against the assigned mean.
    """
    cfg = lib.config
    parts = []
    relations = []
    for i, stroke in enumerate(parse.strokes):
        pieces = split_stroke(stroke, n_max=cfg.n_max)
        ids = []
        offsets = []
        scales = []
        for piece in pieces:
            ss = _substroke_from_piece(piece, cfg.n_points)
            dens = primitive_logdensities(lib, ss.points)
            pid = int(np.argmax(dens))
            ids.append(pid)
            if fast_mode:
                offsets.append(np.zeros_like(lib.primitives[pid].mean))
            else:
                offsets.append(ss.points - lib.primitives[pid].mean)
            scales.append(max(ss.scale, 1e-6))
        parts.append(Part(primitive_ids=tuple(ids),
                          offsets=np.stack(offsets),
                          scales=tuple(scales)))
        relations.append(_infer_relation(i, stroke[0], parse.strokes[:i]))
    return SymbolProgram(parts=tuple(parts), relations=tuple(relations))


# ---------------------------------------------------------------------------
# Glyph-level entry points
# ---------------------------------------------------------------------------


def skeletonize(binary: np.ndarray) -> SkeletonGraph:
    """Thin a binary glyph and extract its skeleton graph."""
    return build_skeleton_graph(thin(binary))


def parse_glyph(img: np.ndarray, lib: PrimitiveLibrary,
                rng: np.random.Generator | None = None,
                K_max: int = DEFAULT_K_MAX,
                walk_budget: int = DEFAULT_WALK_BUDGET,
                p_continue: float = DEFAULT_P_CONTINUE,
                temperature: float = DEFAULT_TEMPERATURE,
                resize: bool = True) -> ParseSet:
    """Binarize, fit to the working canvas, skeletonize, and parse."""
    work = binarize(img)
    if resize:
        work = binarize(fit_canvas(work, lib.config.canvas_size))
    return random_walk_parses(
        skeletonize(work), lib, K_max=K_max, rng=rng,
        walk_budget=walk_budget, p_continue=p_continue, temperature=temperature)


def deterministic_strokes(graph: SkeletonGraph) -> list[np.ndarray]:
    """One reproducible angle-greedy decomposition (used for model fitting)."""
    adj = _adjacency(graph)
    walk = _one_walk(graph, adj, np.random.default_rng(0),
                     p_continue=1.0, temperature=1e-6)
    _, parse = _canonicalize(walk)
    return parse.strokes


def extract_substrokes(img: np.ndarray, n_points: int = 10, n_max: int = 4,
                       canvas_size: int = 105,
                       resize: bool = True) -> list[SubStroke]:
    """Normalized sub-strokes of one glyph via the deterministic decomposition."""
    work = binarize(img)
    if resize:
        work = binarize(fit_canvas(work, canvas_size))
    out = []
    for stroke in deterministic_strokes(skeletonize(work)):
        for piece in split_stroke(stroke, n_max=n_max):
            out.append(_substroke_from_piece(piece, n_points))
    return out


def deterministic_program(img: np.ndarray, lib: PrimitiveLibrary,
                          fast_mode: bool = False) -> SymbolProgram:
    """The program of the deterministic decomposition (for count fitting)."""
    work = binarize(fit_canvas(binarize(img), lib.config.canvas_size))
    strokes = deterministic_strokes(skeletonize(work))
    parse = Parse(strokes=strokes, edge_ids=[[] for _ in strokes])
    return parse_to_program(parse, lib, fast_mode=fast_mode)
