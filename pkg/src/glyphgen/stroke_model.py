"""Generative stroke-program model.

A symbol is a program: kappa parts, each part an ordered sequence of
sub-strokes drawn from a learned primitive library, attached to earlier
parts by relations (independent / at_start / at_end / along). The library
bundles a GMM over normalized sub-stroke trajectories with empirical count
and first-order transition models, so programs can be scored as

    log P = log P(kappa) + sum_i [ log P(S_i) + log P(R_i | earlier parts) ]

and new programs can be sampled from the same factorization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import DegenerateStroke, InsufficientData, InvalidProgram
from .geometry import arc_length, resample_polyline

RELATION_KINDS = ("independent", "at_start", "at_end", "along")

FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SubStroke:
    """A normalized pen movement: fixed-length trajectory plus raw length."""

    points: np.ndarray          # (P, 2), bbox inside the unit square at origin
    arc_length: float           # polyline length of the original stroke

    @property
    def scale(self) -> float:
        """Canvas-unit extent of the original stroke (arc-length ratio)."""
        norm_len = arc_length(self.points)
        return self.arc_length / norm_len if norm_len > 0 else 0.0


@dataclass(frozen=True, eq=False)
class Primitive:
    """One GMM component over flattened (x0, y0, x1, y1, ...) trajectories."""

    mean: np.ndarray            # (P, 2)
    cov: np.ndarray             # (2P,) diagonal or (2P, 2P) full
    weight: float

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class CountModel:
    """Categorical part-count and sub-part-count distributions."""

    p_kappa: np.ndarray                 # (kappa_max,), kappa in 1..kappa_max
    p_n_given_kappa: np.ndarray         # (kappa_max, n_max)

    def __post_init__(self):
        if abs(float(np.sum(self.p_kappa)) - 1.0) > 1e-9:
            raise ValueError("p_kappa must sum to 1")
        rows = np.sum(self.p_n_given_kappa, axis=1)
        if np.any(np.abs(rows - 1.0) > 1e-9):
            raise ValueError("each p_n_given_kappa row must sum to 1")

    @property
    def kappa_max(self) -> int:
        return len(self.p_kappa)

    @property
    def n_max(self) -> int:
        return self.p_n_given_kappa.shape[1]

    def logp_kappa(self, kappa: int) -> float:
        # Counts above the modelled range are censored into the top bin.
        k = min(int(kappa), self.kappa_max)
        return float(np.log(self.p_kappa[k - 1]))

    def logp_n(self, n: int, kappa: int) -> float:
        k = min(int(kappa), self.kappa_max)
        j = min(int(n), self.n_max)
        return float(np.log(self.p_n_given_kappa[k - 1, j - 1]))


@dataclass(frozen=True)
class TransitionModel:
    """First-order Markov chain over primitive indices."""

    initial: np.ndarray         # (k,)
    matrix: np.ndarray          # (k, k), rows sum to 1

    def __post_init__(self):
        if abs(float(np.sum(self.initial)) - 1.0) > 1e-9:
            raise ValueError("initial distribution must sum to 1")
        rows = np.sum(self.matrix, axis=1)
        if np.any(np.abs(rows - 1.0) > 1e-9):
            raise ValueError("each transition row must sum to 1")

    def logp_sequence(self, ids) -> float:
        total = float(np.log(self.initial[ids[0]]))
        for a, b in zip(ids[:-1], ids[1:]):
            total += float(np.log(self.matrix[a, b]))
        return total


@dataclass(frozen=True, eq=False)
class PositionPrior:
    """Prior over a part's start location: broad Gaussian or uniform box."""

    kind: str = "gaussian"              # "gaussian" | "uniform"
    center: tuple[float, float] = (52.5, 52.5)
    sigma: float = 35.0
    lo: tuple[float, float] = (0.0, 0.0)
    hi: tuple[float, float] = (105.0, 105.0)

    def logpdf(self, xy: np.ndarray) -> float:
        x, y = float(xy[0]), float(xy[1])
        if self.kind == "gaussian":
            var = self.sigma ** 2
            return -math.log(2.0 * math.pi * var) - (
                (x - self.center[0]) ** 2 + (y - self.center[1]) ** 2
            ) / (2.0 * var)
        area = (self.hi[0] - self.lo[0]) * (self.hi[1] - self.lo[1])
        inside = self.lo[0] <= x <= self.hi[0] and self.lo[1] <= y <= self.hi[1]
        return -math.log(area) if inside else -math.inf

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "gaussian":
            return np.asarray(self.center) + rng.normal(0.0, self.sigma, size=2)
        return rng.uniform(np.asarray(self.lo), np.asarray(self.hi))


@dataclass(frozen=True, eq=False)
class RelationPrior:
    """Prior over how a non-first part attaches to earlier ones.

    Kind probabilities follow RELATION_KINDS order; the along position tau is
    uniform on [0, 1]; attachment targets are uniform over earlier parts.
    """

    kind_probs: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    position: PositionPrior = field(default_factory=PositionPrior)

    def __post_init__(self):
        if abs(sum(self.kind_probs) - 1.0) > 1e-9:
            raise ValueError("relation kind probabilities must sum to 1")


@dataclass(frozen=True, eq=False)
class Relation:
    """Attachment of one part to the parts before it."""

    kind: str
    target_part: int | None = None
    along_position: float | None = None     # tau in [0, 1], "along" only
    position: np.ndarray | None = None      # (2,) start location, "independent" only

    def __post_init__(self):
        if self.kind not in RELATION_KINDS:
            raise InvalidProgram(f"unknown relation kind {self.kind!r}")
        if self.kind == "independent":
            if self.position is None or self.target_part is not None:
                raise InvalidProgram("independent relations carry a position and no target")
        else:
            if self.target_part is None:
                raise InvalidProgram(f"{self.kind} relation requires a target part")
            if self.kind == "along":
                if self.along_position is None or not 0.0 <= self.along_position <= 1.0:
                    raise InvalidProgram("along relation requires tau in [0, 1]")


@dataclass(frozen=True, eq=False)
class Part:
    """An ordered run of sub-strokes drawn without lifting the pen."""

    primitive_ids: tuple[int, ...]
    offsets: np.ndarray          # (n, P, 2) deviations from primitive means
    scales: tuple[float, ...]    # canvas-unit extent per sub-stroke

    def __post_init__(self):
        n = len(self.primitive_ids)
        if n < 1:
            raise InvalidProgram("a part needs at least one sub-stroke")
        if len(self.scales) != n or self.offsets.shape[0] != n:
            raise InvalidProgram("per-sub-stroke fields disagree in length")

    @property
    def n_substrokes(self) -> int:
        return len(self.primitive_ids)


@dataclass(frozen=True, eq=False)
class SymbolProgram:
    """A full symbol: parts plus one relation per part."""

    parts: tuple[Part, ...]
    relations: tuple[Relation, ...]

    def __post_init__(self):
        if len(self.parts) < 1:
            raise InvalidProgram("a program needs at least one part")
        if len(self.relations) != len(self.parts):
            raise InvalidProgram("one relation per part required")
        if self.relations[0].kind != "independent":
            raise InvalidProgram("the first part must be independent")
        for i, rel in enumerate(self.relations):
            if rel.target_part is not None and not 0 <= rel.target_part < i:
                raise InvalidProgram(f"relation {i} targets part {rel.target_part}")

    @property
    def kappa(self) -> int:
        return len(self.parts)

    def primitive_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(pid for part in self.parts for pid in part.primitive_ids))


@dataclass(frozen=True)
class FitConfig:
    """Settings a library was fit under (persisted alongside it)."""

    n_points: int = 10
    kappa_max: int = 6
    n_max: int = 4
    covariance: str = "diag"        # "diag" | "full"
    cov_floor: float = 1e-6
    canvas_size: int = 105
    em_max_iter: int = 100
    em_tol: float = 1e-6


@dataclass(frozen=True, eq=False)
class PrimitiveLibrary:
    """Primitives plus the count/transition/relation models around them."""

    primitives: tuple[Primitive, ...]
    count_model: CountModel
    transition_model: TransitionModel
    relation_prior: RelationPrior
    scale_log_mean: float
    scale_log_sigma: float
    config: FitConfig

    def __post_init__(self):
        if len(self.primitives) < 1:
            raise InvalidProgram("library needs at least one primitive")
        total = sum(p.weight for p in self.primitives)
        if abs(total - 1.0) > 1e-9:
            raise InvalidProgram("primitive weights must sum to 1")

    @property
    def n_primitives(self) -> int:
        return len(self.primitives)

    def with_models(self, count_model: CountModel,
                    transition_model: TransitionModel) -> "PrimitiveLibrary":
        return replace(self, count_model=count_model, transition_model=transition_model)


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


def normalize_substroke(raw, n_points: int = 10) -> SubStroke:
    """Resample a raw point list to a canonical trajectory.

    The output has exactly n_points samples uniformly spaced by arc length,
    bounding box centered at the origin and scaled so the longer side is 1.
    The original polyline length is kept in arc_length.
    """
    pts = np.asarray(raw, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise DegenerateStroke("need at least two 2D points")
    raw_len = arc_length(pts)
    if raw_len <= 0.0:
        raise DegenerateStroke("all points identical")
    res = resample_polyline(pts, n_points)
    lo = res.min(axis=0)
    hi = res.max(axis=0)
    extent = float(np.max(hi - lo))
    if extent <= 0.0:
        raise DegenerateStroke("zero extent after resampling")
    centered = res - (lo + hi) / 2.0
    return SubStroke(points=centered / extent, arc_length=raw_len)


# ---------------------------------------------------------------------------
# Gaussian mixture fitting (EM)
# ---------------------------------------------------------------------------


def _gaussian_logpdf(x: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """Row-wise log N(x; mean, cov) for diagonal (1D) or full (2D) cov."""
    d = mean.size
    diff = x - mean
    if cov.ndim == 1:
        return -0.5 * (d * np.log(2.0 * np.pi) + np.sum(np.log(cov))
                       + np.sum(diff * diff / cov, axis=-1))
    chol = np.linalg.cholesky(cov)
    sol = np.linalg.solve(chol, diff.T)
    logdet = 2.0 * np.sum(np.log(np.diag(chol)))
    return -0.5 * (d * np.log(2.0 * np.pi) + logdet + np.sum(sol * sol, axis=0))


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    m = np.max(a, axis=axis, keepdims=True)
    return np.squeeze(m, axis=axis) + np.log(np.sum(np.exp(a - m), axis=axis))


def _kmeanspp_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: spread initial means across the data."""
    n = len(x)
    means = [x[rng.integers(n)]]
    for _ in range(1, k):
        d2 = np.min([np.sum((x - m) ** 2, axis=1) for m in means], axis=0)
        total = d2.sum()
        if total <= 0:
            means.append(x[rng.integers(n)])
            continue
        means.append(x[rng.choice(n, p=d2 / total)])
    return np.array(means)


def fit_gmm(x: np.ndarray, k: int, rng: np.random.Generator,
            covariance: str = "diag", cov_floor: float = 1e-6,
            max_iter: int = 100, tol: float = 1e-6):
    """EM for a k-component GMM; returns (means, covs, weights, ll_trace).

    The log-likelihood trace is evaluated once per E step, so it is
    non-decreasing up to the covariance floor.
    """
    n, d = x.shape
    means = _kmeanspp_init(x, k, rng)
    if covariance == "diag":
        base = np.maximum(np.var(x, axis=0), cov_floor)
        covs = np.tile(base, (k, 1))
    else:
        base = np.cov(x, rowvar=False) if n > 1 else np.eye(d)
        covs = np.tile(base + cov_floor * np.eye(d), (k, 1, 1))
    weights = np.full(k, 1.0 / k)
    trace = []
    for _ in range(max_iter):
        logp = np.stack([
            np.log(weights[c]) + _gaussian_logpdf(x, means[c], covs[c])
            for c in range(k)
        ], axis=1)
        norm = _logsumexp(logp, axis=1)
        trace.append(float(np.sum(norm)))
        resp = np.exp(logp - norm[:, None])
        nk = resp.sum(axis=0)
        # Re-seed components that lost all their mass (ties with floor rare
        # but must stay deterministic).
        for c in np.where(nk < 1e-12)[0]:
            worst = int(np.argmin(norm))
            means[c] = x[worst]
            nk[c] = 1.0
            resp[:, c] = 0.0
            resp[worst, c] = 1.0
        weights = nk / nk.sum()
        means = (resp.T @ x) / nk[:, None]
        if covariance == "diag":
            for c in range(k):
                diff2 = (x - means[c]) ** 2
                covs[c] = np.maximum((resp[:, c] @ diff2) / nk[c], cov_floor)
        else:
            for c in range(k):
                diff = x - means[c]
                covs[c] = (resp[:, c][:, None] * diff).T @ diff / nk[c]
                covs[c] += cov_floor * np.eye(d)
        if len(trace) > 1 and abs(trace[-1] - trace[-2]) < tol * (abs(trace[-2]) + 1.0):
            break
    return means, covs, weights, trace


def fit_primitive_library(substrokes, k: int, seed: int,
                          config: FitConfig | None = None) -> PrimitiveLibrary:
    """Fit the primitive GMM; count/transition models start uniform.

    Call fit_count_models on a parsed corpus afterwards and attach the
    result with library.with_models().
    """
    cfg = config or FitConfig()
    strokes = list(substrokes)
    if k < 1 or len(strokes) < k:
        raise InsufficientData(f"need at least {k} sub-strokes, got {len(strokes)}")
    x = np.stack([s.points.ravel() for s in strokes])
    rng = np.random.default_rng(seed)
    means, covs, weights, _ = fit_gmm(
        x, k, rng, covariance=cfg.covariance, cov_floor=cfg.cov_floor,
        max_iter=cfg.em_max_iter, tol=cfg.em_tol)
    prims = tuple(
        Primitive(mean=means[c].reshape(-1, 2), cov=covs[c], weight=float(weights[c]))
        for c in range(k)
    )
    scales = np.array([max(s.scale, 1e-6) for s in strokes])
    log_scales = np.log(scales)
    uniform_rows = np.full((cfg.kappa_max, cfg.n_max), 1.0 / cfg.n_max)
    count = CountModel(
        p_kappa=np.full(cfg.kappa_max, 1.0 / cfg.kappa_max),
        p_n_given_kappa=uniform_rows,
    )
    trans = TransitionModel(
        initial=np.full(k, 1.0 / k),
        matrix=np.full((k, k), 1.0 / k),
    )
    half = cfg.canvas_size / 2.0
    prior = RelationPrior(position=PositionPrior(
        kind="gaussian", center=(half, half), sigma=cfg.canvas_size / 3.0))
    return PrimitiveLibrary(
        primitives=prims,
        count_model=count,
        transition_model=trans,
        relation_prior=prior,
        scale_log_mean=float(np.mean(log_scales)),
        scale_log_sigma=float(max(np.std(log_scales), 1e-3)),
        config=cfg,
    )


def fit_count_models(programs, n_primitives: int, kappa_max: int = 6,
                     n_max: int = 4) -> tuple[CountModel, TransitionModel]:
    """Empirical count and transition models with add-one smoothing.

    Part counts above kappa_max (and sub-part counts above n_max) are
    censored into the top bin, mirroring how they are scored.
    """
    progs = list(programs)
    if not progs:
        raise InsufficientData("empty program corpus")
    kappa_counts = np.zeros(kappa_max)
    n_counts = np.zeros((kappa_max, n_max))
    init_counts = np.zeros(n_primitives)
    trans_counts = np.zeros((n_primitives, n_primitives))
    for prog in progs:
        kap = min(prog.kappa, kappa_max)
        kappa_counts[kap - 1] += 1
        for part in prog.parts:
            n_counts[kap - 1, min(part.n_substrokes, n_max) - 1] += 1
            ids = part.primitive_ids
            init_counts[ids[0]] += 1
            for a, b in zip(ids[:-1], ids[1:]):
                trans_counts[a, b] += 1
    p_kappa = (kappa_counts + 1.0) / (kappa_counts.sum() + kappa_max)
    row_totals = n_counts.sum(axis=1, keepdims=True)
    p_n = (n_counts + 1.0) / (row_totals + n_max)
    initial = (init_counts + 1.0) / (init_counts.sum() + n_primitives)
    matrix = (trans_counts + 1.0) / (trans_counts.sum(axis=1, keepdims=True) + n_primitives)
    return CountModel(p_kappa=p_kappa, p_n_given_kappa=p_n), TransitionModel(
        initial=initial, matrix=matrix)


# ---------------------------------------------------------------------------
# Scoring and sampling
# ---------------------------------------------------------------------------


def offset_logpdf(offset: np.ndarray, primitive: Primitive) -> float:
    """Log density of a sub-stroke shape offset under its primitive."""
    flat = np.asarray(offset, dtype=np.float64).ravel()[None, :]
    return float(_gaussian_logpdf(flat, np.zeros(primitive.dim), primitive.cov)[0])


def primitive_logdensities(lib: PrimitiveLibrary, points: np.ndarray) -> np.ndarray:
    """Weighted log density of a normalized trajectory under each primitive."""
    flat = np.asarray(points, dtype=np.float64).ravel()[None, :]
    return np.array([
        math.log(p.weight) + float(_gaussian_logpdf(flat, p.mean.ravel(), p.cov)[0])
        for p in lib.primitives
    ])


def _relation_logp(rel: Relation, part_index: int, prior: RelationPrior) -> float:
    if part_index == 0:
        # Forced independent: the kind carries no probability mass.
        return prior.position.logpdf(rel.position)
    kind_idx = RELATION_KINDS.index(rel.kind)
    logp = float(np.log(prior.kind_probs[kind_idx]))
    if rel.kind == "independent":
        return logp + prior.position.logpdf(rel.position)
    # Uniform choice among the part_index earlier parts.
    logp -= math.log(part_index)
    # tau is uniform on [0, 1]: density 1 contributes 0 for "along".
    return logp


def score_program(psi: SymbolProgram, lib: PrimitiveLibrary) -> float:
    """Log probability of a program under the library (the type-level score)."""
    for part in psi.parts:
        for pid in part.primitive_ids:
            if not 0 <= pid < lib.n_primitives:
                raise InvalidProgram(f"primitive index {pid} outside library")
    total = lib.count_model.logp_kappa(psi.kappa)
    for i, (part, rel) in enumerate(zip(psi.parts, psi.relations)):
        total += lib.count_model.logp_n(part.n_substrokes, psi.kappa)
        total += lib.transition_model.logp_sequence(part.primitive_ids)
        for j, pid in enumerate(part.primitive_ids):
            total += offset_logpdf(part.offsets[j], lib.primitives[pid])
        total += _relation_logp(rel, i, lib.relation_prior)
    return float(total)


def _sample_offset(primitive: Primitive, rng: np.random.Generator) -> np.ndarray:
    if primitive.cov.ndim == 1:
        flat = rng.normal(0.0, np.sqrt(primitive.cov))
    else:
        flat = rng.multivariate_normal(np.zeros(primitive.dim), primitive.cov,
                                       method="cholesky")
    return flat.reshape(-1, 2)


def sample_program(lib: PrimitiveLibrary, rng: np.random.Generator) -> SymbolProgram:
    """Draw a new symbol program from the library's factorized prior."""
    cm = lib.count_model
    tm = lib.transition_model
    prior = lib.relation_prior
    kappa = int(rng.choice(cm.kappa_max, p=cm.p_kappa)) + 1
    parts = []
    relations = []
    for i in range(kappa):
        n = int(rng.choice(cm.n_max, p=cm.p_n_given_kappa[kappa - 1])) + 1
        ids = [int(rng.choice(lib.n_primitives, p=tm.initial))]
        for _ in range(n - 1):
            ids.append(int(rng.choice(lib.n_primitives, p=tm.matrix[ids[-1]])))
        offsets = np.stack([_sample_offset(lib.primitives[pid], rng) for pid in ids])
        scales = tuple(
            float(np.exp(rng.normal(lib.scale_log_mean, lib.scale_log_sigma)))
            for _ in ids
        )
        parts.append(Part(primitive_ids=tuple(ids), offsets=offsets, scales=scales))
        if i == 0:
            relations.append(Relation(kind="independent",
                                      position=prior.position.sample(rng)))
            continue
        kind = RELATION_KINDS[int(rng.choice(4, p=np.asarray(prior.kind_probs)))]
        if kind == "independent":
            relations.append(Relation(kind=kind, position=prior.position.sample(rng)))
        elif kind == "along":
            relations.append(Relation(kind=kind, target_part=int(rng.integers(i)),
                                      along_position=float(rng.uniform())))
        else:
            relations.append(Relation(kind=kind, target_part=int(rng.integers(i))))
    return SymbolProgram(parts=tuple(parts), relations=tuple(relations))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def library_to_jsonable(lib: PrimitiveLibrary) -> dict:
    return {
        "format": FORMAT_VERSION,
        "config": {
            "n_points": lib.config.n_points,
            "kappa_max": lib.config.kappa_max,
            "n_max": lib.config.n_max,
            "covariance": lib.config.covariance,
            "cov_floor": lib.config.cov_floor,
            "canvas_size": lib.config.canvas_size,
            "em_max_iter": lib.config.em_max_iter,
            "em_tol": lib.config.em_tol,
        },
        "primitives": [
            {
                "mean": p.mean.tolist(),
                "cov": p.cov.tolist(),
                "weight": p.weight,
            }
            for p in lib.primitives
        ],
        "count_model": {
            "p_kappa": lib.count_model.p_kappa.tolist(),
            "p_n_given_kappa": lib.count_model.p_n_given_kappa.tolist(),
        },
        "transition_model": {
            "initial": lib.transition_model.initial.tolist(),
            "matrix": lib.transition_model.matrix.tolist(),
        },
        "relation_prior": {
            "kind_probs": list(lib.relation_prior.kind_probs),
            "position": {
                "kind": lib.relation_prior.position.kind,
                "center": list(lib.relation_prior.position.center),
                "sigma": lib.relation_prior.position.sigma,
                "lo": list(lib.relation_prior.position.lo),
                "hi": list(lib.relation_prior.position.hi),
            },
        },
        "scale_log_mean": lib.scale_log_mean,
        "scale_log_sigma": lib.scale_log_sigma,
    }


def library_from_jsonable(doc: dict) -> PrimitiveLibrary:
    if doc.get("format") != FORMAT_VERSION:
        raise InvalidProgram(f"unsupported library format {doc.get('format')!r}")
    cfg = FitConfig(**doc["config"])
    prims = tuple(
        Primitive(
            mean=np.array(p["mean"], dtype=np.float64),
            cov=np.array(p["cov"], dtype=np.float64),
            weight=float(p["weight"]),
        )
        for p in doc["primitives"]
    )
    count = CountModel(
        p_kappa=np.array(doc["count_model"]["p_kappa"], dtype=np.float64),
        p_n_given_kappa=np.array(doc["count_model"]["p_n_given_kappa"], dtype=np.float64),
    )
    trans = TransitionModel(
        initial=np.array(doc["transition_model"]["initial"], dtype=np.float64),
        matrix=np.array(doc["transition_model"]["matrix"], dtype=np.float64),
    )
    pos = doc["relation_prior"]["position"]
    prior = RelationPrior(
        kind_probs=tuple(doc["relation_prior"]["kind_probs"]),
        position=PositionPrior(
            kind=pos["kind"], center=tuple(pos["center"]), sigma=float(pos["sigma"]),
            lo=tuple(pos["lo"]), hi=tuple(pos["hi"]),
        ),
    )
    return PrimitiveLibrary(
        primitives=prims, count_model=count, transition_model=trans,
        relation_prior=prior,
        scale_log_mean=float(doc["scale_log_mean"]),
        scale_log_sigma=float(doc["scale_log_sigma"]),
        config=cfg,
    )


def save_library(lib: PrimitiveLibrary, path: str | Path) -> None:
    Path(path).write_text(json.dumps(library_to_jsonable(lib), indent=2, sort_keys=True))


def load_library(path: str | Path) -> PrimitiveLibrary:
    return library_from_jsonable(json.loads(Path(path).read_text()))
