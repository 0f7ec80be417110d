"""Binary-image thinning and skeleton graph extraction.

thin() reduces ink to a one-pixel-wide, 8-connected skeleton while
preserving the number of connected components. Deletion uses the classic
two-subiteration border test (neighbor count in [2, 6], exactly one 0-to-1
transition around the pixel, directional products zero) applied in
parallel: the deleted set is decided on a frozen image, so each pass peels
exactly one border layer and fronts cannot chase down a stroke. The two
known complete-erasure artifacts of the parallel scheme, isolated 2x2
blocks and two-pixel diagonal bands, are covered by a survivor guard that
never lets a pass delete all pixels of a connected component, plus
post-passes that break leftover 2x2 blocks and drop redundant staircase
pixels.

build_skeleton_graph() turns a skeleton into nodes (endpoints, junction
clusters, one canonical node per pure cycle, isolated pixels) joined by
pixel-chain edges that random-walk parsing can traverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import EmptyGlyph

# Neighbor offsets in clockwise ring order starting north: (dy, dx).
_RING = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))


def _neighborhood(pad: np.ndarray, y: int, x: int) -> list[int]:
    return [int(pad[y + dy, x + dx]) for dy, dx in _RING]


def _transitions(ring: list[int]) -> int:
    return sum(1 for a, b in zip(ring, ring[1:] + ring[:1]) if a == 0 and b == 1)


def _deletable(pad: np.ndarray, y: int, x: int, phase: int) -> bool:
    ring = _neighborhood(pad, y, x)
    b = sum(ring)
    if not 2 <= b <= 6 or _transitions(ring) != 1:
        return False
    p2, _, p4, _, p6, _, p8, _ = ring
    if phase == 0:
        return p2 * p4 * p6 == 0 and p4 * p6 * p8 == 0
    return p2 * p4 * p8 == 0 and p2 * p6 * p8 == 0


def _neighbors_one_component(pad: np.ndarray, y: int, x: int) -> bool:
    """True when the ink neighbors of (y, x) are 8-connected among themselves."""
    pts = [(y + dy, x + dx) for dy, dx in _RING if pad[y + dy, x + dx]]
    if len(pts) <= 1:
        return True
    seen = {pts[0]}
    frontier = [pts[0]]
    rest = set(pts[1:])
    while frontier:
        cy, cx = frontier.pop()
        hits = [p for p in rest
                if max(abs(p[0] - cy), abs(p[1] - cx)) == 1]
        for p in hits:
            rest.discard(p)
            seen.add(p)
            frontier.append(p)
    return not rest


def _remove_redundant_pixels(pad: np.ndarray) -> None:
    """Delete staircase corners and thick diagonal steps.

    A pixel with two or three ink neighbors that are already 8-connected
    without it carries no connectivity and no endpoint; removing it cleans
    the spurious degree-3 bumps thinning leaves along shallow diagonals.
    Line interiors (two opposite neighbors) and true junctions (separate
    arms) fail the single-component test and survive.
    """
    changed = True
    while changed:
        changed = False
        ys, xs = np.nonzero(pad)
        for y, x in zip(ys, xs):
            if not pad[y, x]:
                continue
            ring = _neighborhood(pad, y, x)
            if not 2 <= sum(ring) <= 3:
                continue
            pad[y, x] = 0
            if _neighbors_one_component(pad, y, x):
                changed = True
            else:
                pad[y, x] = 1


def _makes_block(pad: np.ndarray, y: int, x: int) -> bool:
    """True when some 2x2 all-ink block contains (y, x)."""
    win = pad[y - 1:y + 2, x - 1:x + 2]
    blocks = win[:-1, :-1] & win[:-1, 1:] & win[1:, :-1] & win[1:, 1:]
    return bool(blocks.any())


def _shift_block_corner(pad: np.ndarray, corners) -> bool:
    """Move one corner of an undeletable 2x2 block to an elbow position.

    When every corner of a block anchors its own stroke (four diagonals
    meeting at an X crossing) plain deletion would orphan a stroke.
    Deleting the corner and setting the background pixel that touches both
    the orphaned stroke and the rest of the block keeps the crossing
    connected at one-pixel width.
    """
    corner_set = set(corners)
    for yy, xx in corners:
        outside = [(yy + dy, xx + dx) for dy, dx in _RING
                   if pad[yy + dy, xx + dx] and (yy + dy, xx + dx) not in corner_set]
        if len(outside) != 1:
            continue
        oy, ox = outside[0]
        if abs(oy - yy) != 1 or abs(ox - xx) != 1:
            continue
        for ey, ex in ((oy, xx), (yy, ox)):
            if pad[ey, ex]:
                continue
            pad[yy, xx] = 0
            pad[ey, ex] = 1
            if _makes_block(pad, ey, ex):
                pad[ey, ex] = 0
                pad[yy, xx] = 1
                continue
            return True
    return False


def _remove_square_blocks(pad: np.ndarray) -> None:
    """Break every remaining 2x2 ink block without splitting components.

    A corner whose ink neighbors stay 8-connected without it is deleted
    outright; blocks with no such corner get one corner shifted to an
    elbow instead. Deletions shrink ink and shifts shrink the block count,
    so the loop terminates.
    """
    while True:
        blocks = np.nonzero(
            (pad[:-1, :-1] == 1) & (pad[:-1, 1:] == 1)
            & (pad[1:, :-1] == 1) & (pad[1:, 1:] == 1))
        if len(blocks[0]) == 0:
            return
        y, x = int(blocks[0][0]), int(blocks[1][0])
        corners = ((y, x), (y, x + 1), (y + 1, x), (y + 1, x + 1))
        fixed = False
        for yy, xx in corners:
            pad[yy, xx] = 0
            if _neighbors_one_component(pad, yy, xx):
                fixed = True
                break
            pad[yy, xx] = 1
        if not fixed and not _shift_block_corner(pad, corners):
            return


def _phase_mask(ink: np.ndarray, phase: int) -> np.ndarray:
    """Vectorized _deletable over the whole image."""
    h, w = ink.shape
    pad = np.pad(ink, 1)
    ring = [pad[1 + dy:1 + dy + h, 1 + dx:1 + dx + w] for dy, dx in _RING]
    p2, _, p4, _, p6, _, p8, _ = ring
    b = np.zeros((h, w), dtype=np.int32)
    for plane in ring:
        b += plane
    trans = np.zeros((h, w), dtype=np.int32)
    for i in range(8):
        trans += ((ring[i] == 0) & (ring[(i + 1) % 8] == 1)).astype(np.int32)
    cond = (ink == 1) & (b >= 2) & (b <= 6) & (trans == 1)
    if phase == 0:
        return cond & (p2 * p4 * p6 == 0) & (p4 * p6 * p8 == 0)
    return cond & (p2 * p4 * p8 == 0) & (p2 * p6 * p8 == 0)


def thin(img: np.ndarray) -> np.ndarray:
    """Thin binary ink to a one-pixel skeleton, preserving components."""
    a = (np.asarray(img) > 0.5).astype(np.uint8)
    if a.sum() == 0:
        raise EmptyGlyph("no ink to thin")
    ink = a.copy()
    eight = np.ones((3, 3), dtype=np.int32)
    changed = True
    while changed:
        changed = False
        for phase in (0, 1):
            marked = _phase_mask(ink, phase)
            if not marked.any():
                continue
            # Never delete a whole component: keep its raster-first pixel.
            labels, count = ndimage.label(ink, structure=eight)
            for lab in range(1, count + 1):
                mask = labels == lab
                if marked[mask].all():
                    ys, xs = np.nonzero(mask)
                    marked[ys[0], xs[0]] = False
            if marked.any():
                ink[marked] = 0
                changed = True
    pad = np.pad(ink, 1)
    _remove_square_blocks(pad)
    _remove_redundant_pixels(pad)
    return pad[1:-1, 1:-1].astype(np.float64)


def is_thin(img: np.ndarray) -> bool:
    """True when no 2x2 window is fully ink."""
    a = np.asarray(img) > 0.5
    if a.shape[0] < 2 or a.shape[1] < 2:
        return True
    blocks = a[:-1, :-1] & a[:-1, 1:] & a[1:, :-1] & a[1:, 1:]
    return not bool(blocks.any())


# ---------------------------------------------------------------------------
# Graph extraction
# ---------------------------------------------------------------------------


@dataclass
class SkeletonNode:
    id: int
    kind: str                         # endpoint | junction | cycle | isolated
    position: tuple[float, float]     # (x, y) centroid of the node pixels
    pixels: list[tuple[int, int]] = field(default_factory=list)  # (x, y)


@dataclass
class SkeletonEdge:
    id: int
    u: int                            # node ids; u == v for loops
    v: int
    pixels: np.ndarray                # (L, 2) int (x, y) path from u to v

    @property
    def length(self) -> int:
        return len(self.pixels)


@dataclass
class SkeletonGraph:
    nodes: list[SkeletonNode]
    edges: list[SkeletonEdge]
    shape: tuple[int, int]

    def node_edges(self, node_id: int) -> list[int]:
        out = []
        for e in self.edges:
            if e.u == node_id or e.v == node_id:
                out.append(e.id)
        return out

    @property
    def total_edge_pixels(self) -> int:
        return sum(e.length for e in self.edges)


def _degree_map(skel: np.ndarray) -> np.ndarray:
    kernel = np.ones((3, 3), dtype=np.int32)
    kernel[1, 1] = 0
    return ndimage.convolve(skel.astype(np.int32), kernel, mode="constant") * skel


def build_skeleton_graph(skel_img: np.ndarray) -> SkeletonGraph:
    """Extract the node/edge structure of a one-pixel skeleton."""
    skel = (np.asarray(skel_img) > 0.5).astype(np.int32)
    if skel.sum() == 0:
        raise EmptyGlyph("empty skeleton")
    h, w = skel.shape
    degree = _degree_map(skel)

    nodes: list[SkeletonNode] = []
    edges: list[SkeletonEdge] = []
    node_map = np.full((h, w), -1, dtype=np.int64)

    def add_node(kind: str, pixels: list[tuple[int, int]]) -> int:
        nid = len(nodes)
        xs = [p[0] for p in pixels]
        ys = [p[1] for p in pixels]
        nodes.append(SkeletonNode(
            id=nid, kind=kind,
            position=(float(np.mean(xs)), float(np.mean(ys))),
            pixels=list(pixels)))
        for px, py in pixels:
            node_map[py, px] = nid
        return nid

    # Isolated dots become degenerate self-loop edges so that parsing
    # still covers them.
    for y, x in zip(*np.nonzero((degree == 0) & (skel == 1))):
        nid = add_node("isolated", [(int(x), int(y))])
        edges.append(SkeletonEdge(
            id=len(edges), u=nid, v=nid,
            pixels=np.array([[int(x), int(y)]], dtype=np.int64)))

    # Junction pixels merge into clusters; endpoints stand alone.
    junction_mask = (degree >= 3) & (skel == 1)
    labels, count = ndimage.label(junction_mask, structure=np.ones((3, 3)))
    for lab in range(1, count + 1):
        ys, xs = np.nonzero(labels == lab)
        add_node("junction", [(int(x), int(y)) for x, y in zip(xs, ys)])
    for y, x in zip(*np.nonzero((degree == 1) & (skel == 1))):
        add_node("endpoint", [(int(x), int(y))])

    used_steps: set[tuple[int, int, int, int]] = set()
    covered = np.zeros((h, w), dtype=bool)

    def mark(a: tuple[int, int], b: tuple[int, int]) -> None:
        used_steps.add((a[0], a[1], b[0], b[1]))
        used_steps.add((b[0], b[1], a[0], a[1]))
        covered[a[1], a[0]] = True
        covered[b[1], b[0]] = True

    def neighbors(px: int, py: int) -> list[tuple[int, int]]:
        out = []
        for dy, dx in _RING:
            ny, nx = py + dy, px + dx
            if 0 <= ny < h and 0 <= nx < w and skel[ny, nx]:
                out.append((nx, ny))
        return out

    def trace(start: tuple[int, int], step: tuple[int, int]) -> list[tuple[int, int]]:
        path = [start, step]
        mark(start, step)
        prev, cur = start, step
        while node_map[cur[1], cur[0]] == -1:
            nxt = None
            for cand in neighbors(*cur):
                if cand != prev:
                    nxt = cand
                    break
            if nxt is None:
                break
            mark(cur, nxt)
            path.append(nxt)
            prev, cur = cur, nxt
        return path

    # Walk outward from every node pixel along unvisited steps.
    for node in nodes:
        if node.kind == "isolated":
            continue
        for px, py in node.pixels:
            for nb in neighbors(px, py):
                if node_map[nb[1], nb[0]] == node.id:
                    continue  # internal junction-cluster adjacency
                if (px, py, nb[0], nb[1]) in used_steps:
                    continue
                path = trace((px, py), nb)
                end_id = int(node_map[path[-1][1], path[-1][0]])
                if end_id == -1:
                    continue  # dead end inside a cycle; handled below
                edges.append(SkeletonEdge(
                    id=len(edges), u=node.id, v=end_id,
                    pixels=np.array(path, dtype=np.int64)))

    # Degree-2 pixels that no traced edge covered form pure cycles. Anchor
    # each at its raster-first pixel with a closed pixel path.
    total = int(skel.sum())
    leftover = (degree == 2) & (skel == 1) & (node_map == -1) & ~covered
    for y, x in zip(*np.nonzero(leftover)):
        if covered[y, x]:
            continue
        start = (int(x), int(y))
        nid = add_node("cycle", [start])
        first = neighbors(*start)[0]
        path = [start, first]
        mark(start, first)
        prev, cur = start, first
        while cur != start and len(path) <= total:
            nxt = None
            for cand in neighbors(*cur):
                if cand != prev:
                    nxt = cand
                    break
            if nxt is None:
                break
            mark(cur, nxt)
            path.append(nxt)
            prev, cur = cur, nxt
        edges.append(SkeletonEdge(
            id=len(edges), u=nid, v=nid,
            pixels=np.array(path, dtype=np.int64)))

    return SkeletonGraph(nodes=nodes, edges=edges, shape=(h, w))
