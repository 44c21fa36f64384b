"""Combinatorial metric trees with positive edge lengths.

A tree here is a finite vertex/edge model of a geodesic tree: vertices carry
string identifiers, edges carry positive lengths, and the full matrix of
path distances is computed once at construction and cached.  Points of the
underlying continuum exist only once an operation materialises them --
subdivision, chunk boundaries and ball cuts all insert explicit vertices.

Operations that insert vertices record them in ``metadata["inserted"]`` as
``new_id -> (u, v, offset)``, meaning the new vertex sits on the former
edge (u, v) at distance ``offset`` from ``u``.  Downstream code uses these
records to track coordinates without parsing identifiers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .metric import FiniteMetricSpace

__all__ = [
    "MetricTree",
    "TreeStructureError",
    "ReplacementError",
    "Deg2Component",
    "TreeSegment",
    "Deg2Decomposition",
    "ReplacementEntry",
    "tree_from_edges",
    "geodesic",
    "deg2_components",
    "decompose_deg2",
    "refine_at_radius",
    "closed_ball_subtree",
    "wedge_sum",
    "replace_edges",
    "subdivide",
]

_EPS_VERTEX = 1e-12  # slack for "a position lands exactly on a vertex"


class TreeStructureError(ValueError):
    """Raised for edge lists that do not describe a metric tree."""


class ReplacementError(ValueError):
    """Raised when an edge-replacement plan is inconsistent with its host."""


class MetricTree:
    """A finite metric tree: unique string vertex ids, positive edge lengths.

    Attributes:
        vertices: vertex identifiers in insertion order.
        edges: tuples ``(a, b, length)``.
        dist: cached matrix of path distances (float64, read-only).
        labels: optional display labels per vertex id.
        metadata: free-form provenance (generators fill this in).
    """

    def __init__(
        self,
        vertices: Sequence[str],
        edges: Sequence[Tuple[str, str, float]],
        labels: Optional[Dict[str, str]] = None,
        metadata: Optional[dict] = None,
    ):
        self.vertices: Tuple[str, ...] = tuple(str(v) for v in vertices)
        self.edges: Tuple[Tuple[str, str, float], ...] = tuple(
            (str(a), str(b), float(w)) for a, b, w in edges
        )
        self.labels: Dict[str, str] = dict(labels or {})
        self.metadata: dict = dict(metadata or {})
        self._index: Dict[str, int] = {v: i for i, v in enumerate(self.vertices)}
        self._validate()
        self._adj: List[List[Tuple[int, float]]] = [[] for _ in self.vertices]
        for a, b, w in self.edges:
            ia, ib = self._index[a], self._index[b]
            self._adj[ia].append((ib, w))
            self._adj[ib].append((ia, w))
        self.dist: np.ndarray = self._all_pairs()

    # -- construction helpers -------------------------------------------------

    def _validate(self):
        if len(self.vertices) == 0:
            raise TreeStructureError("a tree needs at least one vertex")
        if len(self._index) != len(self.vertices):
            dupes = [v for v in self.vertices if self.vertices.count(v) > 1]
            raise TreeStructureError("duplicate vertex ids: %s" % sorted(set(dupes))[:3])
        parent = list(range(len(self.vertices)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        accepted: List[Tuple[str, str, float]] = []
        for a, b, w in self.edges:
            if a not in self._index or b not in self._index:
                raise TreeStructureError("edge (%s, %s) references unknown vertex" % (a, b))
            if a == b:
                raise TreeStructureError("self-loop at vertex %s" % a)
            if not (w > 0) or not math.isfinite(w):
                raise TreeStructureError(
                    "edge (%s, %s) must have positive finite length, got %r" % (a, b, w)
                )
            ra, rb = find(self._index[a]), find(self._index[b])
            if ra == rb:
                cycle = self._cycle_witness(accepted, a, b)
                raise TreeStructureError(
                    "cycle detected: %s" % " -> ".join(cycle)
                )
            parent[ra] = rb
            accepted.append((a, b, w))
        roots = {find(i) for i in range(len(self.vertices))}
        if len(roots) > 1:
            reps = sorted(self.vertices[i] for i in roots)
            raise TreeStructureError(
                "tree is disconnected (components containing %s)" % ", ".join(reps[:4])
            )

    def _cycle_witness(self, accepted, a, b) -> List[str]:
        # Path a..b through already accepted edges, closed by the edge (a, b).
        adj: Dict[str, List[str]] = {}
        for u, v, _ in accepted:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        prev = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            if u == b:
                break
            for v in adj.get(u, []):
                if v not in prev:
                    prev[v] = u
                    stack.append(v)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1] + [a]

    def _all_pairs(self) -> np.ndarray:
        n = len(self.vertices)
        d = np.zeros((n, n), dtype=float)
        for s in range(n):
            row = d[s]
            seen = np.zeros(n, dtype=bool)
            seen[s] = True
            stack = [s]
            while stack:
                u = stack.pop()
                du = row[u]
                for v, w in self._adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        row[v] = du + w
                        stack.append(v)
        d.setflags(write=False)
        return d

    # -- queries --------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError("vertex %r not in tree" % (v,)) from None

    def has_vertex(self, v: str) -> bool:
        return v in self._index

    def degree(self, v: str) -> int:
        return len(self._adj[self.index(v)])

    def neighbors(self, v: str) -> List[Tuple[str, float]]:
        return [(self.vertices[j], w) for j, w in self._adj[self.index(v)]]

    def distance(self, x: str, y: str) -> float:
        return float(self.dist[self.index(x), self.index(y)])

    def eccentricity(self, v: str) -> float:
        return float(self.dist[self.index(v)].max())

    def diameter(self) -> float:
        return float(self.dist.max()) if self.n else 0.0

    def total_edge_length(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def as_space(self) -> FiniteMetricSpace:
        return FiniteMetricSpace(self.vertices, self.dist)

    def __repr__(self):
        return "MetricTree(%d vertices, %d edges)" % (self.n, len(self.edges))


def tree_from_edges(
    edges: Sequence[Tuple[str, str, float]],
    vertices: Optional[Sequence[str]] = None,
    labels: Optional[Dict[str, str]] = None,
    metadata: Optional[dict] = None,
) -> MetricTree:
    """Build a :class:`MetricTree` from an edge list.

    Vertex order defaults to first appearance in the edge list.  Raises
    :class:`TreeStructureError` on cycles, disconnection, duplicate ids or
    nonpositive lengths.
    """
    if vertices is None:
        seen: List[str] = []
        have = set()
        for a, b, _ in edges:
            for v in (a, b):
                if v not in have:
                    have.add(v)
                    seen.append(v)
        vertices = seen
    return MetricTree(vertices, edges, labels=labels, metadata=metadata)


def geodesic(tree: MetricTree, x: str, y: str) -> List[str]:
    """The unique vertex path from x to y (inclusive)."""
    ix, iy = tree.index(x), tree.index(y)
    prev = {ix: -1}
    stack = [ix]
    while stack:
        u = stack.pop()
        if u == iy:
            break
        for v, _ in tree._adj[u]:
            if v not in prev:
                prev[v] = u
                stack.append(v)
    path = [iy]
    while path[-1] != ix:
        path.append(prev[path[-1]])
    return [tree.vertices[i] for i in reversed(path)]


# -- degree <= 2 structure ----------------------------------------------------


@dataclass(frozen=True)
class Deg2Component:
    """A maximal path of vertices of degree <= 2.

    ``vertices`` is the component path itself; ``delimiters`` are the 0-2
    adjacent branch vertices (degree >= 3) just outside it.  The closure
    path extends the component by those delimiters, and
    ``closure_diameter`` is its length, i.e. the distance between the two
    closure endpoints (leaf ends count as endpoints).
    """

    vertices: Tuple[str, ...]
    delimiters: Tuple[str, ...]
    closure_path: Tuple[str, ...]
    closure_diameter: float


def deg2_components(tree: MetricTree) -> List[Deg2Component]:
    """Connected components of the set of vertices with degree <= 2.

    Each component of a tree is a path; components are returned with a
    canonical orientation (lexicographically smaller closure endpoint
    first) and sorted by their closure paths.
    """
    low = [v for v in tree.vertices if tree.degree(v) <= 2]
    low_set = set(low)
    comps: List[List[str]] = []
    seen = set()
    for v in low:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for nb, _ in tree.neighbors(u):
                if nb in low_set and nb not in seen:
                    seen.add(nb)
                    comp.append(nb)
                    stack.append(nb)
        comps.append(comp)

    out: List[Deg2Component] = []
    for comp in comps:
        cset = set(comp)
        if len(comp) == 1:
            ordered = comp
            outside = [nb for nb, _ in tree.neighbors(comp[0]) if nb not in cset]
            head_delims = outside[:1]
            tail_delims = outside[1:2]
        else:
            ends = [
                v for v in comp
                if sum(1 for nb, _ in tree.neighbors(v) if nb in cset) <= 1
            ]
            start = min(ends)
            ordered = [start]
            prev = None
            while True:
                nxts = [
                    nb for nb, _ in tree.neighbors(ordered[-1])
                    if nb in cset and nb != prev
                ]
                if not nxts:
                    break
                prev = ordered[-1]
                ordered.append(nxts[0])
            head_delims = [nb for nb, _ in tree.neighbors(ordered[0]) if nb not in cset]
            tail_delims = [nb for nb, _ in tree.neighbors(ordered[-1]) if nb not in cset]
        closure = head_delims[:1] + ordered + tail_delims[:1]
        if closure[0] > closure[-1]:
            closure = closure[::-1]
            ordered = ordered[::-1]
        length = sum(
            tree.distance(closure[i], closure[i + 1]) for i in range(len(closure) - 1)
        )
        delims = tuple(sorted(set(head_delims[:1] + tail_delims[:1])))
        out.append(
            Deg2Component(
                vertices=tuple(ordered),
                delimiters=delims,
                closure_path=tuple(closure),
                closure_diameter=float(length),
            )
        )
    out.sort(key=lambda c: c.closure_path)
    return out


@dataclass(frozen=True)
class TreeSegment:
    """A geodesic segment [a, b] of a tree, with its vertex path and length."""

    a: str
    b: str
    length: float
    path: Tuple[str, ...]


@dataclass(frozen=True)
class Deg2Decomposition:
    """Chunked closure paths of all degree-<=2 components.

    ``tree`` is the host with any chunk-boundary vertices inserted (ids
    ``chop:k``); ``segments`` covers every component closure with geodesic
    segments of length at most the requested cap, consecutive segments
    sharing exactly one vertex.
    """

    tree: MetricTree
    segments: Tuple[TreeSegment, ...]


def decompose_deg2(tree: MetricTree, max_len: float = 1.0) -> Deg2Decomposition:
    """Chop every degree-<=2 component closure into segments of length <= max_len.

    Chunking is greedy from the lexicographically smallest closure endpoint,
    taking length exactly ``max_len`` until the remainder.  Boundaries that
    fall in the middle of an edge are materialised as new ``chop:k``
    vertices in the returned host tree.
    """
    if not max_len > 0:
        raise ValueError("max_len must be positive")
    comps = deg2_components(tree)

    # Component closures cover every edge touching a degree-<=2 vertex; an
    # edge joining two branch vertices is covered by nobody, yet its interior
    # is still a plain run of the tree, so chunk it as its own closure.
    covered = set()
    for comp in comps:
        path = comp.closure_path
        for i in range(len(path) - 1):
            covered.add(frozenset((path[i], path[i + 1])))
    bare = sorted(
        tuple(sorted((a, b))) for a, b, _ in tree.edges
        if frozenset((a, b)) not in covered
    )
    closures: List[Tuple[str, ...]] = [c.closure_path for c in comps] + [
        tuple(pair) for pair in bare
    ]

    # Walk each closure path, planning chunk boundaries.  A boundary is
    # either an existing vertex or (edge position) to be inserted.
    pending: List[Tuple[str, str, float, str]] = []  # (u, v, offset, new_id)
    plans: List[List[str]] = []  # per segment: symbolic vertex paths
    counter = 0
    for path in closures:
        if len(path) < 2:
            continue
        boundaries: List[str] = [path[0]]
        seg_paths: List[List[str]] = [[path[0]]]
        remaining = max_len
        for i in range(len(path) - 1):
            u, v = path[i], path[i + 1]
            edge_len = tree.distance(u, v)
            pos = 0.0
            cur_u = u
            while edge_len - pos > remaining + _EPS_VERTEX:
                off = pos + remaining
                new_id = "chop:%d" % counter
                counter += 1
                pending.append((u, v, off, new_id))
                seg_paths[-1].append(new_id)
                seg_paths.append([new_id])
                boundaries.append(new_id)
                pos = off
                remaining = max_len
                cur_u = new_id
            # rest of this edge fits in the current chunk
            consumed = edge_len - pos
            remaining -= consumed
            seg_paths[-1].append(v)
            if remaining <= _EPS_VERTEX and i < len(path) - 2:
                boundaries.append(v)
                seg_paths.append([v])
                remaining = max_len
        plans.extend(p for p in seg_paths if len(p) >= 2)

    if pending:
        host = _insert_points(tree, pending, generator="chop")
    else:
        host = tree

    segments = []
    for p in plans:
        length = sum(host.distance(p[i], p[i + 1]) for i in range(len(p) - 1))
        segments.append(TreeSegment(a=p[0], b=p[-1], length=float(length), path=tuple(p)))
    return Deg2Decomposition(tree=host, segments=tuple(segments))


def _insert_points(
    tree: MetricTree,
    points: Sequence[Tuple[str, str, float, str]],
    generator: str,
    extra_metadata: Optional[dict] = None,
) -> MetricTree:
    """Rebuild a tree with new vertices on edges.

    ``points`` holds ``(u, v, offset, new_id)`` with offset measured from
    ``u`` along the edge (u, v); multiple insertions per edge are allowed.
    """
    per_edge: Dict[Tuple[str, str], List[Tuple[float, str]]] = {}
    edge_key = {}
    for a, b, w in tree.edges:
        edge_key[(a, b)] = (a, b)
        edge_key[(b, a)] = (a, b)
    for u, v, off, new_id in points:
        if (u, v) not in edge_key:
            raise TreeStructureError("no edge (%s, %s) to insert into" % (u, v))
        a, b = edge_key[(u, v)]
        off_a = off if (u, v) == (a, b) else tree.distance(a, b) - off
        per_edge.setdefault((a, b), []).append((off_a, new_id))

    new_edges: List[Tuple[str, str, float]] = []
    order: List[str] = list(tree.vertices)
    inserted: Dict[str, Tuple[str, str, float]] = {}
    for a, b, w in tree.edges:
        if (a, b) not in per_edge:
            new_edges.append((a, b, w))
            continue
        cuts = sorted(per_edge[(a, b)])
        prev_id, prev_off = a, 0.0
        for off, new_id in cuts:
            if not (0.0 < off < w):
                raise TreeStructureError(
                    "insertion offset %r outside edge (%s, %s) of length %r"
                    % (off, a, b, w)
                )
            new_edges.append((prev_id, new_id, off - prev_off))
            order.append(new_id)
            inserted[new_id] = (a, b, off)
            prev_id, prev_off = new_id, off
        new_edges.append((prev_id, b, w - prev_off))
    meta = {"generator": generator, "inserted": inserted}
    meta.update(extra_metadata or {})
    return MetricTree(order, new_edges, labels=dict(tree.labels), metadata=meta)


# -- balls --------------------------------------------------------------------


def _sphere_crossings(tree: MetricTree, origin: str, r: float):
    """Edges crossing the sphere of radius r about origin, with offsets."""
    d = tree.dist[tree.index(origin)]
    crossings = []
    for a, b, w in tree.edges:
        da, db = d[tree.index(a)], d[tree.index(b)]
        lo_id, lo, hi = (a, da, db) if da <= db else (b, db, da)
        if lo <= r < hi:
            off = r - lo
            if off > _EPS_VERTEX and (hi - r) > _EPS_VERTEX:
                crossings.append((lo_id, a if lo_id == b else b, off))
    return crossings


def refine_at_radius(tree: MetricTree, origin: str, r: float) -> MetricTree:
    """Insert vertices at distance exactly r from origin on crossing edges.

    The tree itself is unchanged geometrically; if no edge crosses the
    sphere the input tree is returned as-is.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    tree.index(origin)
    crossings = _sphere_crossings(tree, origin, r)
    if not crossings:
        return tree
    base = 0
    for v in tree.vertices:
        if v.startswith("cut:"):
            try:
                base = max(base, int(v[4:]) + 1)
            except ValueError:
                pass
    points = [
        (u, v, off, "cut:%d" % (base + k)) for k, (u, v, off) in enumerate(crossings)
    ]
    return _insert_points(
        tree, points, generator="refine", extra_metadata={"origin": origin, "radius": r}
    )


def closed_ball_subtree(tree: MetricTree, origin: str, r: float) -> MetricTree:
    """The closed ball of radius r about origin, as a subtree.

    Boundary points in the middle of an edge become new ``cut:k`` vertices.
    ``r = 0`` gives the single-vertex tree at origin; ``r`` at least the
    eccentricity of origin (or infinite) returns the input tree itself.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    io = tree.index(origin)
    d = tree.dist[io]
    if math.isinf(r) or r >= float(d.max()):
        return tree
    refined = refine_at_radius(tree, origin, r)
    dr = refined.dist[refined.index(origin)]
    keep = [v for v in refined.vertices if dr[refined.index(v)] <= r + _EPS_VERTEX]
    keep_set = set(keep)
    edges = [
        (a, b, w) for a, b, w in refined.edges if a in keep_set and b in keep_set
    ]
    inserted = {
        k: v
        for k, v in refined.metadata.get("inserted", {}).items()
        if k in keep_set
    }
    meta = {
        "generator": "ball",
        "origin": origin,
        "radius": r,
        "inserted": inserted,
    }
    labels = {k: v for k, v in tree.labels.items() if k in keep_set}
    return MetricTree(keep, edges, labels=labels, metadata=meta)


# -- gluing -------------------------------------------------------------------


def wedge_sum(parts: Sequence[Tuple[MetricTree, str]]) -> MetricTree:
    """Glue trees at basepoints: all basepoints become one wedge vertex ``p``.

    Distances within one part are untouched; distances across parts go
    through the wedge point.  A single part is returned unchanged.
    """
    if len(parts) == 0:
        raise ValueError("wedge_sum needs at least one part")
    for i, (t, bp) in enumerate(parts):
        if not t.has_vertex(bp):
            raise TreeStructureError(
                "part %d has no basepoint vertex %r" % (i, bp)
            )
    if len(parts) == 1:
        return parts[0][0]
    vertices: List[str] = ["p"]
    edges: List[Tuple[str, str, float]] = []
    labels: Dict[str, str] = {}
    meta_parts = []
    for i, (t, bp) in enumerate(parts):
        prefix = "P%d." % i
        meta_parts.append({"prefix": prefix, "basepoint": bp})

        def rename(v, bp=bp, prefix=prefix):
            return "p" if v == bp else prefix + v

        for v in t.vertices:
            if v != bp:
                vertices.append(rename(v))
        for a, b, w in t.edges:
            edges.append((rename(a), rename(b), w))
        for k, v in t.labels.items():
            labels[rename(k)] = v
    meta = {"generator": "wedge", "parts": meta_parts, "wedge_vertex": "p"}
    return MetricTree(vertices, edges, labels=labels, metadata=meta)


@dataclass(frozen=True)
class ReplacementEntry:
    """One edge-replacement instruction.

    The geodesic [a, b] of the host is removed (interior only) and the
    replacement tree is glued in with ``alpha -> a`` and ``beta -> b``.
    The replacement must span the same distance between its marks as the
    host does between a and b.
    """

    a: str
    b: str
    tree: MetricTree
    alpha: str
    beta: str


ReplacementPlan = Sequence[ReplacementEntry]


def replace_edges(
    tree: MetricTree, plan: ReplacementPlan, tol: float = 1e-9
) -> MetricTree:
    """Replace host geodesics by marked trees.

    Args:
        tree: host tree.
        plan: replacement entries; replaced geodesics may pairwise share at
            most one vertex and their interiors must be plain degree-2 paths
            containing no endpoint of another entry.
        tol: tolerance for the span check
            ``|d_repl(alpha, beta) - d_host(a, b)| <= tol``.

    Returns:
        The tree with each geodesic interior replaced; replacement vertex
        ids are prefixed ``R<k>.`` except the marks, which take the host
        endpoint ids.
    """
    paths: List[List[str]] = []
    endpoint_ids = set()
    for k, e in enumerate(plan):
        if e.a == e.b:
            raise ReplacementError("entry %d: endpoints coincide (%s)" % (k, e.a))
        tree.index(e.a), tree.index(e.b)
        e.tree.index(e.alpha), e.tree.index(e.beta)
        if e.alpha == e.beta:
            raise ReplacementError("entry %d: marks coincide (%s)" % (k, e.alpha))
        span_host = tree.distance(e.a, e.b)
        span_repl = e.tree.distance(e.alpha, e.beta)
        if abs(span_host - span_repl) > tol:
            raise ReplacementError(
                "entry %d: replacement spans %.12g between marks but host "
                "geodesic [%s, %s] has length %.12g"
                % (k, span_repl, e.a, e.b, span_host)
            )
        paths.append(geodesic(tree, e.a, e.b))
        endpoint_ids.update((e.a, e.b))

    interiors: List[set] = [set(p[1:-1]) for p in paths]
    for k, p in enumerate(paths):
        for v in p[1:-1]:
            if tree.degree(v) != 2:
                raise ReplacementError(
                    "entry %d: interior vertex %s has degree %d; replaced "
                    "geodesics must have plain degree-2 interiors"
                    % (k, v, tree.degree(v))
                )
            if v in endpoint_ids:
                raise ReplacementError(
                    "entry %d: interior vertex %s is an endpoint of another entry"
                    % (k, v)
                )
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            shared = set(paths[i]) & set(paths[j])
            if len(shared) > 1:
                raise ReplacementError(
                    "entries %d and %d overlap along %s"
                    % (i, j, sorted(shared)[:3])
                )

    removed_edges = set()
    removed_vertices = set()
    for p in paths:
        for i in range(len(p) - 1):
            removed_edges.add(frozenset((p[i], p[i + 1])))
        removed_vertices.update(p[1:-1])

    vertices = [v for v in tree.vertices if v not in removed_vertices]
    edges = [
        (a, b, w)
        for a, b, w in tree.edges
        if frozenset((a, b)) not in removed_edges
    ]
    labels = {k: v for k, v in tree.labels.items() if k not in removed_vertices}
    meta_entries = []
    for k, e in enumerate(plan):
        prefix = "R%d." % k

        def rename(v, e=e, prefix=prefix):
            if v == e.alpha:
                return e.a
            if v == e.beta:
                return e.b
            return prefix + v

        for v in e.tree.vertices:
            if v not in (e.alpha, e.beta):
                vertices.append(rename(v))
        for a, b, w in e.tree.edges:
            edges.append((rename(a), rename(b), w))
        meta_entries.append(
            {"a": e.a, "b": e.b, "alpha": e.alpha, "beta": e.beta, "prefix": prefix}
        )
    meta = {"generator": "replace", "entries": meta_entries}
    return MetricTree(vertices, edges, labels=labels, metadata=meta)


def subdivide(tree: MetricTree, eps: float) -> MetricTree:
    """Split every edge longer than eps into equal pieces of length <= eps.

    Original vertices and their pairwise distances are preserved; inserted
    vertices get ids ``sub:k``.  If no edge exceeds eps the input tree is
    returned unchanged.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    points: List[Tuple[str, str, float, str]] = []
    counter = 0
    for a, b, w in tree.edges:
        if w <= eps * (1 + 1e-12):
            continue
        k = int(math.ceil(w / eps - 1e-12))
        for j in range(1, k):
            points.append((a, b, w * j / k, "sub:%d" % counter))
            counter += 1
    if not points:
        return tree
    return _insert_points(tree, points, generator="subdivide", extra_metadata={"eps": eps})
