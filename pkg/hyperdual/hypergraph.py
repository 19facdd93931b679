"""Hypergraphs as binary incidence matrices, and the three constructions built on them.

A hypergraph on K vertices with N hyperedges is stored as an N x K BitMatrix
whose row m is the edge vector of edge m. From it we derive:

- the dual hypergraph (vertices and edges switched: transpose),
- the orthogonal hypergraph (a GF(2) nullspace basis: even overlap with every edge),
- a maximal independent edge set (greedy in input order).

Text format (1-indexed vertices, ``#`` starts a comment)::

    K 5
    E 4
    e 1
    e 1 2 4 5
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import DuplicateEdges, HypergraphFormatError, InvalidHypergraph, SearchBudgetExceeded
from .gf2 import BitMatrix, gf2_nullspace, gf2_rank, greedy_independent_rows
from .utils import warn


@dataclass(frozen=True, eq=False)
class Hypergraph:
    num_vertices: int
    incidence: BitMatrix
    vertex_labels: Optional[Tuple[str, ...]] = None
    edge_labels: Optional[Tuple[str, ...]] = None
    allow_duplicates: bool = False

    def __post_init__(self):
        if self.num_vertices < 0:
            raise InvalidHypergraph("num_vertices must be non-negative")
        if self.incidence.cols != self.num_vertices:
            raise InvalidHypergraph(f"edge vectors have width {self.incidence.cols}, expected K={self.num_vertices}")
        sizes = self.incidence.popcounts()
        empty = np.flatnonzero(sizes == 0)
        if empty.size:
            raise InvalidHypergraph(f"edge {int(empty[0]) + 1} is empty (all-zero edge vector)")
        if not self.allow_duplicates:
            seen: Dict[bytes, int] = {}
            for i in range(self.incidence.rows):
                key = self.incidence.words[i].tobytes()
                if key in seen:
                    raise DuplicateEdges(f"edges {seen[key] + 1} and {i + 1} are identical")
                seen[key] = i
        if self.vertex_labels is not None and len(self.vertex_labels) != self.num_vertices:
            raise InvalidHypergraph("vertex_labels length differs from K")
        if self.edge_labels is not None and len(self.edge_labels) != self.incidence.rows:
            raise InvalidHypergraph("edge_labels length differs from the edge count")

    @classmethod
    def from_edges(
        cls,
        num_vertices: int,
        edges: Iterable[Iterable[int]],
        *,
        allow_duplicates: bool = False,
        vertex_labels: Optional[Sequence[str]] = None,
        edge_labels: Optional[Sequence[str]] = None,
    ) -> "Hypergraph":
        """Build from 0-indexed vertex lists. A vertex listed twice in one edge cancels (mod 2)."""
        return cls(
            num_vertices,
            BitMatrix.from_supports(num_vertices, edges),
            tuple(vertex_labels) if vertex_labels is not None else None,
            tuple(edge_labels) if edge_labels is not None else None,
            allow_duplicates,
        )

    @property
    def num_edges(self) -> int:
        return self.incidence.rows

    @property
    def edges(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(self.incidence.row_support(i) for i in range(self.num_edges))

    def edge_sizes(self) -> np.ndarray:
        return self.incidence.popcounts()

    def vertex_degrees(self) -> np.ndarray:
        if self.num_edges == 0:
            return np.zeros(self.num_vertices, dtype=np.int64)
        return self.incidence.to_dense().sum(axis=0, dtype=np.int64)

    def has_duplicate_edges(self) -> bool:
        keys = {self.incidence.words[i].tobytes() for i in range(self.num_edges)}
        return len(keys) != self.num_edges

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self.incidence == other.incidence

    def __hash__(self) -> int:
        return hash((self.num_vertices, self.incidence))

    def __repr__(self) -> str:
        return f"Hypergraph(K={self.num_vertices}, N={self.num_edges})"


@dataclass(frozen=True)
class IndependentSet:
    edge_indices: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.edge_indices)


@dataclass(frozen=True)
class SelfDualWitness:
    """Relabeling under which the dual equals the original.

    ``vertex_map[i]`` is the vertex of h standing for dual vertex i (edge i of h);
    ``edge_map[j]`` is the edge of h standing for dual edge j (vertex j of h).
    """

    vertex_map: Tuple[int, ...]
    edge_map: Tuple[int, ...]

    def verify(self, h: Hypergraph) -> bool:
        m = h.incidence.to_dense() if h.num_edges else np.zeros((0, h.num_vertices), dtype=np.uint8)
        t = m.T
        if t.shape != m.shape:
            return False
        relabeled = np.zeros_like(m)
        relabeled[np.ix_(list(self.edge_map), list(self.vertex_map))] = t
        return bool(np.array_equal(relabeled, m))


# ---------------- constructions ---------------- #

def rank(h: Hypergraph) -> int:
    return gf2_rank(h.incidence)


def dual(h: Hypergraph) -> Hypergraph:
    """Transpose: one dual vertex per edge of h, one dual edge per vertex of h.

    Vertices of h that lie in no edge would give empty dual edges; they are
    dropped with a warning.
    """
    t = h.incidence.transpose()
    sizes = t.popcounts()
    keep = [i for i in range(t.rows) if sizes[i] > 0]
    if len(keep) != t.rows:
        dropped = [i + 1 for i in range(t.rows) if sizes[i] == 0]
        warn(f"[DUAL] dropping {len(dropped)} isolated vertex/vertices {dropped}: their dual edges are empty")
        t = t.take_rows(keep)
    edge_labels = None
    if h.vertex_labels is not None:
        edge_labels = tuple(h.vertex_labels[i] for i in keep)
    return Hypergraph(h.num_edges, t, h.edge_labels, edge_labels, allow_duplicates=True)


def isolated_vertices(h: Hypergraph) -> List[int]:
    return [int(v) for v in np.flatnonzero(h.vertex_degrees() == 0)]


def orthogonal(h: Hypergraph) -> Hypergraph:
    """Same vertices; edges are the canonical nullspace basis of h's incidence matrix."""
    return Hypergraph(h.num_vertices, gf2_nullspace(h.incidence), h.vertex_labels)


def independent_set(h: Hypergraph) -> IndependentSet:
    return IndependentSet(tuple(greedy_independent_rows(h.incidence)))


def restrict_edges(h: Hypergraph, indices: Sequence[int]) -> Hypergraph:
    labels = tuple(h.edge_labels[i] for i in indices) if h.edge_labels is not None else None
    return Hypergraph(h.num_vertices, h.incidence.take_rows(indices), h.vertex_labels, labels, h.allow_duplicates)


def reduce_independent(h: Hypergraph) -> Tuple[Hypergraph, Tuple[int, ...]]:
    """Keep the greedy independent edges; also return the dropped (dependent) edge indices."""
    chosen = independent_set(h).edge_indices
    chosen_set = set(chosen)
    dropped = tuple(i for i in range(h.num_edges) if i not in chosen_set)
    if not dropped:
        return h, ()
    return restrict_edges(h, chosen), dropped


# ---------------- self-duality ---------------- #

def _search_order(adj: np.ndarray) -> List[int]:
    """BFS order over the co-occurrence graph so each new vertex is constrained by assigned ones."""
    n = adj.shape[0]
    order: List[int] = []
    seen = np.zeros(n, dtype=bool)
    degree = adj.sum(axis=1)
    for root in np.argsort(-degree, kind="stable"):
        if seen[root]:
            continue
        seen[root] = True
        queue = [int(root)]
        while queue:
            a = queue.pop(0)
            order.append(a)
            for b in np.flatnonzero(adj[a] & ~seen):
                seen[b] = True
                queue.append(int(b))
    return order


def is_self_dual(h: Hypergraph, node_budget: int | None = None) -> Optional[SelfDualWitness]:
    """Exact search for a relabeling with dual(h) == h.

    Returns the witness, or None if none exists. Raises SearchBudgetExceeded
    when the backtracking visits more than ``node_budget`` nodes.
    """
    budget = config.SELF_DUAL_NODE_BUDGET if node_budget is None else node_budget
    k, n = h.num_vertices, h.num_edges
    if k != n:
        return None
    if n == 0:
        return SelfDualWitness((), ())
    m = h.incidence.to_dense().astype(np.int64)
    if sorted(m.sum(axis=1)) != sorted(m.sum(axis=0)):
        return None

    # co-occurrence of dual vertices (edges of h) and of vertices of h
    c_dual = m @ m.T
    c_h = m.T @ m
    order = _search_order((c_dual > 0) & ~np.eye(n, dtype=bool))
    assign = np.full(n, -1, dtype=np.int64)
    used = np.zeros(n, dtype=bool)
    target_rows: Dict[bytes, List[int]] = {}
    for e in range(n):
        target_rows.setdefault(m[e].astype(np.uint8).tobytes(), []).append(e)
    nodes = 0

    def leaf() -> Optional[SelfDualWitness]:
        relabeled = np.zeros((n, n), dtype=np.uint8)
        relabeled[:, assign] = m.T
        pools = {key: list(v) for key, v in target_rows.items()}
        edge_map = []
        for j in range(n):
            pool = pools.get(relabeled[j].tobytes())
            if not pool:
                return None
            edge_map.append(pool.pop(0))
        return SelfDualWitness(tuple(int(v) for v in assign), tuple(edge_map))

    def extend(depth: int) -> Optional[SelfDualWitness]:
        nonlocal nodes
        if depth == n:
            return leaf()
        a = order[depth]
        placed = order[:depth]
        ok = (~used) & (np.diag(c_h) == c_dual[a, a])
        if placed:
            ok &= np.all(c_h[:, assign[placed]] == c_dual[a, placed], axis=1)
        for v in np.flatnonzero(ok):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(budget)
            assign[a] = v
            used[v] = True
            found = extend(depth + 1)
            if found is not None:
                return found
            used[v] = False
            assign[a] = -1
        return None

    return extend(0)


# ---------------- text format ---------------- #

def parse_hypergraph(text: str, *, allow_duplicates: bool = False) -> Hypergraph:
    header: Dict[str, int] = {}
    edges: List[List[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tag, *rest = line.split()
        try:
            values = [int(x) for x in rest]
        except ValueError:
            raise HypergraphFormatError(f"non-integer token in {line!r}", lineno) from None
        if tag in ('K', 'E'):
            if len(values) != 1 or values[0] < 0:
                raise HypergraphFormatError(f"'{tag}' expects one non-negative count", lineno)
            if tag in header:
                raise HypergraphFormatError(f"repeated '{tag}' header", lineno)
            if tag == 'E' and 'K' not in header:
                raise HypergraphFormatError("'E' before 'K'", lineno)
            header[tag] = values[0]
        elif tag == 'e':
            if 'E' not in header:
                raise HypergraphFormatError("edge line before the 'K'/'E' header", lineno)
            if not values:
                raise HypergraphFormatError("empty edge", lineno)
            if len(set(values)) != len(values):
                raise HypergraphFormatError("vertex repeated within an edge", lineno)
            bad = [v for v in values if not 1 <= v <= header['K']]
            if bad:
                raise HypergraphFormatError(f"vertex {bad[0]} outside 1..{header['K']}", lineno)
            edges.append([v - 1 for v in values])
        else:
            raise HypergraphFormatError(f"unknown line tag {tag!r}", lineno)
    if 'K' not in header or 'E' not in header:
        raise HypergraphFormatError("missing 'K' or 'E' header")
    if len(edges) != header['E']:
        raise HypergraphFormatError(f"header announces {header['E']} edges, found {len(edges)}")
    try:
        return Hypergraph.from_edges(header['K'], edges, allow_duplicates=allow_duplicates)
    except InvalidHypergraph as exc:
        raise HypergraphFormatError(str(exc)) from exc


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"K {h.num_vertices}", f"E {h.num_edges}"]
    for edge in h.edges:
        lines.append("e " + " ".join(str(v + 1) for v in edge))
    return "\n".join(lines) + "\n"


def read_hypergraph(path: str | Path, *, allow_duplicates: bool = False) -> Hypergraph:
    return parse_hypergraph(Path(path).read_text(encoding='utf-8'), allow_duplicates=allow_duplicates)


def write_hypergraph(h: Hypergraph, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_hypergraph(h), encoding='utf-8')
