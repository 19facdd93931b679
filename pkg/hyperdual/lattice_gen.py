"""Named lattices and the hypergraph families built on them.

Numbering convention: cells are enumerated row-major over the extents (last
axis fastest) and ``site = cell * sites_per_cell + sublattice``.

    honeycomb / colex2   A=0, B=1; bonds A(x,y)-B(x,y), A(x,y)-B(x-1,y), A(x,y)-B(x,y-1)
    kagome               A=0, B=1, C=2; intra-cell A-B, A-C, B-C;
                         B(x,y)-A(x+1,y), C(x,y)-A(x,y+1), B(x,y)-C(x+1,y-1)
    triangular           (x+1,y), (x,y+1), (x-1,y+1)
    square, cubic, chain, hypercubic   one +1 bond per axis

Spec strings look like ``square:3x3:open`` or ``chain:8`` (periodic by default).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .errors import InvalidHypergraph, UnsupportedDims
from .gf2 import BitMatrix
from .hypergraph import Hypergraph
from .utils import warn

PERIODIC = "periodic"
OPEN = "open"

# kind -> required axis count (None: any >= 1)
AXES: Dict[str, int | None] = {
    "chain": 1,
    "square": 2,
    "triangular": 2,
    "honeycomb": 2,
    "kagome": 2,
    "cubic": 3,
    "colex2": 2,
    "plaquette": 2,
    "hypercubic": None,
}

SITES_PER_CELL = {"honeycomb": 2, "colex2": 2, "kagome": 3}

# (sublattice_a, sublattice_b, cell offset)
Bond = Tuple[int, int, Tuple[int, ...]]

_BONDS: Dict[str, List[Bond]] = {
    "triangular": [(0, 0, (1, 0)), (0, 0, (0, 1)), (0, 0, (-1, 1))],
    "honeycomb": [(0, 1, (0, 0)), (0, 1, (-1, 0)), (0, 1, (0, -1))],
    "kagome": [
        (0, 1, (0, 0)),
        (0, 2, (0, 0)),
        (1, 2, (0, 0)),
        (1, 0, (1, 0)),
        (2, 0, (0, 1)),
        (1, 2, (1, -1)),
    ],
}
_BONDS["colex2"] = _BONDS["honeycomb"]

# Toric code in a field: thermodynamic-limit (h/J)_c from series and Monte Carlo studies.
LITERATURE_CRITICAL_RATIO = {
    "honeycomb": 0.469,
    "kagome": 0.339,
    "triangular": 0.209,
    "square": 0.328,
    "cubic": 0.194,
}


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    boundary: str = OPEN
    multigraph: bool = False

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) references a vertex outside 0..{self.num_vertices - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        if not self.multigraph:
            counts = Counter(self.canonical_edges())
            repeated = [e for e, n in counts.items() if n > 1]
            if repeated:
                raise ValueError(f"parallel edges {repeated[0]}; build with multigraph=True to permit")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def canonical_edges(self) -> Tuple[Tuple[int, int], ...]:
        """Edges as sorted pairs, sorted. Equal for graphs that differ only in edge order."""
        return tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.num_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class LatticeSpec:
    kind: str
    dims: Tuple[int, ...]
    boundary: str = PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.kind not in AXES:
            raise UnsupportedDims(f"unknown lattice kind {self.kind!r} (choose from {', '.join(AXES)})")
        if self.boundary not in (PERIODIC, OPEN):
            raise UnsupportedDims(f"boundary must be '{PERIODIC}' or '{OPEN}', got {self.boundary!r}")
        want = AXES[self.kind]
        if not self.dims or (want is not None and len(self.dims) != want):
            raise UnsupportedDims(f"{self.kind} needs {want or 'at least 1'} extent(s), got {len(self.dims)}")
        if any(d < 1 for d in self.dims):
            raise UnsupportedDims(f"extents must be positive, got {self.dims}")
        if self.boundary == PERIODIC and any(d < 2 for d in self.dims):
            raise UnsupportedDims(f"periodic extents must be >= 2 (extent 1 wraps bonds onto themselves), got {self.dims}")

    @property
    def sites_per_cell(self) -> int:
        return SITES_PER_CELL.get(self.kind, 1)

    @property
    def num_cells(self) -> int:
        return int(np.prod(self.dims))

    @property
    def num_sites(self) -> int:
        return self.num_cells * self.sites_per_cell

    def site(self, cell: Sequence[int], sublattice: int = 0) -> int:
        wrapped = tuple(c % d for c, d in zip(cell, self.dims))
        return int(np.ravel_multi_index(wrapped, self.dims)) * self.sites_per_cell + sublattice

    def cells(self) -> Iterator[Tuple[int, ...]]:
        return np.ndindex(*self.dims)

    def __str__(self) -> str:
        return f"{self.kind}:{'x'.join(map(str, self.dims))}:{self.boundary}"


def parse_lattice_spec(text: str) -> LatticeSpec:
    """``kind:AxB[:boundary]`` -> LatticeSpec. Raises UnsupportedDims on anything malformed."""
    parts = text.strip().split(":")
    if len(parts) not in (2, 3):
        raise UnsupportedDims(f"expected 'kind:dims[:boundary]', got {text!r}")
    kind, dims_s = parts[0].strip().lower(), parts[1].strip().lower()
    boundary = parts[2].strip().lower() if len(parts) == 3 else PERIODIC
    try:
        dims = tuple(int(x) for x in dims_s.split("x"))
    except ValueError:
        raise UnsupportedDims(f"bad extents {dims_s!r} in {text!r}") from None
    return LatticeSpec(kind, dims, boundary)


def _bonds_for(spec: LatticeSpec) -> List[Bond]:
    if spec.kind in _BONDS:
        return _BONDS[spec.kind]
    n = len(spec.dims)
    return [(0, 0, tuple(1 if a == axis else 0 for a in range(n))) for axis in range(n)]


def build_graph(spec: LatticeSpec) -> Graph:
    edges: List[Tuple[int, int]] = []
    for cell in spec.cells():
        for a, b, offset in _bonds_for(spec):
            other = tuple(c + o for c, o in zip(cell, offset))
            if spec.boundary == OPEN and any(not 0 <= c < d for c, d in zip(other, spec.dims)):
                continue
            edges.append((spec.site(cell, a), spec.site(other, b)))
    multigraph = len(set(tuple(sorted(e)) for e in edges)) != len(edges)
    return Graph(spec.num_sites, tuple(edges), spec.boundary, multigraph)


def toric_code_hypergraph(g: Graph) -> Hypergraph:
    """Qubits on graph edges; one star hyperedge per graph vertex (labelled ``A<v>``)."""
    stars: List[List[int]] = [[] for _ in range(g.num_vertices)]
    for q, (u, v) in enumerate(g.edges):
        stars[u].append(q)
        stars[v].append(q)
    keep = [v for v in range(g.num_vertices) if stars[v]]
    if len(keep) != g.num_vertices:
        warn(f"[TC] skipping {g.num_vertices - len(keep)} isolated graph vertex/vertices (empty stars)")
    incidence = BitMatrix.from_supports(g.num_edges, [stars[v] for v in keep])
    labels = tuple(f"A{v}" for v in keep)
    qubits = tuple(f"q{u}-{v}" for u, v in g.edges)
    h = Hypergraph(g.num_edges, incidence, qubits, labels, allow_duplicates=True)
    if h.has_duplicate_edges():
        warn("[TC] some stars coincide (extent-2 wrapping); keeping them as duplicate hyperedges")
    return h


def colex2_hypergraph(spec: LatticeSpec) -> Hypergraph:
    """Hexagonal 2-colex: one vertex per site, one 6-site hyperedge per plaquette."""
    if spec.kind != "colex2":
        raise UnsupportedDims(f"colex2_hypergraph needs kind 'colex2', got {spec.kind!r}")
    if spec.boundary != PERIODIC:
        raise UnsupportedDims("colex2 lattices are built periodic only")
    if any(d % 3 for d in spec.dims):
        warn(f"[COLEX] extents {spec.dims} are not multiples of 3; plaquettes are not three-colourable")
    plaquettes = []
    for x, y in spec.cells():
        plaquettes.append([
            spec.site((x, y), 1),
            spec.site((x + 1, y), 0),
            spec.site((x + 1, y), 1),
            spec.site((x + 1, y + 1), 0),
            spec.site((x, y + 1), 1),
            spec.site((x, y + 1), 0),
        ])
    return Hypergraph(spec.num_sites, BitMatrix.from_supports(spec.num_sites, plaquettes), allow_duplicates=True)


def plaquette_colors(spec: LatticeSpec) -> Tuple[int, ...]:
    """Colour 0/1/2 per colex2 plaquette (cell order); adjacent plaquettes always differ."""
    if spec.kind != "colex2" or spec.boundary != PERIODIC:
        raise UnsupportedDims("plaquette colouring is defined for periodic colex2 lattices")
    if any(d % 3 for d in spec.dims):
        raise UnsupportedDims(f"periodic extents {spec.dims} break three-colourability (need multiples of 3)")
    return tuple((x - y) % 3 for x, y in spec.cells())


def selfdual_hypercubic(d: int, dims: Sequence[int]) -> Hypergraph:
    """Sites of a periodic d-dimensional lattice; one hyperedge per unit cell holding its 2**d corners."""
    spec = LatticeSpec("hypercubic", tuple(dims), PERIODIC)
    if len(spec.dims) != d:
        raise UnsupportedDims(f"d={d} but {len(spec.dims)} extents given")
    corners = list(itertools.product((0, 1), repeat=d))
    cells = []
    collapsed = False
    for cell in spec.cells():
        sites = [spec.site(tuple(c + o for c, o in zip(cell, off))) for off in corners]
        collapsed |= len(set(sites)) != len(sites)
        cells.append(sites)
    if collapsed:
        warn(f"[SELFDUAL] corners coincide on extents {spec.dims}; repeated sites cancel mod 2")
    h = Hypergraph(spec.num_sites, BitMatrix.from_supports(spec.num_sites, cells), allow_duplicates=True)
    if h.has_duplicate_edges():
        warn(f"[SELFDUAL] extents {spec.dims} make some unit cells coincide; keeping duplicate hyperedges")
    return h


def selfdual_chain(n: int) -> Hypergraph:
    if n < 2:
        raise UnsupportedDims("selfdual_chain needs n >= 2")
    return selfdual_hypercubic(1, (n,))


def selfdual_plaquette(l: int) -> Hypergraph:
    if l < 2:
        raise UnsupportedDims("selfdual_plaquette needs l >= 2")
    return selfdual_hypercubic(2, (l, l))


def as_graph(h: Hypergraph) -> Graph:
    """Inverse of reading a size-2 hypergraph as a graph. Fails if any edge has another size."""
    pairs = []
    for i, edge in enumerate(h.edges):
        if len(edge) != 2:
            raise InvalidHypergraph(f"edge {i + 1} has size {len(edge)}; only size-2 edges form a graph")
        pairs.append(edge)
    multigraph = len(set(pairs)) != len(pairs)
    return Graph(h.num_vertices, tuple(pairs), OPEN, multigraph)


def generate(spec: LatticeSpec | str) -> Hypergraph:
    """Hypergraph for a spec string: TC for graph lattices, the 2-colex, or a self-dual family."""
    if isinstance(spec, str):
        spec = parse_lattice_spec(spec)
    if spec.kind == "colex2":
        return colex2_hypergraph(spec)
    if spec.kind in ("plaquette", "hypercubic"):
        if spec.boundary != PERIODIC:
            raise UnsupportedDims(f"{spec.kind} models are periodic only")
        return selfdual_hypercubic(len(spec.dims), spec.dims)
    return toric_code_hypergraph(build_graph(spec))
