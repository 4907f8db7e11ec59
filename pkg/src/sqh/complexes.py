"""Finite abstract simplicial complexes and their integral chain complexes.

Simplices are stored as strictly increasing tuples of vertex indices.
Orientation follows the ascending-vertex convention: the boundary of a
simplex drops its i-th vertex with sign (-1)^i.  Complexes are immutable
after construction; derived data (the face lattice, chain complexes) is
cached on the instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidParameter
from .homology import SparseIntMatrix


class SimplicialComplex:
    """A finite abstract simplicial complex given by its maximal faces.

    Facets are deduplicated and maximality-filtered on construction, so
    the stored facet list is canonical: lexicographically sorted tuples,
    none contained in another.
    """

    __slots__ = ("vertex_count", "facets", "_simplices", "_simplex_set")

    def __init__(self, vertex_count: int, facets) -> None:
        if vertex_count < 0:
            raise InvalidParameter("vertex_count must be nonnegative")
        canon = set()
        for f in facets:
            t = tuple(sorted(set(f)))
            if not t:
                continue
            if t[0] < 0 or t[-1] >= vertex_count:
                raise InvalidParameter(f"facet {t} out of range [0, {vertex_count})")
            canon.add(t)
        self.vertex_count = vertex_count
        self.facets = _maximal(canon)
        self._simplices = None
        self._simplex_set = None

    @property
    def dimension(self) -> int:
        """Max facet size minus one; -1 for the empty complex."""
        if not self.facets:
            return -1
        return max(len(f) for f in self.facets) - 1

    def simplices(self):
        """All simplices grouped by dimension: a list of lex-sorted tuples per degree."""
        if self._simplices is None:
            seen = set()
            for f in self.facets:
                for k in range(1, len(f) + 1):
                    seen.update(itertools.combinations(f, k))
            by_dim = [[] for _ in range(self.dimension + 1)]
            for s in seen:
                by_dim[len(s) - 1].append(s)
            for level in by_dim:
                level.sort()
            self._simplices = [tuple(level) for level in by_dim]
        return self._simplices

    def simplex_set(self):
        if self._simplex_set is None:
            self._simplex_set = frozenset(s for level in self.simplices() for s in level)
        return self._simplex_set

    def has_simplex(self, simplex) -> bool:
        return tuple(simplex) in self.simplex_set()

    def f_vector(self):
        return tuple(len(level) for level in self.simplices())

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.facets == other.facets

    def __hash__(self):
        return hash((self.vertex_count, self.facets))

    def __repr__(self):
        return f"SimplicialComplex(vertices={self.vertex_count}, facets={len(self.facets)}, dim={self.dimension})"

    def to_json_dict(self) -> dict:
        return {"vertex_count": self.vertex_count, "facets": [list(f) for f in self.facets]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SimplicialComplex":
        return cls(data["vertex_count"], data["facets"])


def _maximal(simplex_set) -> tuple:
    """Drop every set contained in a strictly larger one; return lex-sorted tuples."""
    by_size = sorted(simplex_set, key=len, reverse=True)
    vertex_index: dict[int, set] = {}
    kept = []
    for t in by_size:
        candidates = None
        contained = False
        for v in t:
            hits = vertex_index.get(v)
            if hits is None:
                candidates = None
                break
            candidates = hits if candidates is None else candidates & hits
            if not candidates:
                break
        else:
            contained = bool(candidates)
        if contained:
            continue
        kept.append(t)
        for v in t:
            vertex_index.setdefault(v, set()).add(t)
    kept.sort()
    return tuple(kept)


@dataclass(frozen=True)
class OrientedChainComplex:
    """Simplicial chain complex with integer coefficients.

    boundaries[k] is the matrix of d_k : C_k -> C_{k-1}; boundaries[0] has
    zero rows.  basis_labels[k] lists the k-simplices indexing the columns
    of d_k, in lexicographic order.
    """

    ranks: tuple
    boundaries: tuple
    basis_labels: tuple

    def verify(self) -> None:
        for k in range(1, len(self.boundaries)):
            a, b = self.boundaries[k - 1], self.boundaries[k]
            if b.cols != self.ranks[k] or b.rows != (self.ranks[k - 1] if k >= 1 else 0):
                raise InvalidParameter("boundary matrix shape mismatch")
            if k >= 1 and not a.compose_is_zero(b):
                raise InvalidParameter(f"d_{k-1} d_{k} != 0")


EMPTY_COMPLEX = SimplicialComplex(0, [])


def polygon(length: int) -> SimplicialComplex:
    """Cycle graph on `length` >= 3 vertices: the minimal simplicial circle."""
    if length < 3:
        raise InvalidParameter("a polygon needs at least 3 vertices")
    edges = [(i, (i + 1) % length) for i in range(length)]
    return SimplicialComplex(length, edges)


def zero_sphere() -> SimplicialComplex:
    """Two isolated points."""
    return SimplicialComplex(2, [(0,), (1,)])


def join(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; k1's vertices come first, k2's are shifted past them."""
    n = k1.vertex_count + k2.vertex_count
    shift = k1.vertex_count
    if not k2.facets:
        return SimplicialComplex(n, k1.facets)
    if not k1.facets:
        return SimplicialComplex(n, [tuple(v + shift for v in f) for f in k2.facets])
    facets = [f1 + tuple(v + shift for v in f2) for f1 in k1.facets for f2 in k2.facets]
    return SimplicialComplex(n, facets)


@dataclass(frozen=True)
class Subdivision:
    """Barycentric subdivision of `source`, plus the simplex-to-vertex bijection."""

    complex: SimplicialComplex
    source: SimplicialComplex
    vertex_simplices: tuple          # new vertex index -> source simplex
    vertex_of_simplex: dict          # source simplex -> new vertex index


def barycentric_subdivision(k: SimplicialComplex) -> Subdivision:
    """Flag complex of the face poset: vertices = simplices of k, facets = maximal flags."""
    all_simplices = [s for level in k.simplices() for s in level]
    all_simplices.sort(key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(all_simplices)}
    facets = []
    for f in k.facets:
        for perm in itertools.permutations(f):
            chain = []
            for i in range(1, len(perm) + 1):
                chain.append(index[tuple(sorted(perm[:i]))])
            facets.append(tuple(sorted(chain)))
    sd = SimplicialComplex(len(all_simplices), facets)
    return Subdivision(sd, k, tuple(all_simplices), index)


def euler_characteristic(k: SimplicialComplex) -> int:
    return sum((-1) ** i * c for i, c in enumerate(k.f_vector()))


def full_subcomplex(k: SimplicialComplex, vertices) -> SimplicialComplex:
    """All simplices of k whose vertices lie in the given set; keeps k's labels."""
    vs = set(vertices)
    for v in vs:
        if not (0 <= v < k.vertex_count):
            raise InvalidParameter(f"vertex {v} out of range")
    facets = []
    for f in k.facets:
        t = tuple(v for v in f if v in vs)
        if t:
            facets.append(t)
    return SimplicialComplex(k.vertex_count, facets)


def chain_complex(k: SimplicialComplex) -> OrientedChainComplex:
    """Oriented simplicial chains of k; verifies dd = 0 before returning."""
    levels = k.simplices()
    ranks = tuple(len(level) for level in levels)
    boundaries = []
    for dim, level in enumerate(levels):
        cols = {}
        if dim == 0:
            mat = SparseIntMatrix(0, len(level), {})
        else:
            prev_index = {s: i for i, s in enumerate(levels[dim - 1])}
            for j, s in enumerate(level):
                col = {}
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    col[prev_index[face]] = -1 if i % 2 else 1
                cols[j] = col
            mat = SparseIntMatrix.from_columns(len(levels[dim - 1]), len(level), cols)
        boundaries.append(mat)
    cc = OrientedChainComplex(ranks, tuple(boundaries), tuple(levels))
    cc.verify()
    return cc
