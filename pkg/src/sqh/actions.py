"""Finite groups acting by vertex permutations on a simplicial complex.

Groups are stored by their full element list; all subgroup algorithms are
exhaustive, which is the right trade for the tiny groups this engine
targets.  Element order is breadth-first over words in the generators, so
every least-index tie-break is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import SimplicialComplex, Subdivision, barycentric_subdivision, full_subcomplex
from .errors import (
    ActionInvalid,
    GroupTooLarge,
    InvalidParameter,
    NeedsSubdivision,
    ResourceCapExceeded,
)
from .homology import is_prime

DEFAULT_ELEMENT_CAP = 20000


def apply_perm(perm, simplex) -> tuple:
    return tuple(sorted(perm[v] for v in simplex))


def _compose(a, b) -> tuple:
    """Permutation a after b: x -> a[b[x]]."""
    return tuple(a[x] for x in b)


def _inverse(p) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


@dataclass(frozen=True)
class SubgroupHandle:
    """Element indices of a subgroup inside an ambient VertexAction."""

    indices: tuple
    order: int
    is_normal: bool
    is_abelian: bool
    via_fallback: bool = False

    def __contains__(self, idx: int) -> bool:
        return idx in set(self.indices)


class VertexAction:
    """A finite group realized as simplicial vertex permutations.

    elements[0] is the identity.  Instances are immutable; derived data
    (orbit structure, multiplication) is cached.
    """

    __slots__ = (
        "complex",
        "elements",
        "generator_indices",
        "_index",
        "_mult",
        "_inv",
        "_orders",
        "_vertex_orbits",
        "_simplex_orbits",
        "_admissible",
    )

    def __init__(self, complex: SimplicialComplex, elements, generator_indices) -> None:
        self.complex = complex
        self.elements = tuple(tuple(e) for e in elements)
        self.generator_indices = tuple(generator_indices)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._mult: dict = {}
        self._inv: dict = {}
        self._orders: dict = {}
        self._vertex_orbits = None
        self._simplex_orbits = None
        self._admissible = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def mult(self, i: int, j: int) -> int:
        key = (i, j)
        got = self._mult.get(key)
        if got is None:
            got = self._index[_compose(self.elements[i], self.elements[j])]
            self._mult[key] = got
        return got

    def inv(self, i: int) -> int:
        got = self._inv.get(i)
        if got is None:
            got = self._index[_inverse(self.elements[i])]
            self._inv[i] = got
        return got

    def element_order(self, i: int) -> int:
        got = self._orders.get(i)
        if got is None:
            n, j = 1, i
            while j != 0:
                j = self.mult(j, i)
                n += 1
            got = n
            self._orders[i] = got
        return got

    def power(self, i: int, n: int) -> int:
        out, j = 0, i
        n %= self.element_order(i)
        while n:
            if n & 1:
                out = self.mult(out, j)
            j = self.mult(j, j)
            n >>= 1
        return out

    def closure_indices(self, seed) -> tuple:
        known = {0} | set(seed)
        frontier = sorted(known)
        while frontier:
            new = []
            for i in frontier:
                for j in sorted(known):
                    for k in (self.mult(i, j), self.mult(j, i)):
                        if k not in known:
                            known.add(k)
                            new.append(k)
            frontier = new
        return tuple(sorted(known))

    def subgroup(self, indices) -> SubgroupHandle:
        idx = tuple(sorted(set(indices) | {0}))
        iset = set(idx)
        for i in idx:
            if self.inv(i) not in iset:
                raise InvalidParameter("element set not closed under inverse")
            for j in idx:
                if self.mult(i, j) not in iset:
                    raise InvalidParameter("element set not closed under multiplication")
        normal = all(
            self.mult(self.mult(g, h), self.inv(g)) in iset for g in range(self.order) for h in idx
        )
        abelian = all(self.mult(i, j) == self.mult(j, i) for i in idx for j in idx)
        return SubgroupHandle(idx, len(idx), normal, abelian)

    def trivial_subgroup(self) -> SubgroupHandle:
        return self.subgroup([0])

    def full_subgroup(self) -> SubgroupHandle:
        return self.subgroup(range(self.order))

    def restrict(self, handle: SubgroupHandle) -> "VertexAction":
        elems = [self.elements[i] for i in handle.indices]
        return VertexAction(self.complex, elems, tuple(range(1, len(elems))))

    def vertex_orbits(self):
        """(projection, orbits): orbit indices ordered by minimal vertex."""
        if self._vertex_orbits is None:
            n = self.complex.vertex_count
            proj = [-1] * n
            orbits = []
            for v in range(n):
                if proj[v] >= 0:
                    continue
                members = sorted({e[v] for e in self.elements})
                oid = len(orbits)
                for w in members:
                    proj[w] = oid
                orbits.append(tuple(members))
            self._vertex_orbits = (tuple(proj), tuple(orbits))
        return self._vertex_orbits

    def simplex_orbit_data(self):
        """Orbit id per simplex plus the admissibility verdict.

        Admissibility is checked on orbit representatives only: if g
        preserves a simplex setwise but moves a vertex, the same is true
        of every conjugate on the rest of the orbit.
        """
        if self._simplex_orbits is None:
            orbit_of: dict = {}
            n_orbits = 0
            admissible = True
            for level in self.complex.simplices():
                for s in level:
                    if s in orbit_of:
                        continue
                    oid = n_orbits
                    n_orbits += 1
                    for e in self.elements:
                        img = apply_perm(e, s)
                        if img not in orbit_of:
                            orbit_of[img] = oid
                        if admissible and img == s and any(e[v] != v for v in s):
                            admissible = False
            self._simplex_orbits = (orbit_of, n_orbits, admissible)
        return self._simplex_orbits

    def to_json_dict(self) -> dict:
        return {
            "complex": self.complex.to_json_dict(),
            "generators": [list(self.elements[i]) for i in self.generator_indices],
        }

    def __repr__(self):
        return f"VertexAction(order={self.order}, on {self.complex!r})"


def close_generators(
    complex: SimplicialComplex, generators, cap: int = DEFAULT_ELEMENT_CAP
) -> VertexAction:
    """Generate the full group breadth-first over words in the generators.

    New words extend on the right (apply the old word first, then the
    generator), so the element order is the BFS word order.
    """
    n = complex.vertex_count
    gens = []
    for g in generators:
        t = tuple(g)
        if len(t) != n or sorted(t) != list(range(n)):
            raise ActionInvalid(f"not a vertex bijection: {t}")
        for f in complex.facets:
            if not complex.has_simplex(apply_perm(t, f)):
                raise ActionInvalid(f"generator maps facet {f} outside the complex")
        gens.append(t)
    identity = tuple(range(n))
    elements = [identity]
    seen = {identity: 0}
    frontier = [identity]
    gen_indices = []
    while frontier:
        next_frontier = []
        for w in frontier:
            for g in gens:
                img = _compose(g, w)
                if img not in seen:
                    seen[img] = len(elements)
                    elements.append(img)
                    next_frontier.append(img)
                    if len(elements) > cap:
                        raise GroupTooLarge(f"closure exceeds cap {cap}")
        frontier = next_frontier
    for g in gens:
        gen_indices.append(seen[g])
    return VertexAction(complex, elements, tuple(gen_indices))


def is_admissible(action: VertexAction) -> bool:
    """True iff every element preserving a simplex setwise fixes it pointwise."""
    if action._admissible is None:
        action._admissible = action.simplex_orbit_data()[2]
    return action._admissible


def induced_action_on_subdivision(action: VertexAction, sd: Subdivision) -> VertexAction:
    """Transport the action through a barycentric subdivision of its complex."""
    if sd.source != action.complex:
        raise InvalidParameter("subdivision was not built from this action's complex")
    index = sd.vertex_of_simplex
    new_elements = []
    for e in action.elements:
        new_elements.append(tuple(index[apply_perm(e, s)] for s in sd.vertex_simplices))
    return VertexAction(sd.complex, new_elements, action.generator_indices)


def quotient_complex(action: VertexAction):
    """Orbit complex and vertex projection, when the quotient is simplicial.

    Requires admissibility plus the two regularity conditions: simplex
    vertices lie in pairwise-distinct orbits, and simplices with the same
    orbit-set of vertices lie in the same orbit.  Either failure raises
    NeedsSubdivision.
    """
    orbit_of, _, admissible = action.simplex_orbit_data()
    if not admissible:
        raise NeedsSubdivision("action is not admissible")
    proj, orbits = action.vertex_orbits()
    first_orbit_with_key: dict = {}
    for level in action.complex.simplices():
        for s in level:
            key = tuple(sorted(proj[v] for v in s))
            if len(set(key)) != len(s):
                raise NeedsSubdivision(f"simplex {s} has two vertices in one orbit")
            oid = orbit_of[s]
            prev = first_orbit_with_key.setdefault(key, oid)
            if prev != oid:
                raise NeedsSubdivision(
                    f"simplices with orbit-set {key} lie in different orbits"
                )
    facets = {tuple(sorted(proj[v] for v in f)) for f in action.complex.facets}
    quotient = SimplicialComplex(len(orbits), sorted(facets))
    return quotient, proj


@dataclass(frozen=True)
class QuotientResult:
    complex: SimplicialComplex
    projection: tuple
    subdivisions: int
    action: VertexAction


def _predicted_sd_size(f_vector) -> int:
    """Simplex count of the barycentric subdivision, from the f-vector alone."""
    max_size = len(f_vector)
    # chains[s][m] = number of chains of m+1 nested nonempty subsets topped by an s-set
    chains: list[list[int]] = [[]]
    from math import comb

    for s in range(1, max_size + 1):
        row = [1]
        for t in range(1, s):
            sub = chains[t]
            for m, cnt in enumerate(sub):
                while len(row) < m + 2:
                    row.append(0)
                row[m + 1] += comb(s, t) * cnt
        chains.append(row)
    return sum(f * sum(chains[s + 1]) for s, f in enumerate(f_vector))


def make_admissible_and_quotient(
    action: VertexAction,
    max_subdivisions: int = 3,
    simplex_cap: int | None = None,
) -> QuotientResult:
    """Subdivide (transporting the action) until the quotient is simplicial."""
    current = action
    count = 0
    while True:
        try:
            quotient, proj = quotient_complex(current)
            return QuotientResult(quotient, proj, count, current)
        except NeedsSubdivision:
            if count >= max_subdivisions:
                raise
            if simplex_cap is not None:
                predicted = _predicted_sd_size(current.complex.f_vector())
                if predicted > simplex_cap:
                    raise ResourceCapExceeded(
                        f"subdivision would reach {predicted} simplices (cap {simplex_cap})"
                    )
            sd = barycentric_subdivision(current.complex)
            current = induced_action_on_subdivision(current, sd)
            count += 1


def fixed_subcomplex(action: VertexAction, handle: SubgroupHandle) -> SimplicialComplex:
    """Full subcomplex on the vertices fixed by every element of the subgroup."""
    restricted = action.restrict(handle)
    if not is_admissible(restricted):
        raise NeedsSubdivision("restricted action is not admissible")
    fixed = [
        v
        for v in range(action.complex.vertex_count)
        if all(action.elements[i][v] == v for i in handle.indices)
    ]
    return full_subcomplex(action.complex, fixed)


def conjugacy_classes(action: VertexAction, handle: SubgroupHandle | None = None):
    """Conjugacy classes of the subgroup (default: full group), sorted by least member."""
    idx = handle.indices if handle is not None else tuple(range(action.order))
    remaining = set(idx)
    classes = []
    for i in sorted(idx):
        if i not in remaining:
            continue
        cls = {action.mult(action.mult(g, i), action.inv(g)) for g in idx}
        classes.append(tuple(sorted(cls)))
        remaining -= cls
    return classes


def normalizer(action: VertexAction, ambient: SubgroupHandle, sub: SubgroupHandle) -> tuple:
    sset = set(sub.indices)
    out = []
    for h in ambient.indices:
        hi = action.inv(h)
        if all(action.mult(action.mult(h, p), hi) in sset for p in sub.indices):
            out.append(h)
    return tuple(out)


def sylow(action: VertexAction, handle: SubgroupHandle, p: int) -> SubgroupHandle:
    """A Sylow p-subgroup of the subgroup, grown deterministically.

    Starting from the trivial group, repeatedly adjoin the least-index
    p-power-order element of the normalizer that is not yet in the
    subgroup; each step multiplies the order by p.
    """
    if not is_prime(p):
        raise InvalidParameter(f"{p} is not prime")
    target = 1
    n = handle.order
    while n % p == 0:
        target *= p
        n //= p
    current = action.subgroup([0])
    while current.order < target:
        norm = normalizer(action, handle, current)
        cset = set(current.indices)
        progressed = False
        for g in norm:
            if g in cset:
                continue
            o = action.element_order(g)
            while o % p == 0:
                o //= p
            if o != 1:
                continue
            new_idx = action.closure_indices(set(current.indices) | {g})
            m = len(new_idx)
            while m % p == 0:
                m //= p
            if m == 1:
                current = action.subgroup(new_idx)
                progressed = True
                break
        if not progressed:  # cannot happen for a genuine group; defensive
            raise InvalidParameter("Sylow growth stalled")
    return current


def center(action: VertexAction, handle: SubgroupHandle) -> SubgroupHandle:
    idx = [
        i
        for i in handle.indices
        if all(action.mult(i, j) == action.mult(j, i) for j in handle.indices)
    ]
    return action.subgroup(idx)


def central_series_cp(action: VertexAction, handle: SubgroupHandle):
    """Normal series 1 = P_0 < P_1 < ... < P_r = P with each quotient C_p.

    Each step adjoins the least-index element that is central of order p
    modulo the current term, mirroring the center-of-a-p-group argument.
    """
    order = handle.order
    if order == 1:
        return [action.subgroup([0])]
    p = None
    for cand in range(2, order + 1):
        if order % cand == 0:
            p = cand
            break
    n = order
    while n % p == 0:
        n //= p
    if n != 1 or not is_prime(p):
        raise InvalidParameter(f"subgroup of order {order} is not a p-group")
    series = [action.subgroup([0])]
    current = series[0]
    hset = set(handle.indices)
    while current.order < order:
        cset = set(current.indices)
        chosen = None
        for g in sorted(hset - cset):
            if action.power(g, p) not in cset:
                continue
            central = all(
                action.mult(action.mult(action.mult(g, h), action.inv(g)), action.inv(h)) in cset
                for h in handle.indices
            )
            if central:
                chosen = g
                break
        if chosen is None:  # impossible for a p-group; defensive
            raise InvalidParameter("central series construction stalled")
        new_idx = action.closure_indices(cset | {chosen})
        nxt = action.subgroup(new_idx)
        if nxt.order != current.order * p:
            raise InvalidParameter("central series step did not have index p")
        series.append(nxt)
        current = nxt
    return series


_CLASS_ENUM_CAP = 14


def best_abelian_normal_subgroup(action: VertexAction) -> SubgroupHandle:
    """A normal abelian subgroup of maximal order.

    Every normal abelian subgroup is the closure of a union of pairwise
    elementwise-commuting conjugacy classes, so enumerating those unions
    is a complete search.  Groups with too many classes fall back to the
    center, flagged via_fallback.
    """
    full = action.full_subgroup()
    if full.is_abelian:
        return full
    classes = [c for c in conjugacy_classes(action) if c != (0,)]
    if len(classes) > _CLASS_ENUM_CAP:
        z = center(action, full)
        return SubgroupHandle(z.indices, z.order, z.is_normal, z.is_abelian, via_fallback=True)
    m = len(classes)
    commute = [[True] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            ok = all(
                action.mult(a, b) == action.mult(b, a) for a in classes[i] for b in classes[j]
            )
            commute[i][j] = commute[j][i] = ok
    best = action.subgroup([0])
    for mask in range(1, 1 << m):
        chosen = [i for i in range(m) if mask >> i & 1]
        if any(not commute[i][j] for i in chosen for j in chosen):
            continue
        seed = set()
        for i in chosen:
            seed.update(classes[i])
        idx = action.closure_indices(seed)
        if len(idx) > best.order or (len(idx) == best.order and idx < best.indices):
            cand = action.subgroup(idx)
            if cand.is_abelian:
                if cand.order > best.order or (
                    cand.order == best.order and cand.indices < best.indices
                ):
                    best = cand
    return best


def all_subgroups(action: VertexAction, handle: SubgroupHandle | None = None):
    """Every subgroup of the given subgroup (default: full group), by closure BFS.

    Exponential in general; intended for the tiny groups in the corpus.
    """
    base = handle if handle is not None else action.full_subgroup()
    trivial = action.subgroup([0]).indices
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        next_frontier = []
        for idx in frontier:
            iset = set(idx)
            for g in base.indices:
                if g in iset:
                    continue
                new_idx = action.closure_indices(iset | {g})
                if len(new_idx) > base.order:
                    continue
                if set(new_idx) <= set(base.indices) and new_idx not in seen:
                    seen.add(new_idx)
                    next_frontier.append(new_idx)
        frontier = next_frontier
    return [action.subgroup(idx) for idx in sorted(seen, key=lambda t: (len(t), t))]
