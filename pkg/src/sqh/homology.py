"""Exact Betti numbers over Q and prime fields for integer chain complexes.

The engine is pure stdlib: sparse matrices are dicts of Python ints, so
fraction-free elimination never overflows.  Ranks come from sparse
Gaussian elimination with min-degree (Markowitz-style) pivoting; integral
structure comes from a Smith-normal-form routine that first sweeps out
unit pivots sparsely and finishes with gcd pivoting.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from math import gcd
from typing import TYPE_CHECKING

from .errors import CorruptComplex, InvalidParameter, SnfTooLarge

if TYPE_CHECKING:  # pragma: no cover
    from .complexes import OrientedChainComplex, SimplicialComplex

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all n below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (p is None) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not (2 <= self.p <= 2**31) or not is_prime(self.p):
                raise InvalidParameter(f"{self.p} is not a prime <= 2^31")

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    def label(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    @classmethod
    def parse(cls, label: str) -> "FieldSpec":
        if label == "Q":
            return cls(None)
        if label.startswith("Fp:"):
            return cls(int(label[3:]))
        raise InvalidParameter(f"unknown field label {label!r}")

    def sort_key(self):
        return (0, 0) if self.p is None else (1, self.p)


RATIONALS = FieldSpec(None)
F2 = FieldSpec(2)
F3 = FieldSpec(3)
F5 = FieldSpec(5)


class SparseIntMatrix:
    """Immutable sparse integer matrix, stored column-major."""

    __slots__ = ("rows", "cols", "_columns")

    def __init__(self, rows: int, cols: int, entries=None) -> None:
        self.rows = rows
        self.cols = cols
        columns = [None] * cols
        if entries:
            for (r, c), v in entries.items():
                if v == 0:
                    continue
                if not (0 <= r < rows and 0 <= c < cols):
                    raise InvalidParameter("entry out of range")
                if columns[c] is None:
                    columns[c] = {}
                columns[c][r] = v
        self._columns = columns

    @classmethod
    def from_columns(cls, rows: int, cols: int, coldict) -> "SparseIntMatrix":
        m = cls(rows, cols)
        for c, col in coldict.items():
            filtered = {r: v for r, v in col.items() if v != 0}
            if filtered:
                m._columns[c] = filtered
        return m

    def column(self, j: int) -> dict:
        col = self._columns[j]
        return col if col is not None else {}

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._columns if c)

    def iter_entries(self):
        for c, col in enumerate(self._columns):
            if col:
                for r, v in col.items():
                    yield r, c, v

    def transpose(self) -> "SparseIntMatrix":
        cols = {}
        for r, c, v in self.iter_entries():
            cols.setdefault(r, {})[c] = v
        return SparseIntMatrix.from_columns(self.cols, self.rows, cols)

    def compose_is_zero(self, other: "SparseIntMatrix") -> bool:
        """True iff self @ other is the zero matrix."""
        if self.cols != other.rows:
            raise InvalidParameter("shape mismatch in composition")
        for j in range(other.cols):
            acc = {}
            for r, v in other.column(j).items():
                for r2, v2 in self.column(r).items():
                    acc[r2] = acc.get(r2, 0) + v * v2
            if any(acc.values()):
                return False
        return True

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.iter_entries():
            out[r][c] = v
        return out

    def to_json_dict(self) -> dict:
        entries = sorted(((c, r, v) for r, c, v in self.iter_entries()))
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, v] for c, r, v in entries],
        }

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


@dataclass(frozen=True)
class ElementaryDivisors:
    """Nonzero Smith divisors d_1 | d_2 | ... | d_r of an integer matrix."""

    divisors: tuple

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def rank_mod(self, p: int) -> int:
        return sum(1 for d in self.divisors if d % p != 0)

    def torsion(self) -> tuple:
        return tuple(d for d in self.divisors if d > 1)


def _row_structure(m: SparseIntMatrix):
    rows_map: dict = {}
    col_rows: dict = {}
    for r, c, v in m.iter_entries():
        rows_map.setdefault(r, {})[c] = v
        col_rows.setdefault(c, set()).add(r)
    return rows_map, col_rows


def _pop_min_degree_column(heap, col_rows):
    """Lazy heap pop: returns an active column of currently-minimal degree."""
    while heap:
        deg, c = heapq.heappop(heap)
        current = col_rows.get(c)
        if current is None:
            continue
        if not current:
            del col_rows[c]
            continue
        if len(current) != deg:
            heapq.heappush(heap, (len(current), c))
            continue
        return c
    return None


def rank_mod_p(m: SparseIntMatrix, p: int) -> int:
    """Rank over F_p by sparse elimination, min-degree column pivoting."""
    if not is_prime(p):
        raise InvalidParameter(f"{p} is not prime")
    rows_map: dict = {}
    col_rows: dict = {}
    for r, c, v in m.iter_entries():
        v %= p
        if v:
            rows_map.setdefault(r, {})[c] = v
            col_rows.setdefault(c, set()).add(r)
    heap = [(len(rs), c) for c, rs in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while True:
        c = _pop_min_degree_column(heap, col_rows)
        if c is None:
            break
        r = min(col_rows[c], key=lambda rr: (len(rows_map[rr]), rr))
        pivot_row = rows_map.pop(r)
        inv = pow(pivot_row[c], -1, p)
        for cc in pivot_row:
            col_rows[cc].discard(r)
        others = sorted(col_rows.pop(c))
        # eliminate the pivot column from every other active row
        for r2 in others:
            row2 = rows_map[r2]
            f = row2[c] * inv % p
            for cc, vv in pivot_row.items():
                nv = (row2.get(cc, 0) - f * vv) % p
                if nv:
                    if cc not in row2 and cc in col_rows:
                        col_rows[cc].add(r2)
                    row2[cc] = nv
                else:
                    if cc in row2:
                        del row2[cc]
                        if cc in col_rows:
                            col_rows[cc].discard(r2)
            if not row2:
                del rows_map[r2]
        rank += 1
    return rank


def _normalize_int_row(row: dict) -> None:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for k in row:
            row[k] //= g


def _rank_over_q_certified(m: SparseIntMatrix) -> int:
    """Exact rational rank via fraction-free sparse elimination.

    Rows are integer vectors defined up to scale; each update is
    row2 <- v*row2 - a*pivot followed by content removal, so all
    arithmetic stays in Z.
    """
    rows_map, col_rows = _row_structure(m)
    for row in rows_map.values():
        _normalize_int_row(row)
    heap = [(len(rs), c) for c, rs in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while True:
        c = _pop_min_degree_column(heap, col_rows)
        if c is None:
            break
        r = min(col_rows[c], key=lambda rr: (len(rows_map[rr]), abs(rows_map[rr][c]), rr))
        pivot_row = rows_map.pop(r)
        v = pivot_row[c]
        for cc in pivot_row:
            col_rows[cc].discard(r)
        others = sorted(col_rows.pop(c))
        for r2 in others:
            row2 = rows_map[r2]
            a = row2[c]
            for cc in row2:
                row2[cc] *= v
            for cc, vv in pivot_row.items():
                nv = row2.get(cc, 0) - a * vv
                if nv:
                    if cc not in row2 and cc in col_rows:
                        col_rows[cc].add(r2)
                    row2[cc] = nv
                else:
                    if cc in row2:
                        del row2[cc]
                        if cc in col_rows:
                            col_rows[cc].discard(r2)
            if row2:
                _normalize_int_row(row2)
            else:
                del rows_map[r2]
        rank += 1
    return rank


def rank_over_q(m: SparseIntMatrix, certified: bool = True, rng: random.Random | None = None) -> int:
    """Rank over Q: exact if certified, else max of ranks at two random 30-bit primes."""
    if certified:
        return _rank_over_q_certified(m)
    rng = rng if rng is not None else random.Random(0)
    primes = []
    while len(primes) < 2:
        cand = rng.randrange(2**29, 2**30) | 1
        if is_prime(cand) and cand not in primes:
            primes.append(cand)
    return max(rank_mod_p(m, p) for p in primes)


def _divisor_chain(values) -> tuple:
    """Normalize a diagonal multiset into the Smith divisibility chain."""
    ones = sum(1 for v in values if abs(v) == 1)
    rest = sorted(abs(v) for v in values if abs(v) > 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                if rest[j] % rest[i]:
                    g = gcd(rest[i], rest[j])
                    rest[i], rest[j] = g, rest[i] * rest[j] // g
                    changed = True
        rest.sort()
    rest = [d for d in rest if d > 1]
    extra_ones = sum(1 for v in values if abs(v) > 1) - len(rest)
    return tuple([1] * (ones + extra_ones) + rest)


def smith_normal_form(m: SparseIntMatrix, cap: int = 5000) -> ElementaryDivisors:
    """Divisibility chain of m.  Unit pivots are swept out sparsely first;
    the residual is finished with classical gcd pivoting."""
    if m.rows > cap or m.cols > cap:
        raise SnfTooLarge(f"{m.rows}x{m.cols} exceeds SNF cap {cap}x{cap}")
    rows_map, col_rows = _row_structure(m)
    heap = [(len(rs), c) for c, rs in col_rows.items()]
    heapq.heapify(heap)
    diagonal = []

    def row_op(r2, q, pivot_items):
        # row r2 -= q * pivot row
        row2 = rows_map[r2]
        for cc, vv in pivot_items:
            nv = row2.get(cc, 0) - q * vv
            if nv:
                if cc not in row2 and cc in col_rows:
                    col_rows[cc].add(r2)
                row2[cc] = nv
            else:
                if cc in row2:
                    del row2[cc]
                    if cc in col_rows:
                        col_rows[cc].discard(r2)
        if not row2:
            del rows_map[r2]

    def col_op(c2, q, c_piv):
        # column c2 -= q * pivot column
        for rr in list(col_rows.get(c_piv, ())):
            vv = rows_map[rr][c_piv]
            row = rows_map[rr]
            nv = row.get(c2, 0) - q * vv
            if nv:
                if c2 not in row and c2 in col_rows:
                    col_rows[c2].add(rr)
                row[c2] = nv
            else:
                if c2 in row:
                    del row[c2]
                    if c2 in col_rows:
                        col_rows[c2].discard(rr)

    while True:
        c = _pop_min_degree_column(heap, col_rows)
        if c is None:
            # the gcd dance can move a pivot off its heap column, orphaning it
            live = {cc: rs for cc, rs in col_rows.items() if rs}
            if live:
                col_rows.clear()
                col_rows.update(live)
                heap = [(len(rs), cc) for cc, rs in col_rows.items()]
                heapq.heapify(heap)
                continue
            break
        r = min(
            col_rows[c],
            key=lambda rr: (abs(rows_map[rr][c]) != 1, abs(rows_map[rr][c]), len(rows_map[rr]), rr),
        )
        # gcd dance: shrink the pivot until it divides its column and row
        while True:
            v = rows_map[r][c]
            moved = False
            for r2 in sorted(col_rows[c] - {r}):
                a = rows_map[r2][c]
                if a % v:
                    row_op(r2, a // v, list(rows_map[r].items()))
                    r = r2
                    moved = True
                    break
            if moved:
                continue
            for c2 in sorted(set(rows_map[r]) - {c}):
                b = rows_map[r][c2]
                if b % v:
                    col_op(c2, b // v, c)
                    c = c2
                    moved = True
                    break
            if not moved:
                break
        v = rows_map[r][c]
        pivot_items = list(rows_map[r].items())
        for r2 in sorted(col_rows[c] - {r}):
            row_op(r2, rows_map[r2][c] // v, pivot_items)
        # pivot column is now a singleton; clearing the pivot row only touches row r
        row_r = rows_map.pop(r)
        for cc in row_r:
            if cc in col_rows:
                col_rows[cc].discard(r)
        if c in col_rows:
            del col_rows[c]
        diagonal.append(v)
    return ElementaryDivisors(_divisor_chain(diagonal))


def _rank_for_field(m: SparseIntMatrix, field: FieldSpec, certified: bool, rng) -> int:
    if field.is_rationals:
        return rank_over_q(m, certified=certified, rng=rng)
    return rank_mod_p(m, field.p)


@dataclass(frozen=True)
class BettiTable:
    """Per-field Betti sequences b_0..b_d with optional integral torsion."""

    entries: tuple          # tuple of (FieldSpec, tuple of ints)
    torsion: tuple | None   # per degree, elementary divisors > 1 of H_k(Z), or None
    certified: bool

    def fields(self):
        return tuple(f for f, _ in self.entries)

    def betti(self, field: FieldSpec) -> tuple:
        for f, b in self.entries:
            if f == field:
                return b
        raise KeyError(field.label())

    def total(self, field: FieldSpec) -> int:
        return sum(self.betti(field))

    def max_betti(self, field: FieldSpec) -> int:
        b = self.betti(field)
        return max(b) if b else 0

    def euler(self, field: FieldSpec) -> int:
        return sum((-1) ** i * v for i, v in enumerate(self.betti(field)))

    def to_json(self):
        out = []
        for f, b in self.entries:
            out.append(
                {
                    "field": f.label(),
                    "betti": list(b),
                    "torsion": [list(t) for t in self.torsion] if self.torsion is not None else None,
                    "certified": self.certified,
                }
            )
        return out


def _verify_chain(ranks, boundaries) -> None:
    for k in range(1, len(boundaries)):
        if not boundaries[k - 1].compose_is_zero(boundaries[k]):
            raise CorruptComplex(f"boundary composition d_{k-1} d_{k} is nonzero")


def betti(
    chain: "OrientedChainComplex",
    fields,
    *,
    certified: bool = True,
    with_torsion: bool = True,
    snf_cap: int = 5000,
    seed: int = 0,
) -> BettiTable:
    """Betti numbers of a chain complex over each requested field.

    b_k = rank C_k - rank d_k - rank d_{k+1}.  When every boundary matrix
    fits under the SNF cap, torsion is reported and the table is
    cross-derived from the elementary divisors; both derivations must
    agree or the complex is declared corrupt.
    """
    fields = tuple(fields)
    if not fields:
        raise InvalidParameter("need at least one field")
    ranks = tuple(chain.ranks)
    boundaries = tuple(chain.boundaries)
    _verify_chain(ranks, boundaries)
    d = len(ranks) - 1
    rng = random.Random(seed)

    snf: list[ElementaryDivisors | None] = []
    if with_torsion:
        for mat in boundaries:
            try:
                snf.append(smith_normal_form(mat, cap=snf_cap))
            except SnfTooLarge:
                snf.append(None)
    else:
        snf = [None] * len(boundaries)
    snf_complete = all(s is not None for s in snf)

    entries = []
    for field in fields:
        mat_rank = [_rank_for_field(mat, field, certified, rng) for mat in boundaries]
        mat_rank.append(0)  # rank of d_{d+1} = 0
        bs = tuple(ranks[k] - mat_rank[k] - mat_rank[k + 1] for k in range(d + 1))
        if any(b < 0 for b in bs):
            raise CorruptComplex(f"negative Betti number over {field.label()}: {bs}")
        # cross-check against the integral structure wherever SNF ran
        for k in range(d + 1):
            sk, sk1 = snf[k], (snf[k + 1] if k + 1 <= d else ElementaryDivisors(()))
            if sk is None or sk1 is None:
                continue
            if field.is_rationals:
                b_snf = ranks[k] - sk.rank - sk1.rank
            else:
                b_snf = ranks[k] - sk.rank_mod(field.p) - sk1.rank_mod(field.p)
            if b_snf != bs[k]:
                raise CorruptComplex(
                    f"rank-derived b_{k}={bs[k]} disagrees with SNF-derived {b_snf} over {field.label()}"
                )
        entries.append((field, bs))

    chi = sum((-1) ** k * ranks[k] for k in range(d + 1))
    for field, bs in entries:
        if sum((-1) ** k * b for k, b in enumerate(bs)) != chi:
            raise CorruptComplex(f"Euler characteristic mismatch over {field.label()}")
    qrow = next((bs for f, bs in entries if f.is_rationals), None)
    if qrow is not None and certified:
        for f, bs in entries:
            if not f.is_rationals and any(bp < bq for bp, bq in zip(bs, qrow)):
                raise CorruptComplex("b_k(F_p) < b_k(Q) violates universal coefficients")

    torsion = None
    if snf_complete:
        tor = []
        for k in range(d + 1):
            nxt = snf[k + 1] if k + 1 <= d else None
            tor.append(nxt.torsion() if nxt is not None else ())
        torsion = tuple(tor)
    return BettiTable(tuple(entries), torsion, certified)


def relative_betti(
    chain: "OrientedChainComplex",
    sub: "SimplicialComplex",
    fields,
    *,
    certified: bool = True,
    with_torsion: bool = False,
    snf_cap: int = 5000,
    seed: int = 0,
) -> BettiTable:
    """Betti numbers of the relative chain complex C_*(K)/C_*(L).

    `chain` must be the chain complex of K and `sub` a subcomplex of K
    (simplices of `sub` must all be simplices of K, with the same labels).
    """
    from .complexes import OrientedChainComplex  # local import to avoid a cycle

    sub_simplices = sub.simplex_set()
    for s in sub_simplices:
        k = len(s) - 1
        if k >= len(chain.basis_labels) or s not in set(chain.basis_labels[k]):
            raise InvalidParameter(f"{s} is not a simplex of the ambient complex")
    keep: list[list[int]] = []
    index_maps: list[dict] = []
    for k, labels in enumerate(chain.basis_labels):
        kept = [j for j, s in enumerate(labels) if s not in sub_simplices]
        keep.append(kept)
        index_maps.append({j: i for i, j in enumerate(kept)})
    new_ranks = tuple(len(kept) for kept in keep)
    new_boundaries = []
    for k in range(len(chain.boundaries)):
        mat = chain.boundaries[k]
        rows = new_ranks[k - 1] if k >= 1 else 0
        cols_out = {}
        if k >= 1:
            rmap = index_maps[k - 1]
            for new_j, old_j in enumerate(keep[k]):
                col = {}
                for r, v in mat.column(old_j).items():
                    if r in rmap:
                        col[rmap[r]] = v
                if col:
                    cols_out[new_j] = col
        new_boundaries.append(SparseIntMatrix.from_columns(rows, new_ranks[k], cols_out))
    quotient = OrientedChainComplex(
        new_ranks,
        tuple(new_boundaries),
        tuple(tuple(chain.basis_labels[k][j] for j in keep[k]) for k in range(len(keep))),
    )
    return betti(
        quotient,
        fields,
        certified=certified,
        with_torsion=with_torsion,
        snf_cap=snf_cap,
        seed=seed,
    )
