"""Exact linear algebra over Q: echelon forms and subspaces of a fixed R_k.

Vectors are sparse ``{column: Fraction}`` dicts. A :class:`Subspace` stores its
basis in reduced row echelon form so that equality of subspaces is equality of
basis matrices.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import AmbientMismatch

Vec = Dict[int, Fraction]


def axpy(y: Vec, a, x: Vec) -> Vec:
    """Return y + a*x as a new sparse vector."""
    out = dict(y)
    for j, c in x.items():
        s = out.get(j, 0) + a * c
        if s:
            out[j] = s
        else:
            out.pop(j, None)
    return out


def scale(x: Vec, a) -> Vec:
    return {j: c * a for j, c in x.items()}


def primitive(v: Vec) -> Dict[int, int]:
    """Integer vector proportional to v with coprime entries (zero entries dropped)."""
    den = 1
    for c in v.values():
        if type(c) is not int:
            d = Fraction(c).denominator
            if d != 1:
                den = den * d // gcd(den, d)
    out = {}
    g = 0
    for j, c in v.items():
        if c:
            x = int(c * den) if type(c) is not int or den != 1 else c
            out[j] = x
            g = gcd(g, x)
    if g > 1:
        out = {j: x // g for j, x in out.items()}
    return out


class Echelon:
    """Incremental semi-echelon basis over the integers.

    ``order`` ranks the columns: the pivot of a row is its nonzero column with
    the smallest rank. Rows are primitive integer vectors and are never
    modified after insertion, so the rows inserted first span the same space
    as before. Only the span of a reduced vector is meaningful, not its scale.
    """

    def __init__(self, order: Optional[Sequence[int]] = None):
        self.rank_of = None if order is None else {c: r for r, c in enumerate(order)}
        self.rows: Dict[int, Dict[int, int]] = {}
        self.sequence: List[int] = []

    def __len__(self):
        return len(self.rows)

    def pivot(self, v: Vec) -> int:
        if self.rank_of is None:
            return min(v)
        return min(v, key=self.rank_of.__getitem__)

    def reduce(self, v: Vec) -> Dict[int, int]:
        v = primitive(v)
        rows = self.rows
        while v:
            p = self.pivot(v)
            row = rows.get(p)
            if row is None:
                return v
            a, c = row[p], v[p]
            g = gcd(a, c)
            a, c = a // g, c // g
            if a != 1:
                if a == -1:
                    v = {j: -x for j, x in v.items()}
                else:
                    v = {j: a * x for j, x in v.items()}
            for j, x in row.items():
                y = v.get(j, 0) - c * x
                if y:
                    v[j] = y
                else:
                    del v[j]
            if v:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                    if g == 1:
                        break
                if g > 1:
                    v = {j: x // g for j, x in v.items()}
        return v

    def insert(self, v: Vec) -> Optional[Dict[int, int]]:
        """Add ``v``; return the reduced new row, or None if ``v`` is dependent."""
        r = self.reduce(v)
        if not r:
            return None
        p = self.pivot(r)
        self.rows[p] = r
        self.sequence.append(p)
        return r

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def ordered_rows(self):
        return [self.rows[p] for p in self.sequence]


def rref(vectors: Iterable[Vec], n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Reduced row echelon form as a tuple of dense rows sorted by pivot column."""
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    pivots = sorted(ech.rows)
    rows = {}
    for p in pivots:
        r = ech.rows[p]
        lead = r[p]
        rows[p] = {j: Fraction(x, lead) for j, x in r.items()}
    # back-substitute so each pivot column is a unit vector
    for p in reversed(pivots):
        rp = rows[p]
        for q in pivots:
            if q != p and p in rows[q]:
                rows[q] = axpy(rows[q], -rows[q][p], rp)
    zero = Fraction(0)
    return tuple(tuple(rows[p].get(j, zero) for j in range(n)) for p in pivots)


class Subspace:
    """A subspace of an ``n``-dimensional degree piece ``R_k``."""

    __slots__ = ("k", "n", "rows", "_pivots")

    def __init__(self, k: int, n: int, rows: Tuple[Tuple[Fraction, ...], ...]):
        self.k = k
        self.n = n
        self.rows = rows
        self._pivots = None

    @classmethod
    def from_vectors(cls, k, n, vectors: Iterable[Vec]):
        return cls(k, n, rref(vectors, n))

    @classmethod
    def zero(cls, k, n):
        return cls(k, n, ())

    @classmethod
    def full(cls, k, n):
        return cls.from_vectors(k, n, ({j: Fraction(1)} for j in range(n)))

    @property
    def dim(self):
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def vectors(self) -> List[Vec]:
        return [{j: c for j, c in enumerate(r) if c} for r in self.rows]

    @property
    def pivots(self):
        if self._pivots is None:
            self._pivots = tuple(next(j for j, c in enumerate(r) if c) for r in self.rows)
        return self._pivots

    def echelon(self) -> Echelon:
        ech = Echelon()
        for p, v in zip(self.pivots, self.vectors()):
            ech.rows[p] = primitive(v)
            ech.sequence.append(p)
        return ech

    def contains(self, v: Vec) -> bool:
        v = {j: c for j, c in v.items() if c}
        for p, r in zip(self.pivots, self.rows):
            c = v.get(p)
            if c:
                v = axpy(v, -c, {j: x for j, x in enumerate(r) if x})
        return not v

    def contains_subspace(self, other: "Subspace") -> bool:
        _check_same(self, other)
        return all(self.contains(v) for v in other.vectors())

    def is_full(self):
        return self.dim == self.n

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.k, self.n, self.rows) == (other.k, other.n, other.rows)

    def __hash__(self):
        return hash((self.k, self.n, self.rows))

    def __repr__(self):
        return f"Subspace(k={self.k}, dim={self.dim}/{self.n})"


def _check_same(U: Subspace, V: Subspace):
    if U.k != V.k or U.n != V.n:
        raise AmbientMismatch(f"subspaces of R_{U.k} (dim {U.n}) and R_{V.k} (dim {V.n})")


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    _check_same(U, V)
    return Subspace.from_vectors(U.k, U.n, U.vectors() + V.vectors())


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """Zassenhaus intersection: reduce [u|u] and [v|0]; zero-left rows give U∩V."""
    _check_same(U, V)
    n = U.n
    ech = Echelon()
    for u in U.vectors():
        w = dict(u)
        w.update({j + n: c for j, c in u.items()})
        ech.insert(w)
    for v in V.vectors():
        ech.insert(v)
    out = [{j - n: c for j, c in r.items()} for p, r in ech.rows.items() if p >= n]
    return Subspace.from_vectors(U.k, n, out)


def adapted_basis(chain: Sequence[Subspace]):
    """Basis adapted to an increasing chain of subspaces.

    Returns ``(vectors, levels)``: the vectors extend a basis of ``chain[i-1]``
    to one of ``chain[i]`` for each i in turn, and ``levels[m]`` is the first
    index at which vector ``m`` appears.
    """
    ech = Echelon()
    vecs, levels = [], []
    for i, S in enumerate(chain):
        for v in S.vectors():
            if ech.insert(v) is not None:
                vecs.append(v)
                levels.append(i)
    return vecs, levels
