"""Graded quotient rings R = Q[x_0..x_m]/I with per-degree monomial bases."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence

from .errors import MixedDegree, ValidationError
from .linalg import Subspace, Vec
from .parser import parse_poly
from .poly import (
    Monomial,
    Poly,
    grevlex_key,
    mono_div,
    mono_divides,
    mono_lcm,
    monomials_of_degree,
)


def _reduce(p: Poly, basis: Sequence[Poly], leads) -> Poly:
    """Full reduction of p by ``basis`` (leads are the leading monomials, monic)."""
    rem: Dict[Monomial, Fraction] = {}
    work = dict(p.terms)
    nv = p.nvars
    while work:
        m = max(work, key=grevlex_key)
        c = work.pop(m)
        for g, lm in zip(basis, leads):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    t = tuple(a + b for a, b in zip(gm, q))
                    s = work.get(t, 0) - c * gc
                    if s:
                        work[t] = s
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
    return Poly._raw(nv, rem)


def _monic(p: Poly) -> Poly:
    _, c = p.leading()
    return p.scale(1 / c)


def groebner_basis(polys: Sequence[Poly]) -> List[Poly]:
    """Reduced Groebner basis in grevlex by the plain Buchberger loop."""
    G = [_monic(p) for p in polys if p]
    if not G:
        return []
    pairs = list(combinations(range(len(G)), 2))
    while pairs:
        i, j = pairs.pop(0)
        li, lj = G[i].leading()[0], G[j].leading()[0]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading terms: S-polynomial reduces to zero
        lcm = mono_lcm(li, lj)
        s = G[i].mul_term(mono_div(lcm, li), 1) - G[j].mul_term(mono_div(lcm, lj), 1)
        r = _reduce(s, G, [g.leading()[0] for g in G])
        if r:
            G.append(_monic(r))
            pairs.extend((a, len(G) - 1) for a in range(len(G) - 1))
    # minimalise, then interreduce
    leads = [g.leading()[0] for g in G]
    keep = []
    for a, la in enumerate(leads):
        if any(b != a and mono_divides(lb, la) and (lb != la or b < a) for b, lb in enumerate(leads)):
            continue
        keep.append(G[a])
    out = []
    for a, g in enumerate(keep):
        others = keep[:a] + keep[a + 1:]
        out.append(_monic(_reduce(g, others, [o.leading()[0] for o in others])))
    out.sort(key=lambda g: grevlex_key(g.leading()[0]))
    return out


def _integral(v: Vec) -> Vec:
    """Store integral entries as ints; integer arithmetic is much cheaper than Fraction."""
    return {j: int(c) if c.denominator == 1 else c for j, c in v.items()}


class GradedRing:
    """Polynomial ring in named variables modulo a homogeneous ideal.

    The Groebner basis is computed once here and shared read-only afterwards.
    """

    def __init__(self, variables: Sequence[str], relations: Sequence[Poly | str] = (), dimension: Optional[int] = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError("duplicate variable names")
        for name in self.variables:
            if not name or not name[0].isalpha() or not all(ch.isalnum() or ch == "_" for ch in name):
                raise ValidationError(f"bad variable name {name!r}")
        rels = []
        for idx, r in enumerate(relations):
            if isinstance(r, str):
                r = parse_poly(r, self.variables)
            if r.nvars != self.nvars:
                raise ValidationError(f"relation #{idx} has the wrong number of variables")
            if not r.is_homogeneous():
                raise ValidationError(f"relation #{idx} is not homogeneous")
            rels.append(r)
        self.relations = tuple(rels)
        self.gb = tuple(groebner_basis(rels))
        self._leads = [g.leading()[0] for g in self.gb]
        self._basis_cache: Dict[int, List[Monomial]] = {}
        self._index_cache: Dict[int, Dict[Monomial, int]] = {}
        self._mult_cache: Dict[tuple, List[Vec]] = {}
        self.dimension = self._infer_dimension() if dimension is None else int(dimension)

    @property
    def nvars(self):
        return len(self.variables)

    def __repr__(self):
        rel = ", ".join(r.to_string(self.variables) for r in self.relations)
        return f"GradedRing({list(self.variables)}, [{rel}], n={self.dimension})"

    def signature(self):
        """Hashable identity used to check two documents refer to the same ring."""
        return (self.variables, tuple(g.sorted_terms().__repr__() for g in self.gb))

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def parse(self, text: str, line=None) -> Poly:
        return parse_poly(text, self.variables, line)

    def var(self, j) -> Poly:
        if isinstance(j, str):
            j = self.variables.index(j)
        return Poly.variable(self.nvars, j)

    def normal_form(self, p: Poly) -> Poly:
        if not self.gb:
            return p
        return _reduce(p, self.gb, self._leads)

    def is_standard(self, m: Monomial) -> bool:
        return not any(mono_divides(lm, m) for lm in self._leads)

    def degree_basis(self, k: int) -> List[Monomial]:
        """Standard monomials of degree k, lexicographically descending."""
        if k < 0:
            raise ValueError("degree must be non-negative")
        b = self._basis_cache.get(k)
        if b is None:
            b = [m for m in monomials_of_degree(self.nvars, k) if self.is_standard(m)]
            self._basis_cache[k] = b
            self._index_cache[k] = {m: j for j, m in enumerate(b)}
        return b

    def degree_basis_polys(self, k: int) -> List[Poly]:
        return [Poly.monomial(m) for m in self.degree_basis(k)]

    def index(self, k: int) -> Dict[Monomial, int]:
        self.degree_basis(k)
        return self._index_cache[k]

    def hilbert(self, k: int) -> int:
        return len(self.degree_basis(k))

    def coords(self, p: Poly, k: int) -> Vec:
        """Coordinates of the class of p in R_k over the standard monomials."""
        p = self.normal_form(p)
        idx = self.index(k)
        out = {}
        for m, c in p.terms.items():
            if sum(m) != k:
                raise MixedDegree(f"element of degree {sum(m)} where degree {k} was expected")
            out[idx[m]] = c
        return out

    def poly(self, v: Vec, k: int) -> Poly:
        b = self.degree_basis(k)
        return Poly(self.nvars, {b[j]: c for j, c in v.items()})

    def multiplication(self, k: int, s: Poly) -> List[Vec]:
        """Images of the basis of R_k under multiplication by homogeneous s."""
        key = (k, s)
        out = self._mult_cache.get(key)
        if out is None:
            d = s.degree()
            out = [_integral(self.coords(Poly.monomial(m) * s, k + d)) for m in self.degree_basis(k)]
            self._mult_cache[key] = out
        return out

    def multiply(self, v: Vec, k: int, s: Poly) -> Vec:
        images = self.multiplication(k, s)
        out: Vec = {}
        for j, c in v.items():
            for col, a in images[j].items():
                x = out.get(col, 0) + c * a
                if x:
                    out[col] = x
                else:
                    out.pop(col, None)
        return out

    def span(self, vectors: Sequence[Poly], k: int) -> Subspace:
        for p in vectors:
            q = self.normal_form(p)
            if q and q.degrees() != {k}:
                raise MixedDegree(f"span in degree {k} given an element of degrees {sorted(q.degrees())}")
        return Subspace.from_vectors(k, self.hilbert(k), (self.coords(p, k) for p in vectors))

    def full(self, k: int) -> Subspace:
        return Subspace.full(k, self.hilbert(k))

    def zero(self, k: int) -> Subspace:
        return Subspace.zero(k, self.hilbert(k))

    def weight(self, m: Monomial, weights: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(m, weights))

    def preserves_ideal(self, weights: Sequence[int]):
        """Index of the first relation that is not weight-homogeneous, else None."""
        for idx, r in enumerate(self.relations):
            if not r.is_weight_homogeneous(weights):
                return idx
        return None

    def _infer_dimension(self) -> int:
        # degree of the Hilbert polynomial: the order of the finite difference
        # that becomes constant on a tail window
        top = max((r.degree() for r in self.relations), default=1)
        kmax = 2 * (self.nvars + top) + 6
        seq = [self.hilbert(k) for k in range(kmax + 1)]
        tail = seq[kmax // 2:]
        d = 0
        while len(tail) > 1 and len(set(tail)) > 1:
            tail = [b - a for a, b in zip(tail, tail[1:])]
            d += 1
        if tail and tail[0] == 0:
            return -1
        return d


@lru_cache(maxsize=None)
def projective_space(m: int) -> GradedRing:
    """Coordinate ring of P^m with variables x, y (m=1), x, y, z (m=2), else x0..xm."""
    names = {1: ("x", "y"), 2: ("x", "y", "z")}.get(m, tuple(f"x{j}" for j in range(m + 1)))
    return GradedRing(names, (), m)
