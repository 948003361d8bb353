"""Bigraded pieces of a Rees algebra by direct enumeration of generator products.

This is deliberately independent of the dynamic programme in
:mod:`kfilt.filtration`: every monomial in the generators is formed
explicitly and the piece ``(k, i)`` is the span of all products of R-degree
``k`` and t-degree at most ``i``.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .linalg import Subspace
from .poly import Poly
from .ring import GradedRing


def generator_exponents(degrees: Sequence[int], k: int):
    """Exponent vectors e with sum(e_a * degrees[a]) == k."""
    out = []

    def rec(a, remaining, acc):
        if a == len(degrees):
            if remaining == 0:
                out.append(tuple(acc))
            return
        d = degrees[a]
        for e in range(remaining // d + 1):
            acc.append(e)
            rec(a + 1, remaining - e * d, acc)
            acc.pop()

    rec(0, k, [])
    return out


class ProductEnumerator:
    """All products of generators, memoised by exponent vector."""

    def __init__(self, ring: GradedRing, generators: Sequence[Tuple[int, Poly]]):
        self.ring = ring
        self.generators = list(generators)
        self.degrees = [s.degree() for _, s in self.generators]
        self.tpowers = [i for i, _ in self.generators]
        self._products: Dict[Tuple[int, ...], Poly] = {(0,) * len(self.generators): Poly.one(ring.nvars)}

    def product(self, e: Tuple[int, ...]) -> Poly:
        p = self._products.get(e)
        if p is None:
            a = next(j for j, x in enumerate(e) if x)
            smaller = e[:a] + (e[a] - 1,) + e[a + 1:]
            p = self.ring.normal_form(self.product(smaller) * self.generators[a][1])
            self._products[e] = p
        return p

    def terms(self, k: int):
        """(t-degree, coordinates) for every generator monomial of R-degree k."""
        out = []
        for e in generator_exponents(self.degrees, k):
            tdeg = sum(a * b for a, b in zip(e, self.tpowers))
            out.append((tdeg, self.ring.coords(self.product(e), k)))
        out.sort(key=lambda tv: tv[0])
        return out

    def pieces(self, k: int, imax: int) -> List[Subspace]:
        """[F_0 R_k, ..., F_imax R_k] where F_i R_k = {s : t^i s in A}."""
        n = self.ring.hilbert(k)
        terms = self.terms(k)
        out = []
        acc = []
        pos = 0
        for i in range(imax + 1):
            while pos < len(terms) and terms[pos][0] <= i:
                acc.append(terms[pos][1])
                pos += 1
            out.append(Subspace.from_vectors(k, n, acc))
        return out


def bruteforce_flag(pres, k: int, imax: int) -> List[Subspace]:
    """Flag of a presentation at degree k from explicit generator products."""
    return ProductEnumerator(pres.ring, pres.generators).pieces(k, imax)
