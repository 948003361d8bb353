"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Mapping, Tuple

Monomial = Tuple[int, ...]


def grevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in degree-reverse-lex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def monomials_of_degree(nvars: int, k: int):
    """All exponent vectors of total degree ``k``, lexicographically descending.

    >>> monomials_of_degree(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    if nvars == 0:
        return [()] if k == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for j in combo:
            e[j] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """Immutable polynomial: a mapping from exponent tuples to nonzero Fractions."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError(f"exponent {m} does not have {nvars} entries")
                c = Fraction(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def one(cls, nvars):
        return cls._raw(nvars, {(0,) * nvars: Fraction(1)})

    @classmethod
    def monomial(cls, m: Monomial, coeff=1):
        return cls(len(m), {tuple(m): coeff})

    @classmethod
    def variable(cls, nvars, j):
        e = [0] * nvars
        e[j] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return {sum(m) for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def homogeneous_part(self, k):
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == k})

    def leading(self):
        """Leading (monomial, coefficient) in grevlex."""
        m = max(self.terms, key=grevlex_key)
        return m, self.terms[m]

    def weight_components(self, weights):
        """Split into weight-homogeneous pieces: {weight: Poly}."""
        out: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            w = sum(a * b for a, b in zip(weights, m))
            out.setdefault(w, {})[m] = c
        return {w: Poly._raw(self.nvars, t) for w, t in out.items()}

    def is_weight_homogeneous(self, weights):
        return len(self.weight_components(weights)) <= 1

    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different numbers of variables")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly(self.nvars, {(0,) * self.nvars: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {m: a * c for m, a in self.terms.items()})

    def mul_term(self, mono: Monomial, c):
        return Poly._raw(self.nvars, {mono_mul(m, mono): a * c for m, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        t: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Poly._raw(self.nvars, {m: c for m, c in t.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = Poly.one(self.nvars)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly(self.nvars, {(0,) * self.nvars: other})
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def substitute_monomial_map(self, perm: Iterable[int]):
        """Permute variables: variable j is sent to variable perm[j]."""
        perm = list(perm)
        t = {}
        for m, c in self.terms.items():
            e = [0] * self.nvars
            for j, a in enumerate(m):
                e[perm[j]] += a
            t[tuple(e)] = c
        return Poly._raw(self.nvars, t)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: grevlex_key(mc[0]), reverse=True)

    def to_string(self, names):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        names = [f"x{j}" for j in range(self.nvars)]
        return f"Poly({self.to_string(names)!r})"
