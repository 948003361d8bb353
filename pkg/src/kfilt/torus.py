"""Diagonal one-parameter subgroups and tori acting on a graded ring."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import DegenerateTorus, IdealNotPreserved, ValidationError
from .ring import GradedRing


def _check_weights(ring: GradedRing, weights):
    if len(weights) != ring.nvars:
        raise ValidationError(f"weight vector {list(weights)} needs {ring.nvars} entries")
    bad = ring.preserves_ideal(weights)
    if bad is not None:
        raise IdealNotPreserved(bad)


def rank(vectors: Sequence[Sequence[int]]) -> int:
    from .linalg import Echelon

    ech = Echelon()
    for v in vectors:
        ech.insert({j: Fraction(c) for j, c in enumerate(v) if c})
    return len(ech)


@dataclass(frozen=True)
class OneParamSubgroup:
    """lambda(tau) . x_j = tau^{weights[j]} x_j"""

    ring: GradedRing
    weights: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        _check_weights(self.ring, self.weights)

    def monomial_weight(self, m) -> int:
        return sum(a * b for a, b in zip(m, self.weights))

    def degree_weights(self, k: int) -> List[int]:
        return [self.monomial_weight(m) for m in self.ring.degree_basis(k)]

    def is_trivial(self):
        return not any(self.weights)


@dataclass(frozen=True)
class Torus:
    """Torus acting diagonally, given by a basis of its cocharacter lattice."""

    ring: GradedRing
    cocharacters: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        cos = tuple(tuple(int(w) for w in c) for c in self.cocharacters)
        object.__setattr__(self, "cocharacters", cos)
        for c in cos:
            _check_weights(self.ring, c)
        if rank(cos) != len(cos):
            raise DegenerateTorus("cocharacters are linearly dependent")

    @classmethod
    def diagonal(cls, ring: GradedRing):
        """Maximal diagonal torus modulo scalars: cocharacters e_1, ..., e_m."""
        cos = []
        for j in range(1, ring.nvars):
            e = [0] * ring.nvars
            e[j] = 1
            cos.append(tuple(e))
        return cls(ring, tuple(cos))

    @classmethod
    def trivial(cls, ring: GradedRing):
        return cls(ring, ())

    @property
    def rank(self):
        return len(self.cocharacters)

    def monomial_weight(self, m) -> Tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(m, c)) for c in self.cocharacters)

    def weight_classes(self, k: int) -> Dict[Tuple[int, ...], List[int]]:
        """Group the basis indices of R_k by torus weight."""
        out: Dict[Tuple[int, ...], List[int]] = {}
        for j, m in enumerate(self.ring.degree_basis(k)):
            out.setdefault(self.monomial_weight(m), []).append(j)
        return out

    def one_param(self, coeffs: Sequence[int]) -> OneParamSubgroup:
        w = [0] * self.ring.nvars
        for c, beta in zip(coeffs, self.cocharacters):
            for j, b in enumerate(beta):
                w[j] += c * b
        return OneParamSubgroup(self.ring, tuple(w))
