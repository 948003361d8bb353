"""Filtrations of a graded ring.

A filtration is either presented by generators of its Rees algebra
``A = sum_i F_i R t^i`` (:class:`ReesPresentation`) or tabulated degree by
degree as explicit flags (:class:`TabulatedFiltration`). Both expose the same
read interface: ``chain(k)`` returns ``F_0 R_k, ..., F_J R_k`` where ``J`` is
the first level at which the flag is all of ``R_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import (
    BoundExceeded,
    DegreeZeroGenerator,
    IdealNotPreserved,
    NotExhaustiveWithinBound,
    ValidationError,
)
from .linalg import Echelon, Subspace, Vec, adapted_basis
from .poly import Poly
from .ring import GradedRing
from .torus import Torus


class _FlagView:
    """Shared read interface over per-degree chains."""

    ring: GradedRing
    label: str

    def chain(self, k: int) -> Tuple[Subspace, ...]:
        raise NotImplementedError

    def flag(self, k: int, imax: Optional[int] = None) -> List[Subspace]:
        """F_0 R_k, ..., F_imax R_k (padded with R_k past the top level)."""
        ch = list(self.chain(k))
        if imax is None:
            return ch
        if imax < len(ch):
            return ch[: imax + 1]
        return ch + [ch[-1]] * (imax + 1 - len(ch))

    def dims(self, k: int) -> List[int]:
        return [S.dim for S in self.chain(k)]

    def graded_dims(self, k: int) -> List[int]:
        """dim gr_i R_k for i = 0..J."""
        d = self.dims(k)
        return [d[0]] + [b - a for a, b in zip(d, d[1:])]

    def adapted(self, k: int):
        """Basis adapted to the flag at degree k, with the level of each vector."""
        return adapted_basis(self.chain(k))

    def weight_pair(self, k: int) -> Tuple[int, int]:
        """(w(k), d(k))"""
        g = self.graded_dims(k)
        return -sum(i * x for i, x in enumerate(g)), sum(i * i * x for i, x in enumerate(g))


class ReesPresentation(_FlagView):
    """Filtration given by homogeneous generators ``t^{i_a} s_a`` of its Rees algebra.

    The algebra is taken over Q[t], so F_{j-1} R_k is contained in F_j R_k.
    Generators with ``i_a = 0`` are rejected unless ``allow_degree_zero`` is set;
    product filtrations use it so that their weights start at 0.
    """

    def __init__(
        self,
        ring: GradedRing,
        generators: Sequence[Tuple[int, Poly | str]],
        label: str = "",
        allow_degree_zero: bool = False,
        imax_per_degree: Optional[Callable[[int], int]] = None,
    ):
        self.ring = ring
        gens = []
        for idx, (i, s) in enumerate(generators):
            if isinstance(s, str):
                s = ring.parse(s)
            i = int(i)
            if i < 0:
                raise ValidationError(f"generator #{idx} has negative t-power")
            if i == 0 and not allow_degree_zero:
                raise DegreeZeroGenerator(idx)
            s = ring.normal_form(s)
            if not s:
                raise ValidationError(f"generator #{idx} is zero in the quotient ring")
            if not s.is_homogeneous():
                raise ValidationError(f"generator #{idx} is not homogeneous")
            if s.degree() < 1:
                raise ValidationError(f"generator #{idx} has degree 0")
            gens.append((i, s))
        self.generators: Tuple[Tuple[int, Poly], ...] = tuple(gens)
        self.label = label
        self.allow_degree_zero = allow_degree_zero
        self._imax = imax_per_degree
        self._new: Dict[int, List[List[Vec]]] = {}
        self._chains: Dict[int, Tuple[Subspace, ...]] = {}

    def __repr__(self):
        gens = ", ".join(f"t^{i}*({s.to_string(self.ring.variables)})" for i, s in self.generators)
        return f"ReesPresentation({self.label!r}: {gens})"

    @property
    def max_t(self) -> int:
        return max((i for i, _ in self.generators), default=0)

    @property
    def max_degree(self) -> int:
        return max((s.degree() for _, s in self.generators), default=0)

    def imax_per_degree(self, k: int) -> int:
        if self._imax is not None:
            return self._imax(k)
        return k * self.max_t

    def key(self):
        return (self.ring.signature(), tuple((i, s) for i, s in self.generators))

    # -- dynamic programme over bidegrees -------------------------------------------

    def new_vectors(self, k: int) -> List[List[Vec]]:
        """Per level j, vectors completing F_{j-1} R_k to F_j R_k.

        F_j R_k = F_{j-1} R_k + sum_a s_a F_{j-i_a} R_{k-k_a}; since the smaller
        pieces were already multiplied in at level j-1, only the vectors that
        are new at level j - i_a of degree k - k_a need to be multiplied.
        The list stops at the first level where F_j R_k = R_k, or when no
        further level can contribute.
        """
        cached = self._new.get(k)
        if cached is not None:
            return cached
        h = self.ring.hilbert(k)
        if k == 0:
            levels = [[{0: Fraction(1)}]]
            self._new[0] = levels
            return levels
        sources = []
        for i, s in self.generators:
            d = s.degree()
            if d <= k:
                sources.append((i, s, k - d, self.new_vectors(k - d)))
        last = max((i + len(lv) - 1 for i, _, _, lv in sources), default=-1)
        ech = Echelon()
        levels: List[List[Vec]] = []
        j = 0
        while len(ech) < h and j <= last:
            added = []
            for i, s, kk, lv in sources:
                jj = j - i
                if 0 <= jj < len(lv):
                    for v in lv[jj]:
                        r = ech.insert(self.ring.multiply(v, kk, s))
                        if r is not None:
                            added.append(r)
            levels.append(added)
            j += 1
        if not levels:
            levels.append([])
        self._new[k] = levels
        return levels

    def is_exhaustive(self, k: int) -> bool:
        return sum(len(x) for x in self.new_vectors(k)) == self.ring.hilbert(k)

    def top_level(self, k: int) -> int:
        return len(self.new_vectors(k)) - 1

    def _require_exhaustive(self, k: int):
        if not self.is_exhaustive(k):
            raise NotExhaustiveWithinBound(k, self.imax_per_degree(k))

    def dims(self, k: int) -> List[int]:
        self._require_exhaustive(k)
        out, acc = [], 0
        for vs in self.new_vectors(k):
            acc += len(vs)
            out.append(acc)
        return out

    def adapted(self, k: int):
        # the DP's new vectors are already independent and ordered by level
        self._require_exhaustive(k)
        vecs, levels = [], []
        for j, vs in enumerate(self.new_vectors(k)):
            vecs.extend(vs)
            levels.extend([j] * len(vs))
        return vecs, levels

    def chain(self, k: int) -> Tuple[Subspace, ...]:
        ch = self._chains.get(k)
        if ch is None:
            if not self.is_exhaustive(k):
                raise NotExhaustiveWithinBound(k, self.imax_per_degree(k))
            n = self.ring.hilbert(k)
            acc: List[Vec] = []
            out = []
            for vs in self.new_vectors(k):
                acc.extend(vs)
                out.append(Subspace.from_vectors(k, n, acc))
            ch = tuple(out)
            self._chains[k] = ch
        return ch

    def scaled(self, r: int) -> "ReesPresentation":
        """Same generators with every t-power multiplied by r."""
        return ReesPresentation(
            self.ring,
            [(r * i, s) for i, s in self.generators],
            label=f"{self.label}*{r}" if self.label else "",
            allow_degree_zero=self.allow_degree_zero,
        )


class TabulatedFiltration(_FlagView):
    """Explicit flags ``F_0 R_k ⊆ ... ⊆ F_J R_k = R_k`` for k <= kmax.

    Each degree is stored as an adapted basis with levels; canonical
    :class:`Subspace` chains are built only when asked for.
    """

    def __init__(self, ring: GradedRing, chains: Optional[Dict[int, Sequence[Subspace]]], kmax: int,
                 label: str = "", adapted: Optional[Dict[int, Tuple[List[Vec], List[int]]]] = None):
        self.ring = ring
        self.kmax = kmax
        self.label = label
        self._adapted: Dict[int, Tuple[List[Vec], List[int]]] = {}
        self._chains: Dict[int, Tuple[Subspace, ...]] = {}
        for k in range(kmax + 1):
            n = ring.hilbert(k)
            if adapted is not None and k in adapted:
                vecs, levels = adapted[k]
                vecs, levels = list(vecs), list(levels)
                if len(vecs) != n or any(b < a for a, b in zip(levels, levels[1:])):
                    raise ValidationError(f"adapted basis in degree {k} is not a sorted basis of R_{k}")
                ech = Echelon()
                if any(ech.insert(v) is None for v in vecs):
                    raise ValidationError(f"adapted basis in degree {k} is dependent")
            elif chains is not None and k in chains:
                ch = tuple(chains[k])
                if not ch or ch[-1].dim != n:
                    raise ValidationError(f"flag in degree {k} does not exhaust R_{k}")
                for x, y in zip(ch, ch[1:]):
                    if not y.contains_subspace(x):
                        raise ValidationError(f"flag in degree {k} is not increasing")
                while len(ch) > 1 and ch[-2].dim == n:
                    ch = ch[:-1]
                self._chains[k] = ch
                vecs, levels = adapted_basis(ch)
            else:
                raise ValidationError(f"no flag tabulated in degree {k}")
            self._adapted[k] = (vecs, levels)

    def _check_k(self, k: int):
        if k > self.kmax or k < 0:
            raise BoundExceeded(f"degree {k} is outside the tabulated range 0..{self.kmax}")

    def adapted(self, k: int):
        self._check_k(k)
        return self._adapted[k]

    def dims(self, k: int) -> List[int]:
        self._check_k(k)
        levels = self._adapted[k][1]
        top = levels[-1] if levels else 0
        out = [0] * (top + 1)
        for lv in levels:
            out[lv] += 1
        for i in range(1, top + 1):
            out[i] += out[i - 1]
        return out

    def chain(self, k: int) -> Tuple[Subspace, ...]:
        self._check_k(k)
        ch = self._chains.get(k)
        if ch is None:
            vecs, levels = self._adapted[k]
            n = self.ring.hilbert(k)
            ch = tuple(Subspace.from_vectors(k, n, vecs[:d]) for d in self.dims(k))
            self._chains[k] = ch
        return ch

    @classmethod
    def from_filtration(cls, filt: _FlagView, kmax: int, label: Optional[str] = None):
        adapted = {k: filt.adapted(k) for k in range(kmax + 1)}
        return cls(filt.ring, None, kmax, filt.label if label is None else label, adapted=adapted)

    def __eq__(self, other):
        if not isinstance(other, TabulatedFiltration):
            return NotImplemented
        return (self.ring == other.ring and self.kmax == other.kmax
                and all(self.chain(k) == other.chain(k) for k in range(self.kmax + 1)))

    __hash__ = None

    def __repr__(self):
        return f"TabulatedFiltration({self.label!r}, kmax={self.kmax})"


def same_flags(a: _FlagView, b: _FlagView, kmax: int) -> bool:
    return all(tuple(a.chain(k)) == tuple(b.chain(k)) for k in range(kmax + 1))


# -- validation ----------------------------------------------------------------


@dataclass
class ValidationReport:
    kmax: int
    constants_only: bool
    exhaustive_levels: Dict[int, int]
    homogeneous: bool = True
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return self.constants_only and self.homogeneous


def validate_rees(pres: ReesPresentation, kmax: int, imax_per_degree: Optional[Callable[[int], int]] = None) -> ValidationReport:
    """Check the three reconstruction conditions up to degree ``kmax``.

    (a) no generator sits in t-degree 0, so A meets R only in the constants;
    (b) every R_k with k <= kmax is reached by some F_j, j within the bound;
    (c) homogeneity holds by construction since generators are homogeneous.
    """
    if kmax < 1:
        raise ValidationError("kmax must be positive")
    bound = imax_per_degree or pres.imax_per_degree
    notes = []
    for idx, (i, _) in enumerate(pres.generators):
        if i == 0:
            if not pres.allow_degree_zero:
                raise DegreeZeroGenerator(idx)
            notes.append(f"generator #{idx} has t-power 0 (weights shifted to start at 0)")
    levels = {}
    for k in range(1, kmax + 1):
        if not pres.is_exhaustive(k) or pres.top_level(k) > bound(k):
            raise NotExhaustiveWithinBound(k, bound(k))
        levels[k] = pres.top_level(k)
    return ValidationReport(kmax, not notes, levels, True, notes)


# -- constructions -------------------------------------------------------------


def product_filtration(ring: GradedRing, weights: Sequence[int], label: Optional[str] = None) -> ReesPresentation:
    """Filtration induced by the diagonal action with integer weights u.

    Weights are shifted so that max(u) = 0; the generators are t^{-u'_j} x_j,
    so a monomial m lies in F_i R_k exactly when its shifted weight is >= -i.
    """
    u = [int(w) for w in weights]
    if len(u) != ring.nvars:
        raise ValidationError(f"weight vector {u} needs {ring.nvars} entries")
    bad = ring.preserves_ideal(u)
    if bad is not None:
        raise IdealNotPreserved(bad)
    top = max(u) if u else 0
    shifted = [w - top for w in u]
    gens = []
    for j, w in enumerate(shifted):
        x = ring.normal_form(ring.var(j))
        if x:
            gens.append((-w, x))
    if label is None:
        label = "product(" + ",".join(str(w) for w in u) + ")"
    return ReesPresentation(ring, gens, label=label, allow_degree_zero=True)


def trivial_filtration(ring: GradedRing) -> ReesPresentation:
    return product_filtration(ring, [0] * ring.nvars, label="trivial")


@dataclass
class Approximation:
    presentation: ReesPresentation
    r: int
    agreement_degree: int
    first_disagreement: Optional[int]

    @property
    def agrees(self):
        return self.first_disagreement is None


def approximate(tab: TabulatedFiltration, r: int, label: Optional[str] = None) -> Approximation:
    """Finitely generated approximation: the Q[t]-algebra generated by F_i R_k t^i, k <= r.

    Generators are chosen greedily per bidegree, keeping only vectors not
    already produced by lower levels or by products of earlier generators.
    The weight functions of the result are compared with ``tab`` on every
    tabulated degree.
    """
    if r > tab.kmax:
        raise BoundExceeded(f"r={r} exceeds the tabulated range kmax={tab.kmax}")
    ring = tab.ring
    gens: List[Tuple[int, Poly]] = []
    for k in range(1, r + 1):
        current = ReesPresentation(ring, gens, allow_degree_zero=True)
        produced = current.new_vectors(k)
        ch = tab.chain(k)
        ech = Echelon()
        for j, S in enumerate(ch):
            if j < len(produced):
                for v in produced[j]:
                    ech.insert(v)
            for v in S.vectors():
                if ech.insert(v) is not None:
                    gens.append((j, ring.poly(v, k)))
    name = label if label is not None else f"{tab.label}^({r})"
    pres = ReesPresentation(ring, gens, label=name, allow_degree_zero=True)
    first_bad = None
    for k in range(tab.kmax + 1):
        if not pres.is_exhaustive(k) or pres.weight_pair(k) != tab.weight_pair(k):
            first_bad = k
            break
    agreement = tab.kmax if first_bad is None else first_bad - 1
    return Approximation(pres, r, agreement, first_bad)


def is_equivariant(filt: _FlagView, torus: Torus, kmax: int) -> bool:
    """True iff every F_i R_k (k <= kmax) is spanned by torus weight vectors.

    F_i always sits inside the sum of its projections to the weight spaces;
    it is equivariant exactly when the ranks of those projections add up to
    dim F_i.
    """
    if torus.ring != filt.ring:
        raise ValidationError("torus acts on a different ring")
    for k in range(kmax + 1):
        classes = list(torus.weight_classes(k).values())
        if len(classes) <= 1:
            continue
        cls_of = {j: c for c, cols in enumerate(classes) for j in cols}
        vecs, levels = filt.adapted(k)
        echs = [Echelon() for _ in classes]
        total = 0
        for m, v in enumerate(vecs):
            parts: Dict[int, Vec] = {}
            for j, x in v.items():
                parts.setdefault(cls_of[j], {})[j] = x
            for c, part in parts.items():
                if echs[c].insert(part) is not None:
                    total += 1
            if m + 1 == len(vecs) or levels[m + 1] != levels[m]:
                if total != m + 1:
                    return False
    return True
