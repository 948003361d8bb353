"""Grassmannian limits of flags under one-parameter subgroups.

Convention: lambda(tau) scales a monomial of weight w by tau^w, so as tau -> 0
the lowest-weight component of an element dominates. Under the weights
(-1, 1) on P^1 the limit of span{x + y} is span{x}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bigraded import ProductEnumerator
from .errors import ApproximationUnstable, BoundExceeded, CrossCheckFailure, DegenerateTorus, ValidationError
from .filtration import Approximation, ReesPresentation, TabulatedFiltration, _FlagView, approximate, is_equivariant
from .linalg import Echelon, Subspace, Vec, adapted_basis, axpy
from .torus import OneParamSubgroup, Torus, rank


def _weight_order(weights: Sequence[int]) -> List[int]:
    return sorted(range(len(weights)), key=lambda j: (weights[j], j))


def _leading_block(r: Vec, pivot: int, weights: Sequence[int]) -> Vec:
    w = weights[pivot]
    return {j: c for j, c in r.items() if weights[j] == w}


def initial_subspace(V: Subspace, lam: OneParamSubgroup) -> Subspace:
    """lim_{tau -> 0} lambda(tau) . V as a point of the Grassmannian."""
    weights = lam.degree_weights(V.k)
    ech = Echelon(_weight_order(weights))
    parts = []
    for v in V.vectors():
        r = ech.insert(v)
        if r is not None:
            parts.append(_leading_block(r, ech.pivot(r), weights))
    return Subspace.from_vectors(V.k, V.n, parts)


def initial_adapted(vecs: Sequence[Vec], levels: Sequence[int], lam: OneParamSubgroup, k: int):
    """Limit of a whole flag given by an adapted basis, as an adapted basis.

    Rows inserted for F_{i-1} are untouched when F_i is added, so the leading
    blocks of the first dim F_i rows span the limit of F_i.
    """
    weights = lam.degree_weights(k)
    ech = Echelon(_weight_order(weights))
    parts: List[Vec] = []
    for v in vecs:
        r = ech.insert(v)
        if r is None:
            raise ValidationError("adapted basis is dependent")
        parts.append(_leading_block(r, ech.pivot(r), weights))
    return parts, list(levels)


def initial_chain(chain: Sequence[Subspace], lam: OneParamSubgroup) -> Tuple[Subspace, ...]:
    """Limits of every member of an increasing chain in one elimination pass."""
    if not chain:
        return ()
    k, n = chain[0].k, chain[0].n
    vecs, levels = adapted_basis(chain)
    parts, _ = initial_adapted(vecs, levels, lam, k)
    return tuple(Subspace.from_vectors(k, n, parts[: S.dim]) for S in chain)


def initial_subspace_by_kernels(V: Subspace, lam: OneParamSubgroup) -> Subspace:
    """Same limit computed as the sum over weights w of the weight-w parts of V_{>=w}.

    V_{>=w} (elements with no component of weight < w) is tracked as the
    left kernel of the columns of weight < w, refined one weight at a time.
    Independent of :func:`initial_subspace`; used as a cross-check.
    """
    weights = lam.degree_weights(V.k)
    basis = V.vectors()
    d = len(basis)
    # coefficient vectors c (over the basis of V) spanning V_{>=w}
    coeffs: List[Vec] = [{a: 1} for a in range(d)]
    blocks: Dict[int, List[int]] = {}
    for j, w in enumerate(weights):
        blocks.setdefault(w, []).append(j)
    parts = []

    def combine(c: Vec) -> Vec:
        out: Vec = {}
        for a, x in c.items():
            out = axpy(out, x, basis[a])
        return out

    for w in sorted(blocks):
        if not coeffs:
            break
        cols = set(blocks[w])
        images = []
        for c in coeffs:
            v = combine(c)
            images.append({j: x for j, x in v.items() if j in cols})
        parts.extend(p for p in images if p)
        # kernel of c -> (cB)|_w restricted to span(coeffs)
        ech = Echelon()
        kernel = []
        for img, c in zip(images, coeffs):
            aug = dict(img)
            aug.update({V.n + a: x for a, x in c.items()})
            ech.insert(aug)
        for p, r in ech.rows.items():
            if p >= V.n:
                kernel.append({a - V.n: x for a, x in r.items()})
        coeffs = kernel
    return Subspace.from_vectors(V.k, V.n, parts)


def specialize(filt: _FlagView, lam: OneParamSubgroup, kmax: int, label: Optional[str] = None) -> TabulatedFiltration:
    """Specialisation F'_i R_k = lim lambda(tau) . F_i R_k for all k <= kmax."""
    if lam.ring != filt.ring:
        raise ValidationError("one-parameter subgroup acts on a different ring")
    adapted = {}
    for k in range(kmax + 1):
        vecs, levels = filt.adapted(k)
        adapted[k] = initial_adapted(vecs, levels, lam, k)
    name = label if label is not None else f"{filt.label}|lim{list(lam.weights)}"
    return TabulatedFiltration(filt.ring, None, kmax, name, adapted=adapted)


def rees_initial(pres: ReesPresentation, lam: OneParamSubgroup, kmax: int, imax: Optional[int] = None,
                 label: Optional[str] = None) -> TabulatedFiltration:
    """Flags of the initial algebra of Rees(chi) under lambda (t has weight 0).

    Bidegree pieces of Rees(chi) come from explicit generator products and their
    limits from :func:`initial_subspace_by_kernels`, so nothing is shared with
    :func:`specialize` beyond the linear-algebra primitives.
    """
    if lam.ring != pres.ring:
        raise ValidationError("one-parameter subgroup acts on a different ring")
    enum = ProductEnumerator(pres.ring, pres.generators)
    chains = {}
    for k in range(kmax + 1):
        top = pres.imax_per_degree(k) if imax is None else imax
        pieces = enum.pieces(k, max(top, 0))
        cache: Dict[Subspace, Subspace] = {}
        lim = []
        for S in pieces:
            if S not in cache:
                cache[S] = initial_subspace_by_kernels(S, lam)
            lim.append(cache[S])
        if lim[-1].dim != pres.ring.hilbert(k):
            raise BoundExceeded(f"Rees algebra does not reach R_{k} within t-degree {top}")
        chains[k] = lim
    name = label if label is not None else f"{pres.label}|in{list(lam.weights)}"
    return TabulatedFiltration(pres.ring, chains, kmax, name)


def cross_check(pres: ReesPresentation, lam: OneParamSubgroup, kmax: int, imax: Optional[int] = None):
    """Raise CrossCheckFailure unless the two specialisation routes agree."""
    a = specialize(pres, lam, kmax)
    b = rees_initial(pres, lam, kmax, imax)
    for k in range(kmax + 1):
        if a.chain(k) != b.chain(k):
            raise CrossCheckFailure(f"Grassmannian limit and initial algebra differ in degree {k}")
    return a


# -- generic one-parameter subgroups -------------------------------------------------


def is_separating(torus: Torus, lam: OneParamSubgroup, kmax: int) -> bool:
    """Distinct torus weights among monomials of each degree <= kmax get distinct lambda-weights."""
    for k in range(kmax + 1):
        seen: Dict[int, Tuple[int, ...]] = {}
        for m in torus.ring.degree_basis(k):
            tw = torus.monomial_weight(m)
            lw = lam.monomial_weight(m)
            prev = seen.setdefault(lw, tw)
            if prev != tw:
                return False
    return True


def generic_ops(torus: Torus, kmax: int, seed: int = 0, max_rounds: int = 64) -> OneParamSubgroup:
    """A certified-generic one-parameter subgroup of ``torus``.

    lambda = sum_m c_m beta_m with c_m = +-(2 kmax D + 1)^(m-1), D = 1, 2, ...
    Seed 0 keeps the given cocharacter order and positive signs; other seeds
    permute the cocharacters and flip signs with a seeded RNG.
    """
    r = torus.rank
    if rank(torus.cocharacters) != r:
        raise DegenerateTorus("cocharacters are linearly dependent")
    if r == 0:
        return OneParamSubgroup(torus.ring, (0,) * torus.ring.nvars)
    order = list(range(r))
    signs = [1] * r
    if seed:
        rng = random.Random(seed)
        rng.shuffle(order)
        signs = [rng.choice((1, -1)) for _ in range(r)]
    for D in range(1, max_rounds + 1):
        base = 2 * kmax * D + 1
        coeffs = [0] * r
        for pos, m in enumerate(order):
            coeffs[m] = signs[pos] * base ** pos
        lam = torus.one_param(coeffs)
        if is_separating(torus, lam, kmax):
            return lam
    raise DegenerateTorus(f"no separating one-parameter subgroup found after {max_rounds} rounds")


# -- specialisation of a test-configuration ----------------------------------------


@dataclass
class SpecializationResult:
    lam: OneParamSubgroup
    specialised: TabulatedFiltration
    approximation: Optional[Approximation]
    trace: List[Tuple[int, int]] = field(default_factory=list)
    equivariant_input: bool = False
    equivariant_output: bool = False
    cross_checked: bool = False

    @property
    def stable(self):
        return self.approximation is not None and self.approximation.agrees


def specialize_tc(pres: ReesPresentation, torus: Torus, kmax: int, r: int = 1, seed: int = 0,
                  margin: int = 1, check: bool = True, lam: Optional[OneParamSubgroup] = None,
                  rmax: Optional[int] = None, check_kmax: Optional[int] = None) -> SpecializationResult:
    """Specialise along a generic lambda in ``torus`` and re-present finitely.

    The approximation order r is raised until the weight functions agree with
    the specialisation on every degree <= kmax, up to r = kmax - margin.
    Raises ApproximationUnstable (carrying the trace) if no such r exists.
    An explicit ``lam`` replaces the generic choice; ``rmax`` caps the search.
    ``check_kmax`` limits the independent cross-check, which is the expensive part.
    """
    if r < 1:
        raise ValidationError("approximation order must be at least 1")
    top = kmax - margin if rmax is None else min(rmax, kmax - margin)
    if r > top:
        raise BoundExceeded(f"r={r} leaves no margin below kmax={kmax}")
    if lam is None:
        lam = generic_ops(torus, kmax, seed)
    elif lam.ring != pres.ring:
        raise ValidationError("one-parameter subgroup acts on a different ring")
    if check:
        cross_check(pres, lam, kmax if check_kmax is None else min(kmax, check_kmax))
    spec = specialize(pres, lam, kmax)
    result = SpecializationResult(lam, spec, None, cross_checked=check)
    result.equivariant_input = is_equivariant(pres, torus, kmax)
    first_bad = None
    for rr in range(r, top + 1):
        approx = approximate(spec, rr, label=f"{pres.label}'")
        result.trace.append((rr, approx.agreement_degree))
        if approx.agrees:
            result.approximation = approx
            result.equivariant_output = is_equivariant(approx.presentation, torus, kmax)
            return result
        first_bad = approx.first_disagreement
    raise ApproximationUnstable(first_bad, result)
