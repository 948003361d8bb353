"""Bounded-degree experiments on a subalgebra of R[t] and its initial algebra.

The built-in example is the C[t]-subalgebra A of C[t][x, y] generated by
t(x + y), t xy, t xy^2 and t^2 y. Its bigraded piece (k, j) is t^j F_j R_k,
where F is the filtration presented by the same generators, so every
membership question reduces to exact linear algebra in one R_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple, Union

from .bigraded import ProductEnumerator
from .errors import MixedDegree, OutOfBounds
from .filtration import ReesPresentation
from .linalg import Echelon, Subspace
from .poly import Poly
from .ring import GradedRing, projective_space
from .specialize import initial_subspace
from .torus import OneParamSubgroup

EXAMPLE_GENERATORS = ((1, "x+y"), (1, "x*y"), (1, "x*y^2"), (2, "y"))
EXAMPLE_WEIGHTS = (-1, 1)

Bidegree = Tuple[int, int]


def example_presentation() -> ReesPresentation:
    return ReesPresentation(projective_space(1), EXAMPLE_GENERATORS, label="appendix")


class BigradedAlgebraTable:
    """Pieces (k, j) -> F_j R_k of the C[t]-algebra generated by t^{i_a} s_a.

    ``k`` is the R-degree and ``j`` the t-degree; both are bounded.
    """

    def __init__(self, ring: GradedRing, generators: Sequence[Tuple[int, Union[Poly, str]]],
                 kmax: int = 12, jmax: int = 12):
        if kmax < 0 or jmax < 0:
            raise OutOfBounds("bounds must be non-negative")
        pres = ReesPresentation(ring, generators, allow_degree_zero=True)
        self.ring = ring
        self.generators = pres.generators
        self.kmax, self.jmax = kmax, jmax
        enum = ProductEnumerator(ring, self.generators)
        self.pieces: Dict[Bidegree, Subspace] = {}
        for k in range(kmax + 1):
            for j, S in enumerate(enum.pieces(k, jmax)):
                self.pieces[(k, j)] = S

    @classmethod
    def example(cls, kmax: int = 12, jmax: int = 12) -> "BigradedAlgebraTable":
        return cls(projective_space(1), EXAMPLE_GENERATORS, kmax, jmax)

    def piece(self, k: int, j: int) -> Subspace:
        if not (0 <= k <= self.kmax and 0 <= j <= self.jmax):
            raise OutOfBounds(f"bidegree ({k}, {j}) outside table bounds ({self.kmax}, {self.jmax})")
        return self.pieces[(k, j)]

    def monomial_index(self, exponents: Tuple[int, ...]) -> int:
        k = sum(exponents)
        return self.ring.index(k)[exponents]


def bigraded_membership(table: BigradedAlgebraTable, element: Union[Poly, str], j: int) -> bool:
    """True iff t^j * element lies in the algebra."""
    if isinstance(element, str):
        from .parser import parse_poly

        element = parse_poly(element, table.ring.variables)
    element = table.ring.normal_form(element)
    if element.is_zero():
        return True
    degs = element.degrees()
    if len(degs) != 1:
        raise MixedDegree("element is not homogeneous")
    k = degs.pop()
    return table.piece(k, j).contains(table.ring.coords(element, k))


@dataclass
class ClaimReport:
    name: str
    bound: int
    checks: List[Tuple[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def _check_bound(cond: bool, what: str):
    if not cond:
        raise OutOfBounds(what)


def verify_claim1(table: BigradedAlgebraTable, N: int) -> ClaimReport:
    """For 3 <= n <= N: t^{n-1} x y^n is in A, and no element of t-degree < n-1 touches x y^n.

    The second part is the coordinate statement: every vector of F_k R_{n+1},
    k < n - 1, has zero x y^n coordinate.
    """
    _check_bound(N <= table.kmax - 1 and N - 1 <= table.jmax,
                 f"N={N} needs kmax >= {N + 1} and jmax >= {N - 1}")
    rep = ClaimReport("claim1", N)
    for n in range(3, N + 1):
        mono = (1, n)
        x_yn = Poly.monomial(mono)
        rep.checks.append((f"t^{n - 1} x y^{n} in A", bigraded_membership(table, x_yn, n - 1)))
        col = table.monomial_index(mono)
        clean = all(col not in v for k in range(n - 1) for v in table.piece(n + 1, k).vectors())
        rep.checks.append((f"no element of t-degree < {n - 1} has an x y^{n} coordinate", clean))
    return rep


def verify_claim2(table: BigradedAlgebraTable, N: int) -> ClaimReport:
    """For 1 <= j <= N and k <= j: t^k y^j is not in A.

    Since y^j has the largest weight in R_j, this is the same as saying no
    element of t-degree k has initial form y^j.
    """
    _check_bound(N <= min(table.kmax, table.jmax), f"N={N} exceeds min(kmax, jmax)")
    rep = ClaimReport("claim2", N)
    for j in range(1, N + 1):
        yj = Poly.monomial((0, j))
        for k in range(j + 1):
            rep.checks.append((f"t^{k} y^{j} not in A", not bigraded_membership(table, yj, k)))
    return rep


@dataclass
class CensusReport:
    bound: int
    weights: Tuple[int, ...]
    new_generators: Dict[Bidegree, int]
    note: str = ("bounded-degree evidence only: a finite computation cannot show that "
                 "the initial algebra needs infinitely many generators")

    @property
    def bidegrees(self) -> List[Bidegree]:
        return sorted(self.new_generators)

    @property
    def count(self) -> int:
        return sum(self.new_generators.values())


def _product_space(ring: GradedRing, A: Subspace, B: Subspace, ech: Echelon, target: int) -> bool:
    """Insert all products of A and B into ech; stop early once dim reaches target."""
    pa = [ring.poly(v, A.k) for v in A.vectors()]
    pb = [ring.poly(v, B.k) for v in B.vectors()]
    k = A.k + B.k
    for f in pa:
        for g in pb:
            ech.insert(ring.coords(ring.normal_form(f * g), k))
            if len(ech.rows) >= target:
                return True
    return False


def initial_algebra_census(table: BigradedAlgebraTable, lam: OneParamSubgroup, N: int) -> CensusReport:
    """Bidegrees (k, j), 1 <= k <= N + 1, j <= N, where the initial algebra needs new generators.

    The initial piece at (k, j) is compared with t * in(k, j - 1) plus all
    products in(k1, j1) * in(k2, j2) with k1 + k2 = k, k1, k2 >= 1. Results at
    one bidegree depend only on lower ones, so raising N never removes entries.
    """
    _check_bound(N >= 0 and N + 1 <= table.kmax and N <= table.jmax,
                 f"N={N} needs kmax >= {N + 1} and jmax >= {N}")
    ring = table.ring
    inits: Dict[Bidegree, Subspace] = {}
    for k in range(N + 2):
        for j in range(N + 1):
            inits[(k, j)] = initial_subspace(table.piece(k, j), lam)
    found: Dict[Bidegree, int] = {}
    for k in range(1, N + 2):
        for j in range(N + 1):
            target = inits[(k, j)].dim
            if target == 0:
                continue
            ech = Echelon()
            if j > 0:
                for v in inits[(k, j - 1)].vectors():
                    ech.insert(v)
            done = len(ech.rows) >= target
            for k1 in range(1, k // 2 + 1):
                if done:
                    break
                for j1 in range(j + 1):
                    if k1 == k - k1 and j1 > j - j1:
                        continue
                    A, B = inits[(k1, j1)], inits[(k - k1, j - j1)]
                    if A.dim and B.dim and _product_space(ring, A, B, ech, target):
                        done = True
                        break
            missing = target - len(ech.rows)
            if missing:
                found[(k, j)] = missing
    return CensusReport(N, tuple(lam.weights), found)


def run_example(kmax: int = 12, jmax: int = 12, N: int = 8):
    """Claims 1 and 2 plus the census for the built-in example."""
    if N < 3:
        raise OutOfBounds("the claims start at n = 3; use N >= 3")
    table = BigradedAlgebraTable.example(kmax, jmax)
    lam = OneParamSubgroup(table.ring, EXAMPLE_WEIGHTS)
    c1 = verify_claim1(table, N)
    c2 = verify_claim2(table, N)
    census = initial_algebra_census(table, lam, N)
    return table, c1, c2, census
