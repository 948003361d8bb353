"""Weight functions, Donaldson-Futaki invariant, L2 pairing, torus projection, distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    AmbientMismatch,
    FitNotCertified,
    NotEquivariant,
    RingMismatch,
    UncertifiedFit,
    ZeroNorm,
)
from .filtration import _FlagView, is_equivariant, product_filtration
from .fitting import QuasiFit, fit_quasi
from .linalg import Echelon, Vec
from .torus import Torus

DEFAULT_MAX_PERIOD = 6

# -- weight functions ----------------------------------------------------------


@dataclass
class WeightData:
    h: List[int]
    w: List[int]
    d: List[int]
    n: int
    fits: Dict[str, QuasiFit] = field(default_factory=dict)
    certified: bool = False
    threshold: Optional[int] = None
    error: Optional[str] = None
    period: Optional[int] = None

    @property
    def kmax(self):
        return len(self.h) - 1

    def _c(self, name, j):
        f = self.fits.get(name)
        return None if f is None else f.coefficient(j)

    a0 = property(lambda self: self._c("h", 0))
    a1 = property(lambda self: self._c("h", 1))
    b0 = property(lambda self: self._c("w", 0))
    b1 = property(lambda self: self._c("w", 1))
    c0 = property(lambda self: self._c("d", 0))
    c1 = property(lambda self: self._c("d", 1))


# coefficients that must not depend on k mod period for the invariants to exist
_NEEDED = {"h": 2, "w": 2, "d": 1}


def _fit_all(seqs: Dict[str, Sequence], degrees: Dict[str, int], kmax: int, start: int, max_period: int):
    fits, error = {}, None
    for name, seq in seqs.items():
        try:
            q = fit_quasi(seq, degrees[name], kmax, start, max_period)
        except FitNotCertified as exc:
            error = f"{name}: {exc}"
            continue
        fits[name] = q
        bad = [j for j in range(_NEEDED.get(name, 1)) if q.coefficient(j) is None]
        if bad:
            error = f"{name}: coefficient {bad[0]} depends on k mod {q.period}"
    return fits, error


def weight_functions(filt: _FlagView, kmax: int, start: int = 0, n: Optional[int] = None,
                     max_period: int = DEFAULT_MAX_PERIOD) -> WeightData:
    """h(k), w(k) = -sum i dim gr_i, d(k) = sum i^2 dim gr_i for k <= kmax, with fits.

    h, w and d are fitted with degrees n, n+1 and n+2. Rees algebras not
    generated in degree one give quasi-polynomials, so each residue class of
    k modulo a period up to ``max_period`` is fitted separately; the fit is
    accepted when the leading coefficients used downstream agree across
    classes. An uncertified fit is reported in ``error`` rather than raised.
    """
    ring = filt.ring
    n = ring.dimension if n is None else n
    h, w, d = [], [], []
    for k in range(kmax + 1):
        h.append(ring.hilbert(k))
        wk, dk = filt.weight_pair(k)
        w.append(wk)
        d.append(dk)
    fits, error = _fit_all({"h": h, "w": w, "d": d}, {"h": n, "w": n + 1, "d": n + 2}, kmax, start, max_period)
    certified = error is None
    threshold = max(f.k0 for f in fits.values()) if certified else None
    period = math.lcm(*(f.period for f in fits.values())) if certified else None
    return WeightData(h, w, d, n, fits, certified, threshold, error, period)


@dataclass
class InvariantReport:
    df: Fraction
    norm_sq: Fraction
    sequences: WeightData
    label: str = ""


def df_and_norm(wd: WeightData, label: str = "") -> InvariantReport:
    """DF = (a1 b0 - a0 b1) / a0^2 and ||chi||^2 = c0 - b0^2 / a0."""
    if not wd.certified:
        raise UncertifiedFit(wd.error or "weight functions are not certified polynomial")
    a0, a1, b0, b1, c0 = wd.a0, wd.a1, wd.b0, wd.b1, wd.c0
    df = (a1 * b0 - a0 * b1) / (a0 * a0)
    norm_sq = c0 - b0 * b0 / a0
    return InvariantReport(df, norm_sq, wd, label)


def invariants(filt: _FlagView, kmax: int, start: int = 0, max_period: int = DEFAULT_MAX_PERIOD) -> InvariantReport:
    return df_and_norm(weight_functions(filt, kmax, start, max_period=max_period), filt.label)


# -- pairing -------------------------------------------------------------------


def _coordinates(basis: Sequence[Vec], vectors: Sequence[Vec], n: int) -> List[List[Fraction]]:
    """Column q holds the coordinates of vectors[q] in ``basis`` (which spans everything).

    Gauss-Jordan on the matrix [basis^T | I]: after full reduction each basis
    row records, in its augmented part, how to write a unit vector.
    """
    size = len(basis)
    rows: Dict[int, Dict[int, Fraction]] = {}
    for p, f in enumerate(basis):
        r = {j: Fraction(c) for j, c in f.items() if c}
        r[n + p] = Fraction(1)
        while True:
            piv = min(j for j in r if j < n) if any(j < n for j in r) else None
            if piv is None:
                raise AmbientMismatch("basis is dependent")
            row = rows.get(piv)
            if row is None:
                break
            c = r[piv]
            for j, x in row.items():
                y = r.get(j, 0) - c * x
                if y:
                    r[j] = y
                else:
                    r.pop(j, None)
        lead = r[piv]
        rows[piv] = {j: x / lead for j, x in r.items()}
    M = [[Fraction(0)] * len(vectors) for _ in range(size)]
    for q, g in enumerate(vectors):
        # coordinates of g = sum over its entries of the expansions of unit vectors
        r: Dict[int, Fraction] = {}
        todo = {j: Fraction(c) for j, c in g.items() if c}
        while todo:
            piv = min(todo)
            row = rows[piv]
            c = todo[piv]
            for j, x in row.items():
                if j < n:
                    y = todo.get(j, 0) - c * x
                    if y:
                        todo[j] = y
                    else:
                        todo.pop(j, None)
                else:
                    r[j] = r.get(j, 0) + c * x
        for j, x in r.items():
            if x:
                M[j - n][q] = x
    return M


def relative_position(basis_f, levels_f, basis_g, levels_g, n) -> List[Tuple[int, int]]:
    """Pairs (level_F, level_G) of a basis adapted to both flags.

    With M the matrix of the G-basis in the F-basis, eliminate columns left to
    right using the lowest unused nonzero row as pivot; the resulting
    permutation counts dim gr^F_i gr^G_j.
    """
    M = _coordinates(basis_f, basis_g, n)
    rows = len(M)
    used = [False] * rows
    pairs = []
    for q in range(len(basis_g)):
        p = next((r for r in range(rows - 1, -1, -1) if not used[r] and M[r][q]), None)
        if p is None:
            raise AmbientMismatch("flags do not span the same space")
        used[p] = True
        pv = M[p][q]
        for j in range(q + 1, len(basis_g)):
            x = M[p][j]
            if x:
                f = x / pv
                for r in range(rows):
                    if M[r][q]:
                        M[r][j] -= f * M[r][q]
        pairs.append((levels_f[p], levels_g[q]))
    return pairs


def coordinate_levels(basis: Sequence[Vec], levels: Sequence[int], n: int) -> Optional[List[int]]:
    """Level of each coordinate when the flag is spanned by coordinate vectors, else None."""
    out = [None] * n
    for v, lv in zip(basis, levels):
        if len(v) != 1:
            return None
        (j,) = v
        out[j] = lv
    return out


def relative_position_coordinate(basis_f, levels_f, glevels) -> List[Tuple[int, int]]:
    """Relative position of a flag against a flag of coordinate subspaces.

    Echelonise the F-adapted basis with pivots taken at the coordinate of
    highest G-level; the pivot of each new row is its G-level.
    """
    order = sorted(range(len(glevels)), key=lambda c: (-glevels[c], c))
    ech = Echelon(order)
    pairs = []
    for v, lv in zip(basis_f, levels_f):
        r = ech.insert(v)
        if r is None:
            raise AmbientMismatch("adapted basis is not independent")
        pairs.append((lv, glevels[ech.pivot(r)]))
    return pairs


def relative_pairs(f1: _FlagView, f2: _FlagView, k: int) -> List[Tuple[int, int]]:
    """(level in F, level in G) for a basis adapted to both flags in degree k."""
    n = f1.ring.hilbert(k)
    bf, lf = f1.adapted(k)
    bg, lg = f2.adapted(k)
    if len(bf) != n or len(bg) != n:
        raise AmbientMismatch(f"flags in degree {k} do not exhaust R_{k}")
    gl = coordinate_levels(bg, lg, n)
    if gl is not None:
        return relative_position_coordinate(bf, lf, gl)
    fl = coordinate_levels(bf, lf, n)
    if fl is not None:
        return [(i, j) for j, i in relative_position_coordinate(bg, lg, fl)]
    return relative_position(bf, lf, bg, lg, n)


def pair_k(f1: _FlagView, f2: _FlagView, k: int) -> Tuple[Fraction, Fraction]:
    """(P(k), Pbar(k)) with P(k) = sum_{i,j} i j dim gr^F_i gr^G_j."""
    if f1.ring != f2.ring:
        raise RingMismatch("filtrations live on different rings")
    n = f1.ring.hilbert(k)
    P = Fraction(sum(i * j for i, j in relative_pairs(f1, f2, k)))
    w1, _ = f1.weight_pair(k)
    w2, _ = f2.weight_pair(k)
    return P, P - Fraction(w1 * w2, n)


@dataclass
class PairingData:
    p: List[Fraction]
    pbar: List[Fraction]
    value: Optional[Fraction]
    certified: bool
    estimate: Optional[Fraction] = None
    n: int = 0
    weights1: Optional[WeightData] = None
    weights2: Optional[WeightData] = None
    error: Optional[str] = None
    period: Optional[int] = None


def pair(f1: _FlagView, f2: _FlagView, kmax: int, start: int = 0,
         max_period: int = DEFAULT_MAX_PERIOD) -> PairingData:
    """<chi1, chi2> = lim k^{-n-2} Pbar(k).

    P is fitted as a degree n+2 polynomial; the limit is then
    p0 - b0(chi1) b0(chi2) / a0 exactly. When no certified fit exists the
    largest tail value of k^{-n-2} Pbar(k) is reported as a flagged estimate.
    """
    if f1.ring != f2.ring:
        raise RingMismatch("filtrations live on different rings")
    n = f1.ring.dimension
    P, Pbar = [], []
    for k in range(kmax + 1):
        a, b = pair_k(f1, f2, k)
        P.append(a)
        Pbar.append(b)
    wd1 = weight_functions(f1, kmax, start, max_period=max_period)
    wd2 = wd1 if f2 is f1 else weight_functions(f2, kmax, start, max_period=max_period)
    error = None
    try:
        pfit = fit_quasi(P, n + 2, kmax, start, max_period)
        if pfit.coefficient(0) is None:
            error = f"P: leading coefficient depends on k mod {pfit.period}"
    except FitNotCertified as exc:
        pfit = None
        error = f"P: {exc}"
    if error is None and not (wd1.certified and wd2.certified):
        error = wd1.error or wd2.error
    if error is None:
        value = pfit.coefficient(0) - wd1.b0 * wd2.b0 / wd1.a0
        period = math.lcm(pfit.period, wd1.period, wd2.period)
        return PairingData(P, Pbar, value, True, None, n, wd1, wd2, None, period)
    tail = [Pbar[k] / Fraction(k) ** (n + 2) for k in range(max(1, kmax // 2), kmax + 1)]
    return PairingData(P, Pbar, None, False, max(tail) if tail else None, n, wd1, wd2, error)


# -- projection onto a torus -------------------------------------------------------


def _clear_denominators(v: Sequence[Fraction]) -> Tuple[List[int], int]:
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in v], den


@dataclass
class ProjectionReport:
    basis: List[Tuple[Fraction, ...]]
    coefficients: List[Fraction]
    norm_t_sq: Optional[Fraction]
    norm_sq: Optional[Fraction]
    verdict: Optional[str]
    pairings: List[Optional[Fraction]] = field(default_factory=list)
    basis_norms: List[Fraction] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    certified: bool = True

    def projection_weights(self) -> Tuple[Fraction, ...]:
        """sum_i c_i beta_i as a rational weight vector."""
        if not self.basis:
            return ()
        out = [Fraction(0)] * len(self.basis[0])
        for c, b in zip(self.coefficients, self.basis):
            for j, x in enumerate(b):
                out[j] += c * x
        return tuple(out)


_GRAM_CACHE: Dict[tuple, tuple] = {}


def orthogonal_cocharacters(torus: Torus, kmax: int, start: int = 0):
    """Gram-Schmidt on the cocharacters under the pairing of product filtrations.

    Returns (basis, norms, warnings); zero-norm directions are dropped.
    """
    key = (torus.ring.signature(), tuple(map(tuple, torus.cocharacters)), kmax, start)
    hit = _GRAM_CACHE.get(key)
    if hit is None:
        hit = _orthogonal_cocharacters(torus, kmax, start)
        _GRAM_CACHE[key] = hit
    basis, norms, warnings = hit
    return list(basis), list(norms), list(warnings)


def _orthogonal_cocharacters(torus: Torus, kmax: int, start: int):
    ring = torus.ring
    prods = [product_filtration(ring, b) for b in torus.cocharacters]
    m = len(prods)
    gram = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            pd = pair(prods[i], prods[j], kmax, start)
            if not pd.certified:
                raise UncertifiedFit(f"pairing of cocharacters {i}, {j}: {pd.error}")
            gram[i][j] = gram[j][i] = pd.value
    # rows of C express the orthogonalised vectors in the cocharacters
    C: List[List[Fraction]] = []
    norms: List[Fraction] = []
    warnings = []

    def ip(a, b):
        return sum(a[i] * gram[i][j] * b[j] for i in range(m) for j in range(m))

    for i in range(m):
        v = [Fraction(int(i == j)) for j in range(m)]
        for c, nn in zip(C, norms):
            mu = ip(v, c) / nn
            v = [x - mu * y for x, y in zip(v, c)]
        nv = ip(v, v)
        if nv == 0:
            warnings.append(f"cocharacter {list(torus.cocharacters[i])} has zero norm after orthogonalisation; dropped")
            continue
        C.append(v)
        norms.append(nv)
    basis = []
    for c in C:
        w = [Fraction(0)] * ring.nvars
        for coef, beta in zip(c, torus.cocharacters):
            for j, b in enumerate(beta):
                w[j] += coef * b
        basis.append(tuple(w))
    return basis, norms, warnings


def _pair_with_weight_vector(filt: _FlagView, weights: Sequence[Fraction], kmax: int, start: int) -> PairingData:
    ints, den = _clear_denominators(weights)
    pd = pair(filt, product_filtration(filt.ring, ints), kmax, start)
    if pd.value is not None:
        pd.value = pd.value / den
    if pd.estimate is not None:
        pd.estimate = pd.estimate / den
    return pd


def project_torus(filt: _FlagView, torus: Torus, kmax: int, start: int = 0, via: str = "direct",
                  seed: int = 0) -> ProjectionReport:
    """L2 projection of chi onto the cocharacter lattice of T and the degeneracy verdict.

    Degenerate means ||chi_T||^2 == ||chi||^2, compared exactly. With
    ``via="specialisation"`` the pairings are taken with the specialisation of
    chi along a generic one-parameter subgroup of T (selected by ``seed``),
    which is T-equivariant; for inputs that are not T-equivariant the two
    routes can disagree.
    """
    if torus.ring != filt.ring:
        raise RingMismatch("torus acts on a different ring")
    if via == "specialisation":
        from .specialize import generic_ops, specialize

        filt = specialize(filt, generic_ops(torus, kmax, seed), kmax)
    elif via != "direct":
        raise ValueError(f"unknown projection route {via!r}")
    basis, norms, warnings = orthogonal_cocharacters(torus, kmax, start)
    wd = weight_functions(filt, kmax, start)
    norm_sq = df_and_norm(wd).norm_sq if wd.certified else None
    certified = wd.certified
    pairings, coeffs = [], []
    norm_t_sq = Fraction(0)
    for b, nb in zip(basis, norms):
        pd = _pair_with_weight_vector(filt, b, kmax, start)
        if not pd.certified:
            certified = False
            warnings.append(f"pairing with {[str(x) for x in b]} uncertified: {pd.error}")
            pairings.append(None)
            coeffs.append(None)
            continue
        pairings.append(pd.value)
        coeffs.append(pd.value / nb)
        norm_t_sq += pd.value * pd.value / nb
    if not certified:
        return ProjectionReport(basis, coeffs, None, norm_sq, None, pairings, norms, warnings, False)
    verdict = "degenerate" if norm_t_sq == norm_sq else "non-degenerate"
    return ProjectionReport(basis, coeffs, norm_t_sq, norm_sq, verdict, pairings, norms, warnings, True)


def perp_invariants(filt: _FlagView, torus: Torus, kmax: int, start: int = 0,
                    projection: Optional[ProjectionReport] = None) -> Tuple[Fraction, Fraction]:
    """(DF, ||.||^2) of chi with the action alpha - sum c_i beta_i (T-equivariant chi only)."""
    if not is_equivariant(filt, torus, kmax):
        raise NotEquivariant("orthogonal complement needs a T-equivariant filtration")
    rep = projection or project_torus(filt, torus, kmax, start)
    if not rep.certified:
        raise UncertifiedFit("projection onto the torus is not certified")
    inv = invariants(filt, kmax, start)
    df_perp = inv.df
    for c, b in zip(rep.coefficients, rep.basis):
        ints, den = _clear_denominators(b)
        dfb = invariants(product_filtration(filt.ring, ints), kmax, start).df / den
        df_perp -= c * dfb
    return df_perp, inv.norm_sq - rep.norm_t_sq


# -- distance ------------------------------------------------------------------


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


@dataclass
class DistanceReport:
    pairing: Fraction
    norm_sq1: Fraction
    norm_sq2: Fraction
    cosine_sq: Fraction
    sign: int
    cosine: Optional[Fraction]
    angle: float
    per_k: List[Tuple[int, Optional[float]]]


def distance(f1: _FlagView, f2: _FlagView, kmax: int, start: int = 0,
             max_period: int = DEFAULT_MAX_PERIOD) -> DistanceReport:
    """rho = arccos(<chi1, chi2> / (||chi1|| ||chi2||))."""
    pd = pair(f1, f2, kmax, start, max_period)
    if not pd.certified:
        raise UncertifiedFit(f"pairing is not certified: {pd.error}")
    n1 = df_and_norm(pd.weights1).norm_sq
    n2 = df_and_norm(pd.weights2).norm_sq
    if n1 == 0 or n2 == 0:
        raise ZeroNorm("a filtration has zero L2 norm; the angle is undefined")
    value = pd.value
    cos_sq = value * value / (n1 * n2)
    sign = (value > 0) - (value < 0)
    root = _rational_sqrt(n1 * n2)
    cosine = value / root if root is not None else None
    c = float(cosine) if cosine is not None else sign * math.sqrt(float(cos_sq))
    angle = math.acos(max(-1.0, min(1.0, c)))
    # per-degree angles normalised by the variances Pbar_11(k), Pbar_22(k)
    per_k = []
    for k in range(1, kmax + 1):
        v1 = Fraction(pd.weights1.d[k]) - Fraction(pd.weights1.w[k] ** 2, pd.weights1.h[k])
        v2 = Fraction(pd.weights2.d[k]) - Fraction(pd.weights2.w[k] ** 2, pd.weights2.h[k])
        if v1 <= 0 or v2 <= 0:
            per_k.append((k, None))
            continue
        ck = pd.pbar[k] * pd.pbar[k] / (v1 * v2)
        sk = (pd.pbar[k] > 0) - (pd.pbar[k] < 0)
        per_k.append((k, math.acos(max(-1.0, min(1.0, sk * math.sqrt(float(ck)))))))
    return DistanceReport(value, n1, n2, cos_sq, sign, cosine, angle, per_k)
