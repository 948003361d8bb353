"""Exact polynomial fits of integer/rational sequences via finite differences."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import FitNotCertified, NotYetPolynomial, ValidationError


@dataclass(frozen=True)
class Fit:
    """coeffs[0] k^d + coeffs[1] k^(d-1) + ... + coeffs[d], certified on [k0, kmax]."""

    coeffs: Tuple[Fraction, ...]
    k0: int
    kmax: int
    certified: bool

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> Fraction:
        """Coefficient of k^(degree - j); zero past the end."""
        return self.coeffs[j] if j < len(self.coeffs) else Fraction(0)

    def __call__(self, k) -> Fraction:
        out = Fraction(0)
        for c in self.coeffs:
            out = out * k + c
        return out


def _interpolate(points: Sequence[Tuple[int, Fraction]], degree: int) -> Tuple[Fraction, ...]:
    """Monomial coefficients of the Newton interpolant through ``points``."""
    xs = [Fraction(x) for x, _ in points]
    table = [Fraction(y) for _, y in points]
    newton = [table[0]]
    for level in range(1, degree + 1):
        table = [(b - a) / (xs[i + level] - xs[i]) for i, (a, b) in enumerate(zip(table, table[1:]))]
        newton.append(table[0])
    # expand sum newton[j] * prod_{i<j} (k - xs[i]), low-order coefficients first
    coeffs = [Fraction(0)] * (degree + 1)
    basis = [Fraction(1)]
    for j, c in enumerate(newton):
        for p, b in enumerate(basis):
            coeffs[p] += c * b
        nxt = [Fraction(0)] * (len(basis) + 1)
        for p, b in enumerate(basis):
            nxt[p + 1] += b
            nxt[p] -= xs[j] * b if j < len(xs) else 0
        basis = nxt
    return tuple(reversed(coeffs))


def fit(seq: Sequence, degree: int, k0: int, kmax: int) -> Fit:
    """Fit a polynomial of the given degree to seq[k0..kmax].

    Interpolates on k0..k0+degree and certifies when the interpolant matches
    every value up to kmax and the window starting at k0 + 1 gives the same
    coefficients. Raises NotYetPolynomial at the first mismatch.
    """
    if degree < 0:
        raise ValidationError("degree must be non-negative")
    if kmax - k0 < degree + 2:
        raise ValidationError(f"window [{k0}, {kmax}] too short to certify degree {degree}")
    if kmax >= len(seq):
        raise ValidationError(f"sequence has no value at k={kmax}")
    pts = [(k, Fraction(seq[k])) for k in range(k0, k0 + degree + 1)]
    coeffs = _interpolate(pts, degree)
    f = Fit(coeffs, k0, kmax, False)
    for k in range(k0, kmax + 1):
        if f(k) != seq[k]:
            raise NotYetPolynomial(k)
    shifted = _interpolate([(k, Fraction(seq[k])) for k in range(k0 + 1, k0 + degree + 2)], degree)
    return Fit(coeffs, k0, kmax, shifted == coeffs)


def fit_points(ks: Sequence[int], values: Sequence, degree: int):
    """Interpolate on the first degree+1 points; return (coeffs, first mismatching k or None)."""
    coeffs = _interpolate([(k, Fraction(v)) for k, v in zip(ks[: degree + 1], values)], degree)
    f = Fit(coeffs, ks[0], ks[-1], False)
    for k, v in zip(ks, values):
        if f(k) != v:
            return coeffs, k
    return coeffs, None


@dataclass(frozen=True)
class QuasiFit:
    """Per-residue polynomial fits of a quasi-polynomial with the given period.

    ``fits[r]`` describes the values at k = r (mod period). A coefficient is
    only reported when it is the same for every residue class.
    """

    period: int
    k0: int
    kmax: int
    fits: Tuple[Tuple[Fraction, ...], ...]
    certified: bool = True

    @property
    def degree(self):
        return len(self.fits[0]) - 1

    def coefficient(self, j: int) -> Optional[Fraction]:
        vals = {f[j] if j < len(f) else Fraction(0) for f in self.fits}
        return vals.pop() if len(vals) == 1 else None

    @property
    def coeffs(self):
        return tuple(self.coefficient(j) for j in range(self.degree + 1))

    def __call__(self, k) -> Fraction:
        out = Fraction(0)
        for c in self.fits[k % self.period]:
            out = out * k + c
        return out


def fit_quasi(seq: Sequence, degree: int, kmax: int, start: int = 0, max_period: int = 1) -> QuasiFit:
    """Smallest threshold k0 >= start (then smallest period) with a certified fit.

    Each residue class needs degree + 3 values in [k0, kmax]: degree + 1 to
    interpolate and two more, so the windows starting at its first and second
    points give the same coefficients.
    """
    if kmax >= len(seq):
        raise ValidationError(f"sequence has no value at k={kmax}")
    last_bad = None
    k0 = start
    while kmax - k0 >= degree + 2:
        for period in range(1, max_period + 1):
            if kmax - k0 + 1 < period * (degree + 3):
                break
            fits = [None] * period
            ok = True
            for k in range(k0, k0 + period):
                ks = list(range(k, kmax + 1, period))
                coeffs, bad = fit_points(ks, [seq[j] for j in ks], degree)
                if bad is not None:
                    last_bad = bad
                    ok = False
                    break
                fits[k % period] = coeffs
            if ok:
                return QuasiFit(period, k0, kmax, tuple(fits))
        k0 += 1
    msg = f"no certified degree-{degree} fit on [{start}, {kmax}] with period <= {max_period}"
    if last_bad is not None:
        msg += f" (last mismatch at k={last_bad})"
    raise FitNotCertified(msg, list(seq))


def fit_from(seq: Sequence, degree: int, kmax: int, start: int = 0) -> Fit:
    """Smallest threshold k0 >= start at which a plain polynomial fit certifies."""
    q = fit_quasi(seq, degree, kmax, start, 1)
    return Fit(q.fits[0], q.k0, kmax, True)
