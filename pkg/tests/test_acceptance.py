"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

All comparisons are exact unless a tolerance is stated in the line itself.
"""

import itertools
import json
import math
import time
from fractions import Fraction

import pytest

from corpus import P1, P2, TORUS_UNCERTIFIED, corpus
from golden import EXAMPLES
from kfilt import (
    BigradedAlgebraTable,
    OneParamSubgroup,
    ReesPresentation,
    TabulatedFiltration,
    Torus,
    approximate,
    distance,
    generic_ops,
    invariants,
    is_equivariant,
    pair,
    pair_k,
    product_filtration,
    project_torus,
    rees_initial,
    specialize,
    verify_claim1,
    verify_claim2,
)
from kfilt.appendix import EXAMPLE_WEIGHTS, initial_algebra_census
from kfilt.bigraded import bruteforce_flag
from kfilt.cli import run

F = Fraction


@pytest.fixture
def announce(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def _say(number, ok, detail):
        line = f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}: {detail}"
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        else:  # pragma: no cover
            print(line)
        return ok

    return _say


def test_criterion_01_bruteforce_flag_oracle(announce):
    start = time.perf_counter()
    members = corpus()
    assert len(members) >= 10
    assert all(f.ring in (P1, P2) and len(f.generators) <= 4 for f in members.values())
    bad = []
    for name, f in members.items():
        for k in range(7):
            top = len(f.chain(k)) - 1
            if list(f.flag(k, top + 1)) != bruteforce_flag(f, k, top + 1):
                bad.append((name, k))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    announce(1, ok, f"{len(members)} presentations, k <= 6, mismatches {bad}, {elapsed:.1f} s (< 30 s)")
    assert ok


def test_criterion_02_p1_closed_forms(announce):
    start = time.perf_counter()
    a = invariants(product_filtration(P1, [0, -1]), 24, 4)
    b = invariants(product_filtration(P1, [0, -2]), 24, 4)
    elapsed = time.perf_counter() - start
    ok = a.df == 0 and a.norm_sq == F(1, 12) and b.norm_sq == F(1, 3) and b.df == 0 and elapsed < 5
    announce(2, ok, f"(0,-1): df={a.df}, normSq={a.norm_sq}; (0,-2): normSq={b.norm_sq}; {elapsed:.2f} s (< 5 s)")
    assert ok


def _products_inside(f, kmax):
    """F_i R_k * F_j R_l inside F_{i+j} R_{k+l}, checked on adapted bases, k + l <= kmax."""
    ring = f.ring
    for k in range(1, kmax):
        vk, lk = f.adapted(k)
        pk = [ring.poly(v, k) for v in vk]
        for l in range(k, kmax - k + 1):
            vl, ll = f.adapted(l)
            pl = [ring.poly(v, l) for v in vl]
            flag = f.flag(k + l, max(lk) + max(ll))
            for a, i in zip(pk, lk):
                for b, j in zip(pl, ll):
                    if not flag[i + j].contains(ring.coords(ring.normal_form(a * b), k + l)):
                        return False
    return True


def test_criterion_03_specialisation_preserves_weights(announce):
    start = time.perf_counter()
    kmax = 10
    problems = []
    for name, f in corpus().items():
        T = Torus.diagonal(f.ring)
        lam = generic_ops(T, kmax)
        spec = specialize(f, lam, kmax)
        for k in range(kmax + 1):
            bound = 2 * k * f.max_t
            if [S.dim for S in spec.flag(k, bound)] != [S.dim for S in f.flag(k, bound)]:
                problems.append((name, "dims", k))
        if not is_equivariant(spec, Torus(f.ring, [lam.weights]), kmax):
            problems.append((name, "lambda-equivariance"))
        if not _products_inside(spec, kmax):
            problems.append((name, "multiplicativity"))
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 60
    announce(3, ok, f"dims preserved for i <= 2k max(i_a), k <= {kmax}; multiplicative; lambda-equivariant; "
                    f"problems {problems}; {elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_04_cross_oracle(announce):
    start = time.perf_counter()
    kmax = 10
    failures = []
    for name, f in corpus().items():
        lam = generic_ops(Torus.diagonal(f.ring), kmax)
        a = specialize(f, lam, kmax)
        b = rees_initial(f, lam, kmax)
        for k in range(kmax + 1):
            top = 2 * k * f.max_t
            if a.flag(k, top) != b.flag(k, top):
                failures.append((name, k))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    announce(4, ok, f"specialize vs rees_initial on every bidegree, k <= {kmax}: mismatches {failures}; "
                    f"{elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_05_approximation(announce):
    kmax = 10
    bad = []
    for name, f in corpus().items():
        tab = TabulatedFiltration.from_filtration(f, kmax)
        for r in range(f.max_degree, f.max_degree + 2):
            approx = approximate(tab, r)
            if not approx.agrees or any(approx.presentation.weight_pair(k) != f.weight_pair(k) for k in range(kmax + 1)):
                bad.append((name, r))
    ok = not bad
    announce(5, ok, f"approximate(tabulation, r) reproduces h, w, d for k <= {kmax} at r = max degree and +1; "
                    f"failures {bad}")
    assert ok


def test_criterion_06_pairing_identities(announce):
    members = corpus()
    cs_violations, self_mismatch, norm_mismatch = [], [], []
    for (n1, f1), (n2, f2) in itertools.combinations_with_replacement(members.items(), 2):
        if f1.ring != f2.ring:
            continue
        for k in range(13):
            P, _ = pair_k(f1, f2, k)
            if P * P > f1.weight_pair(k)[1] * f2.weight_pair(k)[1]:
                cs_violations.append((n1, n2, k))
            if n1 == n2 and P != f1.weight_pair(k)[1]:
                self_mismatch.append((n1, k))
    for name, f in members.items():
        pd = pair(f, f, 24, f.ring.dimension + 3)
        inv = invariants(f, 24, f.ring.dimension + 3)
        if not pd.certified or pd.value != inv.norm_sq:
            norm_mismatch.append(name)
    ok = not (cs_violations or self_mismatch or norm_mismatch)
    announce(6, ok, f"Cauchy-Schwarz k <= 12 on all same-ring pairs: violations {cs_violations}; "
                    f"P(chi,chi) = d: mismatches {self_mismatch}; <chi,chi> = normSq: mismatches {norm_mismatch}")
    assert ok


def test_criterion_07_distance(announce):
    a = product_filtration(P1, [0, -1])
    b = product_filtration(P1, [-1, 0])
    rep = distance(a, b, 24, 4)
    same = distance(a, a, 24, 4)
    per_k = [x for _, x in rep.per_k]
    constant = max(per_k) - min(per_k) <= 1e-12
    ok = (rep.cosine == -1 and abs(rep.angle - math.pi) <= 1e-12 and rep.angle <= math.pi
          and same.angle == 0 and same.cosine == 1 and constant)
    announce(7, ok, f"cosine={rep.cosine} exactly, |angle - pi|={abs(rep.angle - math.pi):.1e} (<= 1e-12), "
                    f"rho(chi,chi)={same.angle}, per-k spread={max(per_k) - min(per_k):.1e}")
    assert ok


def _permuted(f, perm):
    gens = [(i, s.substitute_monomial_map(perm)) for i, s in f.generators]
    return ReesPresentation(f.ring, gens, label=f"{f.label}{perm}", allow_degree_zero=True)


def _degeneracy_findings():
    """Verdicts before/after specialisation (two lambdas) and under permutations on P^2."""
    disagreements, uncertified, perm_changes = [], [], []
    for name, f in corpus().items():
        T = Torus.diagonal(f.ring)
        kmax = 24 if f.ring == P1 else 36
        start = f.ring.dimension + 3
        verdicts = [project_torus(f, T, kmax, start).verdict]
        for seed in (0, 1):
            spec = specialize(f, generic_ops(T, kmax, seed), kmax)
            verdicts.append(project_torus(spec, T, kmax, start).verdict)
        if None in verdicts:
            uncertified.append(name)
        elif len(set(verdicts)) > 1:
            disagreements.append((name, verdicts))
        if f.ring == P2 and name not in TORUS_UNCERTIFIED:
            for perm in list(itertools.permutations(range(3)))[1:]:
                v = project_torus(_permuted(f, perm), T, kmax, start).verdict
                if v != verdicts[0]:
                    perm_changes.append((name, perm, verdicts[0], v))
    return disagreements, uncertified, perm_changes


@pytest.mark.xfail(strict=True, reason="the non-equivariant member p2e gets different verdicts before and after "
                                       "specialisation; see the decisions ledger")
def test_criterion_08_degeneracy_pipeline(announce):
    disagreements, uncertified, perm_changes = _degeneracy_findings()
    ok = not disagreements and not uncertified and not perm_changes
    announce(8, ok, f"verdict disagreements {disagreements}; uncertified (no verdict) {uncertified}; "
                    f"permutation changes {perm_changes}")
    assert ok


def test_criterion_09_appendix_claims(announce):
    start = time.perf_counter()
    table = BigradedAlgebraTable.example(12, 12)
    c1, c2 = verify_claim1(table, 8), verify_claim2(table, 8)
    elapsed = time.perf_counter() - start
    ok = c1.passed and c2.passed and elapsed < 120
    announce(9, ok, f"claim 1: {sum(x for _, x in c1.checks)}/{len(c1.checks)} checks, claim 2: "
                    f"{sum(x for _, x in c2.checks)}/{len(c2.checks)} checks, kmax=jmax=12, {elapsed:.1f} s (< 120 s)")
    assert ok


def test_criterion_10_appendix_census(announce):
    start = time.perf_counter()
    table = BigradedAlgebraTable.example(12, 12)
    lam = OneParamSubgroup(P1, EXAMPLE_WEIGHTS)
    c8 = initial_algebra_census(table, lam, 8)
    c10 = initial_algebra_census(table, lam, 10)
    elapsed = time.perf_counter() - start
    family = all((n + 1, n - 1) in c8.new_generators for n in range(3, 9))
    ok = family and c10.count >= c8.count and "evidence" in c8.note and elapsed < 300
    announce(10, ok, f"(n+1, n-1) present for 3 <= n <= 8: {family}; count {c8.count} -> {c10.count} "
                     f"(bound 8 -> 10); labelled as evidence only; {elapsed:.1f} s (< 300 s)")
    assert ok


def test_criterion_11_equivariance_preservation(announce):
    kmax = 10
    failures = []
    for name, f in corpus().items():
        T = Torus.diagonal(f.ring)
        spec = specialize(f, generic_ops(T, kmax), kmax)
        for r in range(1, kmax):
            approx = approximate(spec, r)
            if not is_equivariant(approx.presentation, T, kmax):
                failures.append((name, r))
            if approx.agrees:
                break
    ok = not failures
    announce(11, ok, f"approximations of specialised tabulations are equivariant for the diagonal torus, "
                     f"k <= {kmax}: failures {failures}")
    assert ok


def test_criterion_12_determinism(announce, tmp_path):
    doc = tmp_path / "p1_double.json"
    doc.write_text(json.dumps({"ring": {"projective": 1}, "filtration": {"type": "product", "weights": [0, -2]}}))
    jobs = [["df", str(EXAMPLES / "p1_product.json")], ["df", str(doc)],
            ["distance", str(EXAMPLES / "p1_opposite_products.json")], ["appendix"]]
    different = []
    for args in jobs:
        bodies = [json.dumps(run(args + ["--seed", "0"])[1], indent=2) for _ in range(2)]
        if bodies[0] != bodies[1]:
            different.append(args[0])
    ok = not different
    announce(12, ok, f"report bodies byte-identical across two runs for {len(jobs)} jobs: differing {different}")
    assert ok
