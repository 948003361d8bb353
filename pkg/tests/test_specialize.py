import random
from fractions import Fraction

import pytest

from corpus import NAMES, build
from kfilt import (
    OneParamSubgroup,
    Torus,
    cross_check,
    generic_ops,
    is_equivariant,
    product_filtration,
    projective_space,
    rees_initial,
    specialize,
    specialize_tc,
)
from kfilt.errors import ApproximationUnstable, BoundExceeded, DegenerateTorus, ValidationError
from kfilt.linalg import Subspace
from kfilt.specialize import initial_subspace, initial_subspace_by_kernels, is_separating

P1, P2 = projective_space(1), projective_space(2)


def test_limit_keeps_lowest_weight_part():
    lam = OneParamSubgroup(P1, (-1, 1))
    V = P1.span([P1.parse("x+y")], 1)
    assert initial_subspace(V, lam) == P1.span([P1.parse("x")], 1)
    assert initial_subspace(V, OneParamSubgroup(P1, (1, -1))) == P1.span([P1.parse("y")], 1)
    # equal weights: nothing moves
    assert initial_subspace(V, OneParamSubgroup(P1, (2, 2))) == V


def test_two_limit_algorithms_agree_on_random_subspaces():
    rng = random.Random(9)
    for _ in range(200):
        k = rng.randint(1, 4)
        n = P2.hilbert(k)
        vecs = [{j: Fraction(rng.randint(-2, 2)) for j in range(n) if rng.random() < 0.5} for _ in range(rng.randint(0, n))]
        V = Subspace.from_vectors(k, n, [{j: c for j, c in v.items() if c} for v in vecs])
        lam = OneParamSubgroup(P2, tuple(rng.randint(-3, 3) for _ in range(3)))
        a, b = initial_subspace(V, lam), initial_subspace_by_kernels(V, lam)
        assert a == b and a.dim == V.dim


def test_generic_subgroup_is_separating_and_deterministic():
    T = Torus.diagonal(P2)
    lam0 = generic_ops(T, 10)
    assert lam0 == generic_ops(T, 10)
    assert is_separating(T, lam0, 10)
    lam1 = generic_ops(T, 10, seed=1)
    assert is_separating(T, lam1, 10) and lam1 == generic_ops(T, 10, seed=1)
    assert lam1 != lam0
    assert generic_ops(Torus.trivial(P2), 5).is_trivial()
    with pytest.raises(DegenerateTorus):
        generic_ops(Torus(P2, [[1, 0, 0], [2, 0, 0]]), 5)


@pytest.mark.parametrize("name", NAMES)
def test_specialisation_preserves_dimensions_and_is_equivariant(name):
    f = build(name)
    T = Torus.diagonal(f.ring)
    kmax = 8
    spec = specialize(f, generic_ops(T, kmax), kmax)
    for k in range(kmax + 1):
        assert spec.dims(k) == f.dims(k)
    assert is_equivariant(spec, T, kmax)


@pytest.mark.parametrize("name", NAMES)
def test_grassmannian_limit_equals_initial_algebra(name):
    f = build(name)
    T = Torus.diagonal(f.ring)
    cross_check(f, generic_ops(T, 8, seed=2), 8)


def test_equivariant_input_is_fixed():
    f = build("p2b")
    T = Torus.diagonal(P2)
    spec = specialize(f, generic_ops(T, 6), 6)
    assert all(spec.chain(k) == f.chain(k) for k in range(7))


def test_specialize_tc_on_finitely_generated_input():
    f = build("p2e")
    res = specialize_tc(f, Torus.diagonal(P2), 8)
    assert res.stable and res.equivariant_output and not res.equivariant_input
    assert res.trace[-1] == (res.approximation.r, 8)


def test_specialize_tc_on_appendix_escalates_without_settling():
    f = build("app")
    with pytest.raises(ApproximationUnstable) as info:
        specialize_tc(f, Torus.diagonal(P1), 10)
    trace = info.value.trace.trace
    assert [r for r, _ in trace] == list(range(1, 10))
    assert all(agree == r for r, agree in trace)
    assert info.value.disagreement_degree == 10


def test_specialize_tc_bounds():
    f = build("p1a")
    with pytest.raises(BoundExceeded):
        specialize_tc(f, Torus.diagonal(P1), 4, r=4)
    with pytest.raises(ValidationError):
        specialize_tc(f, Torus.diagonal(P1), 4, r=0)
    with pytest.raises(ValidationError):
        specialize(f, OneParamSubgroup(P2, (0, 1, 2)), 3)


def test_rees_initial_of_product_filtration_is_itself():
    f = product_filtration(P2, [0, -2, -1])
    tab = rees_initial(f, generic_ops(Torus.diagonal(P2), 5), 5)
    assert all(tab.chain(k) == f.chain(k) for k in range(6))
