import random
from fractions import Fraction

import pytest

import oracles
from qhomlie import (
    AlgebraError,
    HomLieAlgebra,
    Mat,
    StructureTensor,
    Subspace,
    center,
    check_quadratic_homlie,
    derived_subalgebra,
    example_sl2,
    example_toy_prop12,
    hom_jacobi_defect,
    ideal_closure,
    is_ideal,
    is_nilpotent,
    jacobi_defect,
    lie_algebra,
    lower_central_series,
    quotient,
    transport,
)
from qhomlie.linalg import unit


def heisenberg():
    return lie_algebra("heis", ["p", "q", "z"], StructureTensor.from_brackets(3, {(0, 1): {2: 1}}))


def test_structure_tensor_is_skew_and_sparse():
    br = StructureTensor.from_brackets(3, {(1, 0): {2: 1}})
    assert br.coefficient(0, 1, 2) == -1
    assert br.coefficient(1, 0, 2) == 1
    assert br.bracket((1, 0, 0), (1, 0, 0)) == (0, 0, 0)


def test_structure_tensor_rejects_diagonal():
    with pytest.raises(AlgebraError):
        StructureTensor(2, {(0, 0): {1: 1}})


def test_bracket_matches_dense_oracle():
    A = example_sl2(1)
    t = oracles.table_of(A)
    rng = random.Random(1)
    for _ in range(20):
        x, y = oracles.random_vector(9, rng), oracles.random_vector(9, rng)
        assert list(A.bracket.bracket(x, y)) == oracles.bracket(t.c, x, y)


def test_identity_twist_reduces_to_jacobi():
    H = heisenberg()
    assert check_quadratic_homlie(H.with_(form=None))["hom_jacobi"]
    rng = random.Random(2)
    for _ in range(10):
        x, y, z = (oracles.random_vector(3, rng) for _ in range(3))
        assert hom_jacobi_defect(H, x, y, z) == jacobi_defect(H, x, y, z)


def test_non_lie_bracket_detected():
    # [e0,e1] = e2, [e1,e2] = e0, [e0,e2] = e0 breaks Jacobi
    br = StructureTensor.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})
    A = lie_algebra("bad", ["a", "b", "c"], br)
    rep = check_quadratic_homlie(A)
    assert not rep["hom_jacobi"]
    w = rep["hom_jacobi"].witness
    i, j, k = w.indices
    assert any(jacobi_defect(A, unit(3, i), unit(3, j), unit(3, k)))


def test_axiom_suite_names():
    rep = check_quadratic_homlie(example_sl2(1))
    assert rep.passed
    for name in ("hom_jacobi", "equivariance", "invariance", "self_adjoint", "symmetric", "nondegenerate"):
        assert rep[name]


def test_single_axiom_failures_are_localised():
    A = example_sl2(1)
    # break self-adjointness only
    T = [list(r) for r in A.twist.row_vectors()]
    T[6][0] = Fraction(0)
    T[6][1] = Fraction(1)
    bad = A.with_(twist=Mat(T))
    rep = check_quadratic_homlie(bad)
    assert not rep.passed
    assert not rep["self_adjoint"]
    # asymmetric forms are rejected up front, degenerate ones are reported
    B = [list(r) for r in A.form.row_vectors()]
    B[0][1] = Fraction(1)
    with pytest.raises(AlgebraError):
        A.with_(form=Mat(B))
    rep = check_quadratic_homlie(A.with_(form=Mat.zeros(9, 9)))
    assert not rep["nondegenerate"]


def test_center_and_derived_against_oracle():
    for A in (heisenberg(), example_sl2(1), example_toy_prop12()):
        t = oracles.table_of(A)
        assert center(A).dim == oracles.center_dim(t.c)
        assert derived_subalgebra(A).dim == oracles.span_rank(oracles.derived_span(t.c))


def test_lower_central_series_heisenberg():
    H = heisenberg()
    series = lower_central_series(H)
    assert [S.dim for S in series] == [3, 1, 0]
    assert is_nilpotent(H) == 3
    assert oracles.lower_central_dims(oracles.table_of(H).c, 5) == [3, 1, 0]


def test_ideal_closure_and_quotient():
    H = heisenberg()
    z = Subspace.span([(0, 0, 1)], 3)
    assert is_ideal(H, z)
    J = ideal_closure(H, Subspace.span([(1, 0, 0)], 3))
    assert J.dim == 2 and is_ideal(H, J)
    Q, proj = quotient(H, z)
    assert Q.dim == 2 and Q.bracket.is_abelian()


def test_ideal_closure_respects_twist():
    A = example_sl2(1)
    J = ideal_closure(A, Subspace.span([unit(9, 0)], 9))
    assert J.is_full()  # x1 generates s, then T gives s*, rho gives h


def test_transport_preserves_axioms():
    A = example_toy_prop12()
    P = Mat([[1, 0, 0, 0], [2, 1, 0, 0], [0, -1, 1, 0], [1, 0, 3, 1]])
    A2 = transport(A, P)
    assert check_quadratic_homlie(A2).passed
    rng = random.Random(3)
    for _ in range(10):
        x, y = oracles.random_vector(4, rng), oracles.random_vector(4, rng)
        lhs = P @ A2.bracket.bracket(x, y)
        rhs = A.bracket.bracket(P @ x, P @ y)
        assert lhs == rhs


def test_algebra_validation():
    with pytest.raises(AlgebraError):
        HomLieAlgebra("x", ("a",), StructureTensor.abelian(2), Mat.identity(2))
    with pytest.raises(AlgebraError):
        HomLieAlgebra("x", ("a", "a"), StructureTensor.abelian(2), Mat.identity(2))
