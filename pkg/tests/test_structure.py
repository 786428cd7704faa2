import itertools
import random
from fractions import Fraction

import pytest

import oracles
from qhomlie import (
    Mat,
    StructureError,
    StructureTensor,
    Subspace,
    check_isometric_isomorphism,
    check_quadratic_homlie,
    decompose_thm22,
    example_nilpotent_prop12,
    example_sl2,
    example_toy_prop12,
    fitting,
    ideal_closure,
    is_ideal,
    is_simple_thmA,
    kernel,
    killing_form,
    lie_algebra,
    maximal_proper_ideal_containing,
    sl2_bracket,
    straighten,
    transport,
)
from qhomlie.constructions import abelian_quadratic, direct_sum
from qhomlie.linalg import unit


def span_units(n, idx):
    return Subspace.span([unit(n, i) for i in idx], n)


def double_sl2():
    entries = {k: dict(v) for k, v in sl2_bracket().entries().items()}
    for (i, j), sp in sl2_bracket().entries().items():
        entries[(i + 3, j + 3)] = {k + 3: c for k, c in sp}
    return StructureTensor(6, entries)


# --------------------------------------------------------------------------
# Fitting


def test_fitting_golden():
    A = example_sl2(1)
    res = fitting(A)
    assert res.ell == 2
    assert res.kernel_part.is_full() and res.image_part.is_zero()
    assert res.report.passed


def test_fitting_invertible_twist():
    H = lie_algebra("sl2", ["a", "b", "c"], sl2_bracket())
    res = fitting(H)
    assert res.image_part.is_full() and res.kernel_part.is_zero()
    assert res.report.passed


def test_fitting_mixed():
    # sl2 with identity twist plus the golden example: both parts nonzero
    A = direct_sum(lie_algebra("sl2", ["a", "b", "c"], sl2_bracket(), Mat.identity(3)), example_sl2(1))
    res = fitting(A)
    assert res.image_part.dim == 3 and res.kernel_part.dim == 9
    assert res.report.passed
    assert is_ideal(A, res.image_part) and is_ideal(A, res.kernel_part)


def test_fitting_requires_equivariance():
    A = example_sl2(1).with_(twist=Mat.diag([1] + [0] * 8))
    with pytest.raises(StructureError):
        fitting(A)


# --------------------------------------------------------------------------
# maximal ideals


def test_maximal_ideal_golden():
    A = example_sl2(1)
    J = maximal_proper_ideal_containing(A, kernel(A.twist))
    assert J == span_units(9, range(3, 9))


def test_maximal_ideal_toy():
    A = example_toy_prop12()
    K = kernel(A.twist)
    assert maximal_proper_ideal_containing(A, K) == K


def test_maximal_ideal_abelian():
    A = abelian_quadratic(4)
    assert maximal_proper_ideal_containing(A, Subspace.zero(4)) == span_units(4, range(3))


def test_maximal_ideal_error_when_closure_is_everything():
    A = example_sl2(1)
    with pytest.raises(StructureError):
        maximal_proper_ideal_containing(A, span_units(9, [0]))


def test_maximal_ideal_brute_force():
    # every basis vector or pairwise sum outside J generates everything
    A = example_sl2(1)
    J = maximal_proper_ideal_containing(A, kernel(A.twist))
    outside = [unit(9, i) for i in range(9) if not J.contains(unit(9, i))]
    probes = outside + [tuple(a + b for a, b in zip(u, v)) for u, v in itertools.combinations(outside, 2)]
    for v in probes:
        assert ideal_closure(A, J + Subspace.span([v], 9)).is_full()


# --------------------------------------------------------------------------
# Killing form and simplicity


def test_killing_form_examples():
    assert killing_form(sl2_bracket()) == Mat.identity(3) * -2
    assert killing_form(StructureTensor.abelian(3)).is_zero()
    assert killing_form(StructureTensor.from_brackets(2, {(0, 1): {1: 1}})) == Mat([[1, 0], [0, 0]])


def test_killing_form_against_oracle():
    for br in (sl2_bracket(), double_sl2(), example_sl2(1).bracket):
        n = br.dim
        c = [[[br.coefficient(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]
        assert [list(r) for r in killing_form(br).row_vectors()] == oracles.killing(c)


def test_simple_thmA_examples():
    assert is_simple_thmA(sl2_bracket(), Mat.identity(3)) is True
    assert is_simple_thmA(double_sl2(), Mat.identity(6)) is False
    assert is_simple_thmA(StructureTensor.abelian(3), Mat.identity(3)) is False


def test_simple_thmA_rejects_bad_input():
    with pytest.raises(StructureError):
        is_simple_thmA(example_sl2(1).bracket, example_sl2(1).form)  # not a Lie bracket
    with pytest.raises(StructureError):
        is_simple_thmA(sl2_bracket(), Mat.diag([1, 1, 2]))  # not invariant


def test_simple_thmA_matches_oracles():
    cases = [
        (sl2_bracket(), Mat.identity(3)),
        (double_sl2(), Mat.identity(6)),
        (StructureTensor.abelian(2), Mat.identity(2)),
    ]
    for br, B in cases:
        n = br.dim
        c = [[[br.coefficient(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]
        assert is_simple_thmA(br, B) == oracles.is_simple_lie(c)
        # brute-force ideal enumeration from basis vectors and pairwise sums
        A = lie_algebra("L", [f"e{i}" for i in range(n)], br)
        gens = [unit(n, i) for i in range(n)]
        gens += [tuple(a + b for a, b in zip(u, v)) for u, v in itertools.combinations(gens, 2)]
        proper = any(not ideal_closure(A, Subspace.span([g], n)).is_full() for g in gens)
        assert is_simple_thmA(br, B) == (not proper)


# --------------------------------------------------------------------------
# straighten


def test_straighten_already_closed():
    A = example_sl2(1)
    I = span_units(9, range(3, 9))
    res = straighten(A, I)
    assert res.s == span_units(9, range(3))
    assert not res.lambda_tensor


def test_straighten_shifted_start():
    A = example_sl2(1)
    I = span_units(9, range(3, 9))
    shifted = unit(9, 0)[:7] + (Fraction(1), Fraction(0))  # x1 + xi2
    start = Subspace.span([shifted, unit(9, 1), unit(9, 2)], 9)
    res = straighten(A, I, start=start)
    assert res.lambda_tensor  # defect is nonzero
    Z = span_units(9, range(6, 9))
    for v in res.lambda_tensor.values():
        assert Z.contains(v)
    # closed complements differ by an inner twist: here s = (1 + ad xi3) span{x1, x2, x3}
    xi3 = unit(9, 8)
    moved = [tuple(a + b for a, b in zip(unit(9, j), A.bracket.bracket(xi3, unit(9, j)))) for j in range(3)]
    assert res.s == Subspace.span(moved, 9)
    for K in res.D:
        assert (K.T @ res.killing + res.killing @ K).is_zero()
    # closure, exhaustively
    for u, v in itertools.combinations(res.s.vectors(), 2):
        assert res.s.contains(A.bracket.bracket(u, v))


def test_straighten_one_dimensional():
    A = example_toy_prop12()
    I = span_units(4, range(1, 4))
    res = straighten(A, I)
    assert res.s == span_units(4, [0])


def test_straighten_strict_rejects_deep_defect():
    # in a transported copy the defect may leave Ker T ∩ Im T; strict mode fails loudly
    A = example_sl2(1)
    I = span_units(9, range(3, 9))
    start = Subspace.span([tuple(Fraction(int(i == 0 or i == 3)) for i in range(9)), unit(9, 1), unit(9, 2)], 9)
    with pytest.raises(StructureError, match="unsupported configuration"):
        straighten(A, I, start=start)
    res = straighten(A, I, start=start, recursive=True)
    for u, v in itertools.combinations(res.s.vectors(), 2):
        assert res.s.contains(A.bracket.bracket(u, v))
    assert (res.s + I).is_full()


def test_straighten_requires_ideal():
    A = example_sl2(1)
    with pytest.raises(StructureError):
        straighten(A, span_units(9, [3]))


# --------------------------------------------------------------------------
# decomposition


def test_decompose_golden():
    A = example_sl2(1)
    res = decompose_thm22(A)
    assert res.kind == "simple"
    assert res.s == span_units(9, range(3))
    assert res.h == span_units(9, range(3, 6))
    assert res.iperp == span_units(9, range(6, 9))
    assert res.f.is_zero() and res.L.is_zero()
    assert res.killing == Mat.identity(3) * -2
    assert res.eta == Fraction(-1, 2)
    assert res.g_psi == res.killing * res.eta
    assert tuple(res.rho) == tuple(M for M in oracles_rho())
    assert res.report.passed
    assert res.iso.rank() == 9
    assert check_isometric_isomorphism(A, res.reconstruction, res.iso).passed


def oracles_rho():
    return [Mat(R) for R in oracles.golden_rho()]


@pytest.mark.parametrize("eta", [2, Fraction(-3, 5)])
def test_decompose_eta_scaling(eta):
    res = decompose_thm22(example_sl2(eta))
    assert res.eta == -Fraction(eta) / 2


def test_decompose_toy():
    A = example_toy_prop12()
    res = decompose_thm22(A)
    assert res.kind == "one-dimensional"
    d = res.data
    assert d.D == Mat([[0, 1], [-1, 0]])
    assert d.vprime == (0, 0) and d.lambda_prime == 1
    assert check_isometric_isomorphism(A, res.reconstruction, res.iso).passed


def test_decompose_nilpotent_prop12():
    A = example_nilpotent_prop12()
    res = decompose_thm22(A)
    assert res.kind == "one-dimensional"
    assert check_isometric_isomorphism(A, res.reconstruction, res.iso).passed


def test_decompose_transported():
    rng = random.Random(5)
    A = example_toy_prop12()
    for _ in range(3):
        while True:
            P = Mat([[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)])
            if P.rank() == 4:
                break
        A2 = transport(A, P)
        res = decompose_thm22(A2)
        assert res.kind == "one-dimensional"
        assert check_isometric_isomorphism(A2, res.reconstruction, res.iso).passed


def test_decompose_transported_golden():
    rng = random.Random(9)
    A = example_sl2(1)
    P = Mat.identity(9)
    rows = [list(r) for r in P.row_vectors()]
    for i in range(9):
        for j in range(i + 1, 9):
            rows[i][j] = Fraction(rng.randint(-1, 1))
    P = Mat(rows)
    A2 = transport(A, P)
    assert check_quadratic_homlie(A2).passed
    res = decompose_thm22(A2)
    assert res.kind == "simple"
    assert res.eta == Fraction(-1, 2)
    assert check_isometric_isomorphism(A2, res.reconstruction, res.iso).passed


def test_decompose_rejects_bad_input():
    A = example_sl2(1).with_(twist=Mat.diag([1] + [0] * 8))
    with pytest.raises(StructureError):
        decompose_thm22(A)


# --------------------------------------------------------------------------
# isomorphism checks


def test_iso_identity():
    A = example_sl2(1)
    assert check_isometric_isomorphism(A, A, Mat.identity(9)).passed


def test_iso_eta_mismatch():
    rep = check_isometric_isomorphism(example_sl2(1), example_sl2(2), Mat.identity(9))
    assert not rep["twist_intertwined"]
    assert rep["bracket_preserved"] and rep["isometric"]


def test_iso_singular():
    A = example_toy_prop12()
    rep = check_isometric_isomorphism(A, A, Mat.zeros(4, 4))
    assert not rep["bijective"]
