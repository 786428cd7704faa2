"""Acceptance criteria 1 to 11, exact comparisons only.

Each criterion records one PASS/FAIL line; ``conftest.py`` prints them in
the terminal summary.  Running this file directly prints the same lines.
"""
import random
import time
from fractions import Fraction

import pytest

import oracles
from qhomlie import (
    CocycleData,
    Mat,
    Prop11Data,
    Prop12Data,
    StructureTensor,
    Subspace,
    center_triviality_consequences,
    check_isometric_isomorphism,
    check_quadratic_homlie,
    cocycle_theta,
    decompose_thm22,
    derived_subalgebra,
    example_nilpotent_prop12,
    example_sl2,
    example_toy_prop12,
    extend_prop11,
    extend_prop12,
    fitting,
    hom_jacobi_defect,
    is_coboundary,
    is_cocycle,
    is_nilpotent,
    is_simple_thmA,
    jacobi_defect,
    kernel,
    lieify,
    load_algebra,
    lower_central_series,
    nilpotency_step,
    nilpotency_transfer_check,
    sl2_bracket,
)
from qhomlie.algebra import jacobi_check
from qhomlie.cli import main
from qhomlie.constructions import abelian_quadratic
from qhomlie.linalg import image, unit

RESULTS = {}


def record(number, title, ok, detail=""):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    RESULTS[number] = line
    return ok


def shipped():
    return {"sl2_example": example_sl2(1), "toy_prop12": example_toy_prop12(),
            "nilpotent_prop12": example_nilpotent_prop12()}


def vec(A, **coeffs):
    return A.element(coeffs)


# --------------------------------------------------------------------------


def criterion_1(tmp_dir):
    start = time.perf_counter()
    path = tmp_dir / "sl2.json"
    code = main(["example", "sl2", "--eta", "1", "-o", str(path)])
    A = load_algebra(path)
    elapsed = time.perf_counter() - start
    br = lambda a, b: A.bracket.bracket(A.basis_vector(a), A.basis_vector(b))
    expected = {
        ("x1", "x2"): vec(A, x3=1),
        ("x2", "x3"): vec(A, x1=1),
        ("x3", "x1"): vec(A, x2=1),
        ("x1", "v1"): vec(A, v2=-1),
        ("x2", "v1"): vec(A, v2=1),
        ("x3", "v1"): vec(A, v3=-1),
        ("x1", "v2"): vec(A, v1=1),
        ("x2", "v2"): vec(A, v1=-1),
        ("x3", "v2"): vec(A),
        ("x1", "v3"): vec(A),
        ("x2", "v3"): vec(A),
        ("x3", "v3"): vec(A, v1=1),
        ("v2", "v3"): vec(A),
        ("v3", "v1"): vec(A, xi3=1),
        ("x1", "xi2"): vec(A, xi3=1),
        ("v1", "v2"): vec(A, xi1=-1, xi2=1),
    }
    wrong = [k for k, v in expected.items() if br(*k) != v]
    ok = code == 0 and not wrong and elapsed < 1.0
    return record(1, "golden example construction", ok, f"{len(expected)} brackets, {elapsed:.2f}s"
                  + (f", mismatched {wrong}" if wrong else ""))


def criterion_2():
    start = time.perf_counter()
    rep = check_quadratic_homlie(example_sl2(1))
    elapsed = time.perf_counter() - start
    names = {"hom_jacobi", "equivariance", "invariance", "self_adjoint", "symmetric", "nondegenerate"}
    ok = rep.passed and names <= set(rep.names()) and elapsed < 2.0
    return record(2, "axiom suite on the golden example", ok, f"{elapsed:.2f}s")


def criterion_3():
    A = example_sl2(1)
    d = jacobi_defect(A, A.basis_vector("x1"), A.basis_vector("v1"), A.basis_vector("v2"))
    ok = any(d) and d == vec(A, xi3=1)
    return record(3, "non-Lie witness at (x1, v1, v2)", ok, "defect = " + A.describe(d))


def criterion_4():
    A = example_sl2(1)
    res = fitting(A)
    ok = (A.twist @ A.twist).is_zero() and res.kernel_part.is_full()
    return record(4, "twist squares to zero, Fitting kernel part is everything", ok, f"ell = {res.ell}")


def criterion_5():
    A = example_sl2(1)
    L = lieify(A)
    series = lower_central_series(L)
    br = lambda a, b: L.bracket.bracket(A.basis_vector(a), A.basis_vector(b))
    eta = 1
    ok = (bool(jacobi_check(L.bracket)) and nilpotency_step(L) == 2 and series[-1].is_zero()
          and br("x1", "x2") == vec(A, xi3=eta) and br("x2", "x3") == vec(A, xi1=eta)
          and br("x3", "x1") == vec(A, xi2=eta))
    return record(5, "Lie-ification is a 2-step nilpotent Lie algebra", ok,
                  "lower central dims " + str([S.dim for S in series]))


def criterion_6():
    A = example_sl2(1)
    h = [A.basis_vector(f"v{i}") for i in (1, 2, 3)]
    sdual = Subspace.span([A.basis_vector(f"xi{i}") for i in (1, 2, 3)], 9)
    ok = derived_subalgebra(A).is_full() and all(sdual.contains(A.bracket.bracket(u, v)) for u in h for v in h)
    return record(6, "perfectness and [h, h] inside s*", ok)


def criterion_7():
    A = example_sl2(1)
    C = cocycle_theta(A)
    cyc = is_cocycle(A, C)
    cob = is_coboundary(A, C)
    rep = center_triviality_consequences(A, C)
    ok = bool(cyc) and not cob and rep["center_trivial"].passed and rep["ad_a_kernels_trivial"].passed
    return record(7, "theta is a cocycle and not a coboundary, trivial center", ok,
                  f"obstruction {cob.obstruction}")


def criterion_8():
    sl2 = sl2_bracket()
    entries = {k: dict(v) for k, v in sl2.entries().items()}
    for (i, j), sp in sl2.entries().items():
        entries[(i + 3, j + 3)] = {k + 3: c for k, c in sp}
    double = StructureTensor(6, entries)
    a = is_simple_thmA(sl2, Mat.identity(3))
    b = is_simple_thmA(double, Mat.identity(6))
    c = is_simple_thmA(StructureTensor.abelian(3), Mat.identity(3))
    ok = a is True and b is False and c is False
    return record(8, "simplicity via ad(g) = o(B)", ok, f"sl2 {a}, sl2+sl2 {b}, abelian {c}")


def criterion_9():
    details, ok = [], True
    A = example_sl2(1)
    start = time.perf_counter()
    res = decompose_thm22(A)
    t1 = time.perf_counter() - start
    span = lambda idx: Subspace.span([unit(9, i) for i in idx], 9)
    ok &= (res.kind == "simple" and res.s == span(range(3)) and res.h == span(range(3, 6))
           and res.iperp == span(range(6, 9)) and res.report.passed
           and check_isometric_isomorphism(A, res.reconstruction, res.iso).passed and t1 < 5.0)
    details.append(f"sl2 {res.kind} eta={res.eta} {t1:.2f}s")
    B = example_toy_prop12()
    start = time.perf_counter()
    res = decompose_thm22(B)
    t2 = time.perf_counter() - start
    ok &= (res.kind == "one-dimensional" and res.report.passed and res.data.lambda_prime == 1
           and res.data.D == Mat([[0, 1], [-1, 0]]) and not any(res.data.vprime)
           and check_isometric_isomorphism(B, res.reconstruction, res.iso).passed and t2 < 5.0)
    details.append(f"toy {res.kind} {t2:.2f}s")
    return record(9, "decomposition round trip", ok, ", ".join(details))


def _random_prop11(rng):
    m = rng.randint(1, 4)
    diag = [rng.choice([1, -1, 2, 3]) for _ in range(m)]
    Bh = [[Fraction(diag[i] if i == j else 0) for j in range(m)] for i in range(m)]
    rho = tuple(Mat(oracles.random_so(m, Bh, rng)) for _ in range(3))
    eta = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    return extend_prop11(Prop11Data(h=abelian_quadratic(m, form=Mat(Bh)), s_bracket=sl2_bracket(),
                                    s_form=Mat.identity(3), f=Mat.zeros(m, 3), rho=rho, eta=eta))


def _random_prop12(rng):
    m = rng.randint(1, 4)
    diag = [rng.choice([1, -1, 2, 3]) for _ in range(m)]
    Bh = [[Fraction(diag[i] if i == j else 0) for j in range(m)] for i in range(m)]
    D = Mat(oracles.random_so(m, Bh, rng))
    vprime = (Fraction(0),) * m
    for v in kernel(D).vectors():
        c = Fraction(rng.randint(-3, 3))
        vprime = tuple(a + c * b for a, b in zip(vprime, v))
    lam = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return extend_prop12(Prop12Data(h=abelian_quadratic(m, form=Mat(Bh)), D=D, vprime=vprime, lambda_prime=lam))


def criterion_10():
    start = time.perf_counter()
    rng = random.Random(20230417)
    bad11 = sum(1 for _ in range(200) if not check_quadratic_homlie(_random_prop11(rng)).passed)
    bad12 = sum(1 for _ in range(200) if not check_quadratic_homlie(_random_prop12(rng)).passed)
    nil_ok, nil_names = True, []
    for name, A in shipped().items():
        if is_nilpotent(A) is None:
            continue
        nil_names.append(name)
        rep = nilpotency_transfer_check(A)
        nil_ok &= rep["lie_terms_in_hom_terms"].passed and rep["lie_terms_in_twist_images"].passed
    elapsed = time.perf_counter() - start
    ok = bad11 == 0 and bad12 == 0 and nil_ok and bool(nil_names) and elapsed < 30.0
    return record(10, "property suites", ok,
                  f"failures {bad11}/200 and {bad12}/200, nilpotent transfer on {nil_names}, {elapsed:.1f}s")


def criterion_11():
    rng = random.Random(11)
    mismatches, triples = 0, 0
    for A in shipped().values():
        t = oracles.table_of(A)
        entries = oracles.nonzero_constants(t.c)
        for _ in range(1000):
            x, y, z = (oracles.random_vector(A.dim, rng) for _ in range(3))
            triples += 1
            if list(hom_jacobi_defect(A, x, y, z)) != oracles.fast_hom_jacobiator(entries, t.T, x, y, z):
                mismatches += 1
    A = example_sl2(1)
    C = cocycle_theta(A)
    L = lieify(A)
    lc = [[list(L.bracket.bracket(unit(9, i), unit(9, j))) for j in range(9)] for i in range(9)]
    bad_family = 0
    for _ in range(50):
        mu = [oracles.random_vector(9, rng) for _ in range(C.d)]
        theta = tuple(Mat([[sum((mu[k][m] * lc[i][j][m] for m in range(9)), Fraction(0)) for j in range(9)]
                           for i in range(9)]) for k in range(C.d))
        res = is_coboundary(A, CocycleData(C.d, C.a_basis, theta))
        if not res:
            bad_family += 1
            continue
        for k in range(C.d):
            if any(sum((res.mu[k, m] * lc[i][j][m] for m in range(9)), Fraction(0)) != theta[k][i, j]
                   for i in range(9) for j in range(9)):
                bad_family += 1
                break
    ok = mismatches == 0 and bad_family == 0
    return record(11, "oracle equivalence", ok,
                  f"{mismatches}/{triples} Hom-Jacobi mismatches, {bad_family}/50 coboundary round-trip failures")


# --------------------------------------------------------------------------


def test_criterion_1_golden_construction(tmp_path):
    assert criterion_1(tmp_path)


def test_criterion_2_axiom_suite():
    assert criterion_2()


def test_criterion_3_non_lie_witness():
    assert criterion_3()


def test_criterion_4_twist_nilpotency():
    assert criterion_4()


def test_criterion_5_lieification():
    assert criterion_5()


def test_criterion_6_perfectness():
    assert criterion_6()


def test_criterion_7_cocycle_chain():
    assert criterion_7()


def test_criterion_8_simplicity():
    assert criterion_8()


def test_criterion_9_decomposition_round_trip():
    assert criterion_9()


def test_criterion_10_property_suites():
    assert criterion_10()


def test_criterion_11_oracle_equivalence():
    assert criterion_11()


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        for n in range(1, 12):
            fn = globals()[f"criterion_{n}"]
            try:
                fn(Path(d)) if n == 1 else fn()
            except Exception as exc:  # report, keep going
                record(n, "raised", False, repr(exc))
            print(RESULTS[n])
