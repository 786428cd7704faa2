"""Build the nine-dimensional sl2 example and take it apart again.

Run with ``python demos/sl2_walkthrough.py [eta]``.
"""
import sys
from fractions import Fraction

from qhomlie import (
    check_isometric_isomorphism,
    check_quadratic_homlie,
    cocycle_theta,
    decompose_thm22,
    example_sl2,
    is_coboundary,
    jacobi_defect,
    lieify,
    lower_central_series,
)


def show_brackets(A, title):
    print(title)
    for (i, j), coeffs in sorted(A.bracket.entries().items()):
        rhs = " + ".join(f"{c}*{A.basis_names[k]}" for k, c in coeffs)
        print(f"  [{A.basis_names[i]}, {A.basis_names[j]}] = {rhs}")


def main(eta=Fraction(1)):
    A = example_sl2(eta)
    show_brackets(A, f"Hom-Lie product for eta = {eta}:")
    print()
    print(check_quadratic_homlie(A))

    x1, v1, v2 = (A.basis_vector(n) for n in ("x1", "v1", "v2"))
    print("\nclassical Jacobiator at (x1, v1, v2):", A.describe(jacobi_defect(A, x1, v1, v2)))
    print("T^2 = 0:", (A.twist @ A.twist).is_zero())

    L = lieify(A)
    show_brackets(L, "\nLie bracket T([x, y]):")
    print("lower central series dims:", [S.dim for S in lower_central_series(L)])

    C = cocycle_theta(A)
    res = is_coboundary(A, C)
    print(f"\ntheta has {C.d} components; coboundary: {res.is_coboundary}; obstruction {res.obstruction}")

    dec = decompose_thm22(A)
    print(f"\ndecomposition kind: {dec.kind}")
    print("Killing form of s:", dec.killing.to_strings())
    print("eta against the Killing form:", dec.eta)
    iso = check_isometric_isomorphism(A, dec.reconstruction, dec.iso)
    print("reconstruction is isometrically isomorphic:", iso.passed)


if __name__ == "__main__":
    main(Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(1))
