"""The extension by a single derivation, and what its cocycle does not force.

Builds the four-dimensional toy algebra from a rotation on a Euclidean
plane, decomposes it, and shows that although its cocycle is not a
coboundary the algebra still has a center.
"""
from qhomlie import (
    center,
    center_triviality_consequences,
    check_quadratic_homlie,
    cocycle_theta,
    decompose_thm22,
    example_nilpotent_prop12,
    example_toy_prop12,
    is_coboundary,
    nilpotency_transfer_check,
)


def main():
    A = example_toy_prop12()
    print("toy algebra, basis", A.basis_names)
    print(check_quadratic_homlie(A))

    dec = decompose_thm22(A)
    d = dec.data
    print(f"\nkind {dec.kind}: D = {d.D.to_strings()}, v' = {[str(x) for x in d.vprime]}, lambda' = {d.lambda_prime}")

    C = cocycle_theta(A)
    print("\ntheta is a coboundary:", bool(is_coboundary(A, C)))
    print("center:", [A.describe(v) for v in center(A).vectors()])
    print(center_triviality_consequences(A, C))

    N = example_nilpotent_prop12()
    print("\nnilpotent variant, basis", N.basis_names)
    print(nilpotency_transfer_check(N))


if __name__ == "__main__":
    main()
