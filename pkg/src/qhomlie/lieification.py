"""The Lie bracket ``T∘[·,·]`` of an equivariant Hom-Lie algebra and its 2-cocycle."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .algebra import (
    ZERO,
    Check,
    CheckReport,
    HomLieAlgebra,
    StructureTensor,
    adjoint_matrix,
    center,
    check_quadratic_homlie,
    derived_subalgebra,
    equivariance_check,
    lower_central_series,
    to_dense,
)
from .linalg import Mat, Subspace, complement, image, kernel, orthogonal_complement, rref_solve


class LieificationError(ValueError):
    def __init__(self, message: str, check: Optional[Check] = None):
        super().__init__(message)
        self.check = check


def _require_equivariant(A: HomLieAlgebra) -> None:
    eq = equivariance_check(A)
    if not eq:
        raise LieificationError("twist is not equivariant", eq)


def _require_quadratic_nilpotent(A: HomLieAlgebra) -> None:
    for c in check_quadratic_homlie(A).checks:
        if not c:
            raise LieificationError(f"{c.name} fails", c)
    if A.dim and not (A.twist ** A.dim).is_zero():
        raise LieificationError("twist is not nilpotent")


def lieify(A: HomLieAlgebra) -> HomLieAlgebra:
    """Same space and form, bracket ``T([x, y])``, identity twist."""
    _require_equivariant(A)
    T = A.twist
    n = A.dim
    br = StructureTensor.from_function(n, lambda i, j: T @ to_dense(A.bracket.basis_bracket(i, j), n))
    return HomLieAlgebra(f"{A.name}_lie", A.basis_names, br, Mat.identity(n), A.form)


def nilpotency_transfer_check(A: HomLieAlgebra) -> CheckReport:
    """Compare the lower central series of ``A`` and of its Lie-ification term by term.

    Terms are numbered from ``g^1 = g``; the image bound reads
    ``g_Lie^k ⊂ Im(T^(k-1))``.
    """
    _require_equivariant(A)
    n = A.dim
    lie = lieify(A)
    terms = n + 2
    hom_series = lower_central_series(A, max_terms=terms)
    lie_series = lower_central_series(lie, max_terms=terms)
    rep = CheckReport()
    bad = next((k for k in range(terms) if not lie_series[k] <= hom_series[k]), None)
    rep.add(Check.ok("lie_terms_in_hom_terms") if bad is None
            else Check.fail("lie_terms_in_hom_terms", (bad + 1,), note="term index"))
    power = Mat.identity(n)
    bad = None
    for k in range(terms):
        if not lie_series[k] <= image(power):
            bad = k
            break
        power = power @ A.twist
    rep.add(Check.ok("lie_terms_in_twist_images") if bad is None
            else Check.fail("lie_terms_in_twist_images", (bad + 1,), note="term index"))
    if hom_series[-1].is_zero():
        rep.add(Check.ok("lie_nilpotent") if lie_series[-1].is_zero()
                else Check.fail("lie_nilpotent", (terms,), note="Lie series does not reach zero"))
    else:
        rep.add(Check.skip("lie_nilpotent", "Hom-Lie algebra is not nilpotent"))
    return rep


def nilpotency_step(A: HomLieAlgebra) -> Optional[int]:
    """Number of nonzero lower central terms when the series reaches zero, else None."""
    series = lower_central_series(A)
    if not series[-1].is_zero():
        return None
    return sum(1 for s in series if not s.is_zero())


# --------------------------------------------------------------------------
# the cocycle


@dataclass(frozen=True)
class CocycleData:
    """``theta[k][i][j] = B([a_k, e_i], e_j)``, the ``v_k`` component of theta."""

    d: int
    a_basis: Tuple[tuple, ...]
    theta: Tuple[Mat, ...]

    def value(self, i: int, j: int) -> tuple:
        return tuple(t[i, j] for t in self.theta)

    def with_entry(self, k: int, i: int, j: int, value, skew: bool = True) -> "CocycleData":
        """Copy with one entry replaced (and its mirror, unless ``skew`` is False)."""
        rows = [list(r) for r in self.theta[k].row_vectors()]
        rows[i][j] = value
        if skew:
            rows[j][i] = -value
        thetas = list(self.theta)
        thetas[k] = Mat(rows, cols=self.theta[k].cols)
        return CocycleData(self.d, self.a_basis, tuple(thetas))


def cocycle_theta(A: HomLieAlgebra) -> CocycleData:
    _require_quadratic_nilpotent(A)
    a = complement(image(A.twist)).vectors()
    thetas = []
    for k, ak in enumerate(a):
        th = adjoint_matrix(A, ak).T @ A.form
        if not (th + th.T).is_zero():
            raise LieificationError(f"theta component {k} is not skew")
        thetas.append(th)
    return CocycleData(len(a), tuple(a), tuple(thetas))


def is_cocycle(A: HomLieAlgebra, C: CocycleData) -> Check:
    """Skewness plus the trivial-coefficient cocycle identity on all basis triples."""
    n = A.dim
    for k, th in enumerate(C.theta):
        for i in range(n):
            for j in range(i, n):
                if th[i, j] != -th[j, i]:
                    return Check.fail("cocycle", (k, i, j), (th[i, j] + th[j, i],), note="not skew")
    lie = lieify(A)
    br = [[to_dense(lie.bracket.basis_bracket(i, j), n) for j in range(n)] for i in range(n)]

    def theta_at(u, z):
        return tuple(sum((u[m] * th[m, z] for m in range(n) if u[m]), ZERO) for th in C.theta)

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = [x + y + w for x, y, w in zip(theta_at(br[i][j], k), theta_at(br[j][k], i), theta_at(br[k][i], j))]
                if any(s):
                    return Check.fail("cocycle", (i, j, k), s)
    return Check.ok("cocycle")


@dataclass(frozen=True)
class CoboundaryResult:
    """``mu`` (``d x n``) with ``theta = mu ∘ [·,·]_Lie`` when one exists.

    Otherwise ``obstruction`` is ``(k, i, j)``: the ``v_k`` equations up to
    the pair ``(i, j)`` already have no common solution.
    """

    is_coboundary: bool
    mu: Optional[Mat] = None
    obstruction: Optional[Tuple[int, int, int]] = None

    def __bool__(self):
        return self.is_coboundary


def _pairs(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _first_inconsistent(rows, rhs, ncols):
    for end in range(1, len(rows) + 1):
        sol, _ = rref_solve(Mat(rows[:end], cols=ncols), tuple(rhs[:end]))
        if sol is None:
            return end - 1
    return None


def is_coboundary(A: HomLieAlgebra, C: CocycleData) -> CoboundaryResult:
    n = A.dim
    lie = lieify(A)
    pairs = _pairs(n)
    rows = [to_dense(lie.bracket.basis_bracket(i, j), n) for i, j in pairs]
    if not rows:
        return CoboundaryResult(True, Mat.zeros(C.d, n))
    W = Mat(rows, cols=n)
    mu_rows = []
    for k, th in enumerate(C.theta):
        rhs = [th[i, j] for i, j in pairs]
        sol, _ = rref_solve(W, tuple(rhs))
        if sol is None:
            p = _first_inconsistent(rows, rhs, n)
            return CoboundaryResult(False, None, (k,) + pairs[p])
        mu_rows.append(sol)
    return CoboundaryResult(True, Mat(mu_rows, cols=n))


# --------------------------------------------------------------------------
# recovering the original bracket


@dataclass(frozen=True)
class RecoveryMap:
    """``h: g ⊕ V -> g`` with ``[x, y] = h([x, y]_Lie + theta(x, y))``.

    ``matrix`` is ``n x (n + d)`` in the column convention; ``constrained``
    tells whether the side conditions' linear relaxations could be imposed
    on top of the bracket identity.
    """

    matrix: Mat
    flags: CheckReport
    constrained: bool

    @property
    def passed(self) -> bool:
        return self.flags.passed


def recover_h(A: HomLieAlgebra, C: CocycleData, seed: int = 20230417, attempts: int = 8) -> RecoveryMap:
    _require_quadratic_nilpotent(A)
    n, d = A.dim, C.d
    lie = lieify(A)
    pairs = _pairs(n)
    W_rows = [to_dense(lie.bracket.basis_bracket(i, j), n) + C.value(i, j) for i, j in pairs]
    targets = [to_dense(A.bracket.basis_bracket(i, j), n) for i, j in pairs]
    m = n + d
    # unknown: column-stacked H^T, i.e. row r of H is a block of m unknowns
    base_rows, base_rhs = [], []
    for w, t in zip(W_rows, targets):
        for r in range(n):
            row = [ZERO] * (n * m)
            row[r * m:(r + 1) * m] = w
            base_rows.append(row)
            base_rhs.append(t[r])
    if not base_rows:
        H = Mat.zeros(n, m)
        return RecoveryMap(H, _recovery_flags(A, C, H, True), False)
    sol, ker1 = rref_solve(Mat(base_rows, cols=n * m), tuple(base_rhs))
    if sol is None:
        p = _first_inconsistent(base_rows, base_rhs, n * m)
        i, j = pairs[p // n]
        raise LieificationError("bracket identity has no solution",
                                Check.fail("recovery_bracket", (i, j), note="first inconsistent pair"))
    extra_rows, extra_rhs = [], []
    # h(a_k) = 0
    for a in C.a_basis:
        for r in range(n):
            row = [ZERO] * (n * m)
            for c in range(n):
                row[r * m + c] = a[c]
            extra_rows.append(row)
            extra_rhs.append(ZERO)
    # h(V) ⊂ Ker T and h(g) ⊂ a^perp, written as annihilator conditions
    for cols, target in ((range(n, m), kernel(A.twist)),
                         (range(n), orthogonal_complement(Subspace.span(C.a_basis, n), A.form))):
        for w in target.annihilator().vectors():
            for c in cols:
                row = [ZERO] * (n * m)
                for r in range(n):
                    row[r * m + c] = w[r]
                extra_rows.append(row)
                extra_rhs.append(ZERO)
    sol2, ker2 = rref_solve(Mat(base_rows + extra_rows, cols=n * m), tuple(base_rhs + extra_rhs))
    constrained = sol2 is not None
    x, ker = (sol2, ker2) if constrained else (sol, ker1)
    # the equalities are rank conditions, so try a few seeded generic points of the solution space
    rng = random.Random(seed)
    directions = ker.vectors()
    best = None
    for attempt in range(attempts if directions else 1):
        pt = list(x)
        if attempt:
            for v in directions:
                c = Fraction(rng.randint(-3, 3))
                if c:
                    pt = [p + c * w for p, w in zip(pt, v)]
        H = Mat([pt[r * m:(r + 1) * m] for r in range(n)], cols=m)
        flags = _recovery_flags(A, C, H, True)
        if best is None or flags.passed:
            best = RecoveryMap(H, flags, constrained)
        if flags.passed:
            break
    return best


def _recovery_flags(A: HomLieAlgebra, C: CocycleData, H: Mat, identity_ok: bool) -> CheckReport:
    n, d = A.dim, C.d
    rep = CheckReport()
    rep.add(Check.ok("bracket_identity") if identity_ok else Check.fail("bracket_identity", ()))
    hV = Subspace.span([H.col(n + k) for k in range(d)], n)
    rep.add(Check.ok("h_of_V_is_kernel") if hV == kernel(A.twist)
            else Check.fail("h_of_V_is_kernel", (), note=f"dim h(V) = {hV.dim}"))
    hg = Subspace.span([H.col(c) for c in range(n)], n)
    aperp = orthogonal_complement(Subspace.span(C.a_basis, n), A.form)
    rep.add(Check.ok("h_of_g_is_a_perp") if hg == aperp
            else Check.fail("h_of_g_is_a_perp", (), note=f"dim h(g) = {hg.dim}, dim a^perp = {aperp.dim}"))
    a_embedded = Subspace.span([tuple(a) + (ZERO,) * d for a in C.a_basis], n + d)
    rep.add(Check.ok("kernel_is_a") if kernel(H) == a_embedded
            else Check.fail("kernel_is_a", (), note=f"dim Ker h = {kernel(H).dim}"))
    return rep


def center_triviality_consequences(A: HomLieAlgebra, C: Optional[CocycleData] = None) -> CheckReport:
    """What a non-coboundary theta forces: no common kernel of ``ad(a_j)``, no center, perfectness."""
    C = C if C is not None else cocycle_theta(A)
    if is_coboundary(A, C):
        raise LieificationError("theta is a coboundary; nothing follows")
    n = A.dim
    rep = CheckReport()
    rows = []
    for a in C.a_basis:
        rows.extend(adjoint_matrix(A, a).row_vectors())
    common = kernel(Mat(rows, cols=n)) if rows else Subspace.full(n)
    rep.add(Check.ok("ad_a_kernels_trivial") if common.is_zero()
            else Check.fail("ad_a_kernels_trivial", (), common.vectors()[0]))
    z = center(A)
    rep.add(Check.ok("center_trivial") if z.is_zero() else Check.fail("center_trivial", (), z.vectors()[0]))
    der = derived_subalgebra(A)
    rep.add(Check.ok("perfect") if der.is_full()
            else Check.fail("perfect", (), complement(der).vectors()[0], note="vector outside [g, g]"))
    return rep


__all__ = [
    "CoboundaryResult", "CocycleData", "LieificationError", "RecoveryMap",
    "center_triviality_consequences", "cocycle_theta", "is_coboundary", "is_cocycle",
    "lieify", "nilpotency_step", "nilpotency_transfer_check", "recover_h",
]
