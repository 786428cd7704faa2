"""Double extensions of quadratic Hom-Lie algebras.

Two constructors are provided:

* :func:`extend_prop11` builds ``s ⊕ h ⊕ s*`` from a quadratic Lie
  algebra ``s`` acting through ``rho`` on a quadratic Hom-Lie algebra
  ``h``, with extra data ``f: s -> h`` and ``eta``;
* :func:`extend_prop12` builds ``Fd ⊕ h ⊕ Fc`` from a skew map ``D``, a
  vector ``v'`` of ``h`` and a scalar ``lambda'``.

Both refuse to build anything unless their validator passes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .algebra import (
    ONE,
    ZERO,
    AlgebraError,
    Check,
    CheckReport,
    HomLieAlgebra,
    StructureTensor,
    adjoint_matrix,
    check_quadratic_homlie,
    invariance_check,
    is_derivation,
    is_in_oB,
    jacobi_check,
    lie_algebra,
    symmetric_check,
    nondegenerate_check,
)
from .linalg import Mat, as_rat, bilinear, unit


class ConstructionError(ValueError):
    """Raised when a constructor's hypotheses fail; carries the report."""

    def __init__(self, message: str, report: CheckReport):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Prop11Data:
    """Input for the ``s ⊕ h ⊕ s*`` extension.

    ``f`` is ``dim h x dim s``; ``rho[i]`` is the matrix of ``rho(x_i)`` on
    ``h``; ``s_form`` is an invariant metric on ``s``.
    """

    h: HomLieAlgebra
    s_bracket: StructureTensor
    s_form: Mat
    f: Mat
    rho: Tuple[Mat, ...]
    eta: Fraction
    s_names: Optional[Tuple[str, ...]] = None
    dual_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(self.rho))
        object.__setattr__(self, "eta", as_rat(self.eta))
        r, m = self.s_bracket.dim, self.h.dim
        if self.h.form is None:
            raise AlgebraError("h needs a form")
        if self.s_form.shape != (r, r):
            raise AlgebraError(f"s_form must be {r}x{r}")
        if self.f.shape != (m, r):
            raise AlgebraError(f"f must be {m}x{r}")
        if len(self.rho) != r or any(R.shape != (m, m) for R in self.rho):
            raise AlgebraError(f"rho must be {r} matrices of size {m}x{m}")

    @property
    def r(self) -> int:
        return self.s_bracket.dim

    def rho_of(self, x: Sequence) -> Mat:
        """``rho`` extended linearly to an arbitrary element of ``s``."""
        m = self.h.dim
        out = Mat.zeros(m, m)
        for c, R in zip(x, self.rho):
            if c:
                out = out + R * c
        return out


@dataclass(frozen=True)
class Prop12Data:
    """Input for the ``Fd ⊕ h ⊕ Fc`` extension."""

    h: HomLieAlgebra
    D: Mat
    vprime: Tuple[Fraction, ...]
    lambda_prime: Fraction

    def __post_init__(self):
        object.__setattr__(self, "vprime", tuple(as_rat(x) for x in self.vprime))
        object.__setattr__(self, "lambda_prime", as_rat(self.lambda_prime))
        m = self.h.dim
        if self.h.form is None:
            raise AlgebraError("h needs a form")
        if self.D.shape != (m, m):
            raise AlgebraError(f"D must be {m}x{m}")
        if len(self.vprime) != m:
            raise AlgebraError(f"v' must have length {m}")


def _matrix_check(name: str, M: Mat, indices_prefix=()) -> Check:
    """Pass iff ``M`` is zero; otherwise report the first nonzero column."""
    for j in range(M.cols):
        col = M.col(j)
        if any(col):
            return Check.fail(name, tuple(indices_prefix) + (j,), col)
    return Check.ok(name)


def _structural_h(h: HomLieAlgebra, label: str = "h") -> CheckReport:
    rep = CheckReport()
    for c in check_quadratic_homlie(h).checks:
        rep.add(c.renamed(f"{label}_{c.name}"))
    return rep


def validate_prop11(d: Prop11Data) -> CheckReport:
    """Structural invariants, then conditions (i), (ii), (iii) on basis vectors."""
    rep = CheckReport()
    h = d.h
    Bh = h.form
    r = d.r
    rep.extend(_structural_h(h))
    bad = next((i for i, R in enumerate(d.rho) if not is_in_oB(Bh, R)), None)
    if bad is None:
        rep.add(Check.ok("rho_in_oB"))
    else:
        R = d.rho[bad]
        rep.add(Check.fail("rho_in_oB", (bad,), tuple(x for row in (R.T @ Bh + Bh @ R).row_vectors() for x in row),
                           note=f"rho(x_{bad}) is not skew for B_h"))
    rep.add(jacobi_check(d.s_bracket, "s_jacobi"))
    rep.add(symmetric_check(d.s_form, "s_form_symmetric"))
    rep.add(nondegenerate_check(d.s_form, "s_form_nondegenerate"))
    if d.s_form.is_symmetric():
        rep.add(invariance_check(d.s_bracket, d.s_form, "s_form_invariant"))
    else:
        rep.add(Check.skip("s_form_invariant", "form not symmetric"))
    names = ("cond_i", "cond_ii", "cond_ii_derivation", "cond_iii")
    if not rep.passed:
        for n in names:
            rep.add(Check.skip(n, "structural invariant failed"))
        return rep

    s_alg = lie_algebra("s", [f"s{i}" for i in range(r)], d.s_bracket)
    L = h.twist
    f = d.f
    ad_s = [adjoint_matrix(s_alg, unit(r, i)) for i in range(r)]
    ad_h = lambda v: adjoint_matrix(h, v)

    # (i) f ∘ ad_s(x) = rho(x) ∘ f
    rep.add(_first_failure("cond_i", [((i,), f @ ad_s[i] - d.rho[i] @ f) for i in range(r)]))

    # (ii) L ∘ rho(x) = ad_h(f(x)) = rho(x) ∘ L, and this map is a derivation of h
    def cond_ii():
        for i in range(r):
            adf = ad_h(f.col(i))
            yield (i, 0), L @ d.rho[i] - adf
            yield (i, 1), d.rho[i] @ L - adf

    rep.add(_first_failure("cond_ii", cond_ii()))
    der = next(((i, c) for i in range(r) for c in [is_derivation(h, L @ d.rho[i])] if not c), None)
    if der is None:
        rep.add(Check.ok("cond_ii_derivation"))
    else:
        i, c = der
        rep.add(Check.fail("cond_ii_derivation", (i,) + c.witness.indices, c.witness.defect))

    # (iii) rho([x, y]_s) ∘ L = [rho(x), rho(y)] ∘ L
    def cond_iii():
        for a in range(r):
            for b in range(a + 1, r):
                lhs = d.rho_of(s_alg.bracket.bracket(unit(r, a), unit(r, b))) @ L
                rhs = (d.rho[a] @ d.rho[b] - d.rho[b] @ d.rho[a]) @ L
                yield (a, b), lhs - rhs

    rep.add(_first_failure("cond_iii", cond_iii()))
    return rep


def _first_failure(name: str, items) -> Check:
    for idx, M in items:
        c = _matrix_check(name, M, idx)
        if not c:
            return c
    return Check.ok(name)


def extend_prop11(d: Prop11Data, name: str = "double_extension") -> HomLieAlgebra:
    """The quadratic Hom-Lie algebra on ``s ⊕ h ⊕ s*``.

    Basis order is ``(x_1..x_r, h-basis, xi^1..xi^r)`` with
    ``xi^j(x_k) = delta_jk``.
    """
    rep = validate_prop11(d)
    if not rep.passed:
        bad = ", ".join(c.name for c in rep.failures())
        raise ConstructionError(f"hypotheses not satisfied: {bad}", rep)
    h, r, m = d.h, d.r, d.h.dim
    n = 2 * r + m
    S0, H0, D0 = 0, r, r + m  # block offsets
    Bh = h.form
    sb = d.s_bracket
    br = {}

    def put(i, j, vec_sparse):
        if vec_sparse:
            br[(i, j)] = vec_sparse

    for a in range(r):
        for b in range(a + 1, r):
            put(S0 + a, S0 + b, {S0 + k: c for k, c in sb.basis_bracket(a, b).items()})
        for b in range(m):
            col = d.rho[a].col(b)
            put(S0 + a, H0 + b, {H0 + k: c for k, c in enumerate(col) if c})
        for b in range(r):
            # ad*(x_a)(xi^b) = -xi^b ∘ ad(x_a): value on x_c is -[x_a, x_c]_b
            put(S0 + a, D0 + b, {D0 + c: -sb.coefficient(a, c, b) for c in range(r) if sb.coefficient(a, c, b)})
    rho_u = [[R.col(b) for b in range(m)] for R in d.rho]
    for a in range(m):
        for b in range(a + 1, m):
            v = {H0 + k: c for k, c in h.bracket.basis_bracket(a, b).items()}
            for j in range(r):
                g = bilinear(Bh, rho_u[j][a], unit(m, b))
                if g:
                    v[D0 + j] = g
            put(H0 + a, H0 + b, v)
    bracket = StructureTensor(n, br)

    T = [[ZERO] * n for _ in range(n)]
    R_map = Bh @ d.f  # R(u_b) = sum_j B_h(u_b, f(x_j)) xi^j, i.e. (B_h f)[b][j]
    for a in range(r):
        for k in range(m):
            T[H0 + k][S0 + a] = d.f[k, a]
        for j in range(r):
            T[D0 + j][S0 + a] = d.eta * d.s_form[a, j]
    for b in range(m):
        for k in range(m):
            T[H0 + k][H0 + b] = h.twist[k, b]
        for j in range(r):
            T[D0 + j][H0 + b] = R_map[b, j]
    B = [[ZERO] * n for _ in range(n)]
    for a in range(r):
        B[S0 + a][D0 + a] = ONE
        B[D0 + a][S0 + a] = ONE
    for a in range(m):
        for b in range(m):
            B[H0 + a][H0 + b] = Bh[a, b]

    s_names = d.s_names or tuple(f"x{i + 1}" for i in range(r))
    dual_names = d.dual_names or tuple(f"xi{i + 1}" for i in range(r))
    names = tuple(s_names) + tuple(h.basis_names) + tuple(dual_names)
    return HomLieAlgebra(name, names, bracket, Mat(T, cols=n), Mat(B, cols=n))


def validate_prop12(d: Prop12Data) -> CheckReport:
    rep = CheckReport()
    h = d.h
    Bh = h.form
    rep.extend(_structural_h(h))
    if is_in_oB(Bh, d.D):
        rep.add(Check.ok("D_in_oB"))
    else:
        M = d.D.T @ Bh + Bh @ d.D
        rep.add(_matrix_check("D_in_oB", M))
    names = ("cond_i", "cond_ii", "cond_iii")
    if not rep.passed:
        for n in names:
            rep.add(Check.skip(n, "structural invariant failed"))
        return rep
    L, D = h.twist, d.D
    adv = adjoint_matrix(h, d.vprime)
    rep.add(_first_failure("cond_i", [((0,), L @ D - adv), ((1,), D @ L - adv)]))
    c = is_derivation(h, adv)
    rep.add(c.renamed("cond_ii"))
    Dv = D @ d.vprime
    rep.add(Check.ok("cond_iii") if not any(Dv) else Check.fail("cond_iii", (), Dv, note="D(v') != 0"))
    return rep


def extend_prop12(d: Prop12Data, name: str = "one_dim_extension") -> HomLieAlgebra:
    """The quadratic Hom-Lie algebra on ``Fd ⊕ h ⊕ Fc``; basis order ``(d, h, c)``."""
    rep = validate_prop12(d)
    if not rep.passed:
        bad = ", ".join(c.name for c in rep.failures())
        raise ConstructionError(f"hypotheses not satisfied: {bad}", rep)
    h = d.h
    m = h.dim
    n = m + 2
    H0, C = 1, m + 1
    Bh, D = h.form, d.D
    br = {}
    for a in range(m):
        col = D.col(a)
        v = {H0 + k: c for k, c in enumerate(col) if c}
        if v:
            br[(0, H0 + a)] = v
        for b in range(a + 1, m):
            v = {H0 + k: c for k, c in h.bracket.basis_bracket(a, b).items()}
            g = bilinear(Bh, col, unit(m, b))
            if g:
                v[C] = g
            if v:
                br[(H0 + a, H0 + b)] = v
    T = [[ZERO] * n for _ in range(n)]
    for k in range(m):
        T[H0 + k][0] = d.vprime[k]
    T[C][0] = d.lambda_prime
    Bv = Bh @ d.vprime
    for b in range(m):
        for k in range(m):
            T[H0 + k][H0 + b] = h.twist[k, b]
        T[C][H0 + b] = Bv[b]
    B = [[ZERO] * n for _ in range(n)]
    B[0][C] = B[C][0] = ONE
    for a in range(m):
        for b in range(m):
            B[H0 + a][H0 + b] = Bh[a, b]
    names = ("d",) + tuple(h.basis_names) + ("c",)
    return HomLieAlgebra(name, names, StructureTensor(n, br), Mat(T, cols=n), Mat(B, cols=n))


# --------------------------------------------------------------------------
# shipped examples


def sl2_bracket() -> StructureTensor:
    """``[x1, x2] = x3``, ``[x2, x3] = x1``, ``[x3, x1] = x2``."""
    return StructureTensor.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}})


def sl2_rho() -> Tuple[Mat, Mat, Mat]:
    # columns are images of v1, v2, v3
    r1 = Mat.from_columns([(0, -1, 0), (1, 0, 0), (0, 0, 0)], 3)
    r2 = Mat.from_columns([(0, 1, 0), (-1, 0, 0), (0, 0, 0)], 3)
    r3 = Mat.from_columns([(0, 0, -1), (0, 0, 0), (1, 0, 0)], 3)
    return r1, r2, r3


def abelian_quadratic(dim: int, form: Optional[Mat] = None, names: Optional[Sequence[str]] = None,
                      twist: Optional[Mat] = None, name: str = "h") -> HomLieAlgebra:
    names = tuple(names) if names is not None else tuple(f"v{i + 1}" for i in range(dim))
    return HomLieAlgebra(name, names, StructureTensor.abelian(dim),
                         twist if twist is not None else Mat.zeros(dim, dim),
                         form if form is not None else Mat.identity(dim))


def sl2_data(eta=1) -> Prop11Data:
    h = abelian_quadratic(3)
    return Prop11Data(h=h, s_bracket=sl2_bracket(), s_form=Mat.identity(3), f=Mat.zeros(3, 3),
                      rho=sl2_rho(), eta=as_rat(eta))


def example_sl2(eta=1) -> HomLieAlgebra:
    """The nine-dimensional example ``sl2 ⊕ F^3 ⊕ sl2*``.

    ``h`` is abelian with identity form and zero twist, ``f = 0``, and
    ``T(x_j) = eta xi^j``.
    """
    return extend_prop11(sl2_data(eta), name=f"sl2_example_eta_{as_rat(eta)}".replace("/", "_"))


def toy_prop12_data() -> Prop12Data:
    """Abelian 2-dim ``h`` with identity form, ``D`` a rotation generator, ``v' = 0``, ``lambda' = 1``."""
    return Prop12Data(h=abelian_quadratic(2, names=("e0", "e1")),
                      D=Mat([[0, 1], [-1, 0]]), vprime=(0, 0), lambda_prime=1)


def example_toy_prop12() -> HomLieAlgebra:
    return extend_prop12(toy_prop12_data(), name="toy_prop12")


def nilpotent_prop12_data() -> Prop12Data:
    """Split 3-dim ``h`` (anti-diagonal form) with a nilpotent ``D`` in its orthogonal algebra."""
    Bh = Mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    D = Mat([[0, 1, 0], [0, 0, -1], [0, 0, 0]])
    return Prop12Data(h=abelian_quadratic(3, form=Bh, names=("u1", "u2", "u3")),
                      D=D, vprime=(0, 0, 0), lambda_prime=1)


def example_nilpotent_prop12() -> HomLieAlgebra:
    return extend_prop12(nilpotent_prop12_data(), name="nilpotent_prop12")


def direct_sum(A: HomLieAlgebra, C: HomLieAlgebra, name: Optional[str] = None) -> HomLieAlgebra:
    """Orthogonal direct sum with every structure map block-diagonal."""
    n, m = A.dim, C.dim
    br = {k: dict(v) for k, v in A.bracket.entries().items()}
    for (i, j), sp in C.bracket.entries().items():
        br[(n + i, n + j)] = {n + k: c for k, c in sp}
    form = None
    if A.form is not None and C.form is not None:
        form = Mat.block_diag(A.form, C.form)
    names = tuple(f"{x}_a" for x in A.basis_names) + tuple(f"{x}_b" for x in C.basis_names)
    return HomLieAlgebra(name or f"{A.name}+{C.name}", names, StructureTensor(n + m, br),
                         Mat.block_diag(A.twist, C.twist), form)
