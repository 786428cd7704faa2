"""Structure theory for equivariant, nilpotent twist maps.

The pipeline in :func:`decompose_thm22` takes an (assumed indecomposable)
quadratic Hom-Lie algebra with nilpotent equivariant twist, finds a maximal
proper ideal ``I`` containing ``Ker(T)``, splits

    g = s ⊕ h ⊕ I^perp,      I = h ⊕ I^perp,

with ``s`` a subalgebra, reads off every block of the bracket and of ``T``,
rebuilds the algebra with one of the two double-extension constructors and
returns the isometric isomorphism between input and rebuild.  Every
identity the block maps must satisfy is checked exactly along the way.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import (
    ONE,
    ZERO,
    AlgebraError,
    Check,
    CheckReport,
    HomLieAlgebra,
    StructureTensor,
    adjoint_matrix,
    bracket_span,
    center,
    check_quadratic_homlie,
    equivariance_check,
    ideal_closure,
    invariance_check,
    is_derivation,
    is_ideal,
    jacobi_check,
    lie_algebra,
    restrict_bracket,
    symmetric_check,
    to_dense,
    to_sparse,
)
from .constructions import Prop11Data, Prop12Data, extend_prop11, extend_prop12
from .linalg import (
    LinalgError,
    Mat,
    Subspace,
    bilinear,
    complement,
    gram,
    image,
    is_nondegenerate,
    kernel,
    orthogonal_complement,
    rref_solve,
    unit,
    witt_split,
)

PROBE_SEED = 20230417
PROBE_BUDGET = 24


class StructureError(ValueError):
    """A verification step failed; ``check`` names the failed identity and carries a witness."""

    def __init__(self, message: str, check: Optional[Check] = None):
        super().__init__(message)
        self.check = check


# --------------------------------------------------------------------------
# Fitting decomposition


@dataclass(frozen=True)
class FittingResult:
    ell: int
    image_part: Subspace
    kernel_part: Subspace
    report: CheckReport


def fitting(A: HomLieAlgebra) -> FittingResult:
    """``g = Im(T^l) ⊕ Ker(T^l)`` at the first exponent where the image chain stalls."""
    eq = equivariance_check(A)
    if not eq:
        raise StructureError("twist is not equivariant", eq)
    T = A.twist
    n = A.dim
    power = T
    ell = 1
    im = image(power)
    while True:
        nxt_power = power @ T
        nxt = image(nxt_power)
        if nxt == im:
            break
        power, im = nxt_power, nxt
        ell += 1
    ker = kernel(power)
    rep = CheckReport()
    direct = (im & ker).is_zero() and (im + ker).is_full()
    rep.add(Check.ok("direct_sum") if direct else Check.fail("direct_sum", (), (), note="parts overlap or do not span"))
    rep.add(is_ideal(A, im).renamed("image_part_ideal"))
    rep.add(is_ideal(A, ker).renamed("kernel_part_ideal"))
    rep.add(jacobi_check(A.bracket, "image_part_lie", basis=im.vectors()))
    restricted = Mat([im.coordinates(T @ v) for v in im.vectors()], cols=im.dim).T if im.dim else Mat.zeros(0, 0)
    rep.add(Check.ok("image_part_invertible") if restricted.rank() == im.dim
            else Check.fail("image_part_invertible", (), (), note="twist singular on image part"))
    kpow = [ker.coordinates(power @ v) for v in ker.vectors()]
    rep.add(Check.ok("kernel_part_nilpotent") if all(not any(c) for c in kpow)
            else Check.fail("kernel_part_nilpotent", (), (), note="twist power nonzero on kernel part"))
    return FittingResult(ell, im, ker, rep)


def is_nilpotent_map(T: Mat) -> bool:
    return (T ** T.rows).is_zero() if T.rows else True


# --------------------------------------------------------------------------
# maximal ideals


def _probe_vectors(J: Subspace, seed: int, budget: int):
    n = J.ambient_dim
    outside = [i for i in range(n) if not J.contains(unit(n, i))]
    candidates = [unit(n, i) for i in outside]
    for a in range(len(outside)):
        for b in range(a + 1, len(outside)):
            v = [ZERO] * n
            v[outside[a]] = v[outside[b]] = ONE
            candidates.append(tuple(v))
    rng = random.Random(seed)
    for _ in range(budget):
        candidates.append(tuple(Fraction(rng.randint(-3, 3)) for _ in range(n)))
    return [v for v in candidates if not J.contains(v)]


def maximal_proper_ideal_containing(A: HomLieAlgebra, S: Subspace, seed: int = PROBE_SEED,
                                    budget: int = PROBE_BUDGET) -> Subspace:
    """Greedily enlarge the ideal generated by ``S`` while it stays proper.

    Maximality is certified only against the probe set. Each standard basis
    vector outside the result, and each pairwise sum of them, must generate
    the whole algebra when added to it. So must ``budget`` seeded random
    integer combinations.
    """
    J = ideal_closure(A, S)
    if J.is_full():
        raise StructureError("no proper ideal contains the given subspace")
    grown = True
    while grown:
        grown = False
        for v in _probe_vectors(J, seed, budget):
            K = ideal_closure(A, J + Subspace.span([v], A.dim))
            if not K.is_full():
                J = K
                grown = True
                break
    return J


# --------------------------------------------------------------------------
# Killing form and the simplicity criterion


def _ad_matrices(br: StructureTensor) -> List[Mat]:
    n = br.dim
    return [Mat.from_columns([to_dense(br.basis_bracket(i, j), n) for j in range(n)], n) for i in range(n)]


def killing_form(bracket: StructureTensor) -> Mat:
    """``K(e_i, e_j) = trace(ad e_i ∘ ad e_j)``."""
    ads = _ad_matrices(bracket)
    n = bracket.dim
    K = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M = ads[i] @ ads[j]
            t = sum((M[k, k] for k in range(n)), ZERO)
            K[i][j] = K[j][i] = t
    return Mat(K, cols=n)


def is_simple_thmA(bracket: StructureTensor, B: Mat) -> bool:
    """Simplicity of a quadratic Lie algebra via ``ad(g) = o(B)``.

    Checks that every ``ad(e_i)`` is skew for ``B``, that the ``ad(e_i)``
    span a space of dimension ``n(n-1)/2 = dim o(B)``, and that the center
    is trivial.
    """
    n = bracket.dim
    jac = jacobi_check(bracket)
    if not jac:
        raise StructureError("bracket is not a Lie bracket", jac)
    if not B.is_symmetric() or not is_nondegenerate(B):
        raise StructureError("form must be symmetric and nondegenerate")
    inv = invariance_check(bracket, B)
    if not inv:
        raise StructureError("form is not invariant", inv)
    ads = _ad_matrices(bracket)
    if any(not (M.T @ B + B @ M).is_zero() for M in ads):
        return False
    flat = Mat([tuple(x for row in M.row_vectors() for x in row) for M in ads], cols=n * n) if n else Mat.zeros(0, 0)
    if flat.rank() != n * (n - 1) // 2:
        return False
    return center(lie_algebra("g", [f"e{i}" for i in range(n)], bracket)).is_zero()


# --------------------------------------------------------------------------
# straightening the complement of a maximal ideal


@dataclass(frozen=True)
class StraightenResult:
    """Closed complement of a maximal ideal.

    ``start`` is the complement the computation began with (basis ``b_c``)
    and ``lambda_tensor[(a, b)]`` the component of ``[b_a, b_b]`` along the
    ideal.  ``layers`` is the chain of ideals the correction ran through,
    innermost ``Ker T ∩ Im T`` first.  For the innermost layer ``D[i]`` is the
    map with ``Lambda_i(x, y) = K(D_i x, y)`` and ``correction_vectors[i]``
    an ``x_i`` with ``D_i = ad(x_i)``.  ``correction`` has column ``c`` equal
    to ``phi(b_c)``, so that ``s = {x + phi(x)}``; ``phi`` is the matrix of
    ``x -> x - phi(x)`` on the start basis.
    """

    s: Subspace
    start: Subspace
    s_bracket: StructureTensor
    lambda_tensor: Dict[Tuple[int, int], tuple]
    layers: Tuple[Subspace, ...] = ()
    D: Tuple[Mat, ...] = ()
    correction_vectors: Tuple[tuple, ...] = ()
    correction: Optional[Mat] = None
    phi: Optional[Mat] = None
    killing: Optional[Mat] = None


def preimage(T: Mat, S: Subspace) -> Subspace:
    """``{x : T x in S}``."""
    ann = S.annihilator().vectors()
    if not ann:
        return Subspace.full(T.cols)
    return kernel(Mat(ann, cols=T.rows) @ T)


def correction_layers(A: HomLieAlgebra, I: Subspace, recursive: bool = True) -> List[Subspace]:
    """Increasing chain of ideals inside ``I`` with abelian successive quotients.

    Starts at ``Z_1 = Ker T ∩ Im T``.  In recursive mode ``Z_{j+1}/Z_j`` is
    ``Ker ∩ Im`` of the twist induced on ``g/Z_j``; once that stalls, the
    derived series of ``I`` taken modulo the last layer finishes the chain up
    to ``I`` when ``I/Z_k`` is solvable.
    """
    T = A.twist
    imT = image(T)
    chain = [kernel(T) & imT]
    if not recursive:
        return chain
    while not imT <= chain[-1]:
        nxt = preimage(T, chain[-1]) & (imT + chain[-1])
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    base = chain[-1]
    derived = [I]
    while not derived[-1] <= base:
        nxt = bracket_span(A, derived[-1], derived[-1]) + base
        if nxt == derived[-1]:
            return chain  # I/Z_k is not solvable
        derived.append(nxt)
    chain.extend(d for d in reversed(derived[:-1]) if not d <= base)
    return chain


def _split(w, bs: List[tuple], Z: Subspace, n: int):
    """Write ``w`` in ``span(bs) ⊕ Z``; None if it lies outside."""
    cols = list(bs) + list(Z.vectors())
    sol, _ = rref_solve(Mat.from_columns(cols, n), w)
    if sol is None:
        return None
    q = len(bs)
    rest = [ZERO] * n
    for coef, z in zip(sol[q:], Z.vectors()):
        if coef:
            for k, x in enumerate(z):
                rest[k] += coef * x
    return tuple(sol[:q]), tuple(rest)


def _defects(A: HomLieAlgebra, bs: List[tuple], Z: Subspace):
    n, q = A.dim, len(bs)
    sb, lam = {}, {}
    sp = [to_sparse(b) for b in bs]
    for a in range(q):
        for b in range(a + 1, q):
            w = to_dense(A.bracket.sparse_bracket(sp[a], sp[b]), n)
            parts = _split(w, bs, Z, n)
            if parts is None:
                return None
            sb[(a, b)] = parts[0]
            if any(parts[1]):
                lam[(a, b)] = parts[1]
    return StructureTensor(q, sb), lam


def _layer_correction(A: HomLieAlgebra, bs: List[tuple], s_bracket: StructureTensor,
                      lam: Dict[Tuple[int, int], tuple], Z: Subspace, inner: Subspace) -> List[tuple]:
    """``phi: s -> Z`` with ``Lambda(x, y) = phi([x, y]_s) - [x, phi y] + [y, phi x]`` modulo ``inner``."""
    n, q = A.dim, len(bs)
    zs = [z for z in _basis_extension(inner, Z)]
    t = len(zs)
    ann = inner.annihilator().vectors() if not inner.is_zero() else tuple(unit(n, i) for i in range(n))
    Q = Mat(ann, cols=n)
    zsp = [to_sparse(z) for z in zs]
    br_bz = [[Q @ to_dense(A.bracket.sparse_bracket(to_sparse(bs[a]), zsp[k]), n) for k in range(t)]
             for a in range(q)]
    qz = [Q @ z for z in zs]
    rows, rhs = [], []
    for a in range(q):
        for b in range(a + 1, q):
            sab = s_bracket.basis_bracket(a, b)
            target = Q @ lam.get((a, b), (ZERO,) * n)
            for comp in range(Q.rows):
                row = []
                for k in range(t):
                    for c in range(q):
                        val = sab.get(c, ZERO) * qz[k][comp]
                        if c == b:
                            val -= br_bz[a][k][comp]
                        if c == a:
                            val += br_bz[b][k][comp]
                        row.append(val)
                rows.append(row)
                rhs.append(target[comp])
    if not rows or t == 0:
        if any(any(Q @ v) for v in lam.values()):
            raise StructureError("no correction closes the complement")
        return [(ZERO,) * n for _ in range(q)]
    sol, _ = rref_solve(Mat(rows, cols=t * q), tuple(rhs))
    if sol is None:
        raise StructureError("no correction closes the complement")
    out = []
    for c in range(q):
        v = [ZERO] * n
        for k in range(t):
            coef = sol[k * q + c]
            if coef:
                for m, x in enumerate(zs[k]):
                    v[m] += coef * x
        out.append(tuple(v))
    return out


def _basis_extension(inner: Subspace, outer: Subspace) -> List[tuple]:
    """Vectors of ``outer`` completing a basis of ``inner``."""
    acc = inner
    out = []
    for v in outer.vectors():
        if not acc.contains(v):
            out.append(v)
            acc = acc + Subspace.span([v], outer.ambient_dim)
    return out


def _inner_diagnostics(A, bs, s_bracket, lam, Z):
    """The maps ``D_i`` and vectors ``x_i`` for a defect valued in ``Z``."""
    n, q = A.dim, len(bs)
    K = killing_form(s_bracket)
    if not is_nondegenerate(K):
        raise StructureError("quotient is not semisimple (degenerate Killing form)")
    K_inv = K.inverse()
    ads = _ad_matrices(s_bracket)
    ad_flat = Mat.from_columns([tuple(x for row in M.row_vectors() for x in row) for M in ads], q * q)
    zero = (ZERO,) * n
    coords = {}
    for a in range(q):
        for b in range(q):
            if a < b:
                coords[(a, b)] = Z.coordinates(lam.get((a, b), zero))
            elif a > b:
                coords[(a, b)] = tuple(-x for x in Z.coordinates(lam.get((b, a), zero)))
    Ds, xs = [], []
    for i in range(Z.dim):
        M = Mat([[coords[(a, b)][i] if a != b else ZERO for b in range(q)] for a in range(q)], cols=q)
        Di = K_inv @ M.T
        if not (Di.T @ K + K @ Di).is_zero():
            raise StructureError(f"D_{i} is not skew for the Killing form")
        sol, _ = rref_solve(ad_flat, tuple(x for row in Di.row_vectors() for x in row))
        if sol is None:
            raise StructureError(f"D_{i} is not inner: quotient is not simple")
        Ds.append(Di)
        xs.append(tuple(sum((sol[c] * bs[c][k] for c in range(q)), ZERO) for k in range(n)))
    return K, tuple(Ds), tuple(xs)


def straighten(A: HomLieAlgebra, I: Subspace, start: Optional[Subspace] = None,
               recursive: bool = False) -> StraightenResult:
    """Find a complement ``s`` of the maximal ideal ``I`` with ``[s, s] ⊂ s``.

    By default the defect of the start complement must already lie in
    ``Ker T ∩ Im T``.  With ``recursive=True`` the correction instead walks
    down the chain from :func:`correction_layers`, one abelian layer at a time.
    """
    eq = equivariance_check(A)
    if not eq:
        raise StructureError("twist is not equivariant", eq)
    if not is_nilpotent_map(A.twist):
        raise StructureError("twist is not nilpotent")
    chk = is_ideal(A, I)
    if not chk:
        raise StructureError("not an ideal", chk)
    n = A.dim
    s0 = start if start is not None else complement(I)
    if s0.dim + I.dim != n or not (s0 + I).is_full():
        raise StructureError("start subspace is not a complement of the ideal")
    q = s0.dim
    bs0 = list(s0.vectors())
    s_bracket, lam = _defects(A, bs0, I)
    if q == 1 or not lam:
        return StraightenResult(s0, s0, s_bracket, lam)

    layers = correction_layers(A, I, recursive)
    top = _defects(A, bs0, layers[-1])
    if top is None:
        ab, v = sorted(lam.items())[0]
        raise StructureError("unsupported configuration: defect leaves Ker(T) ∩ Im(T)"
                             if len(layers) == 1 else
                             "unsupported configuration: defect leaves the twist layers",
                             Check.fail("lambda_in_Z", ab, v))
    bs = bs0
    total = [(ZERO,) * n for _ in range(q)]
    K, Ds, xs = None, (), ()
    for j in range(len(layers) - 1, -1, -1):
        Z = layers[j]
        inner = layers[j - 1] if j else Subspace.zero(n)
        s_br, lam_j = _defects(A, bs, Z)
        if j == 0 and lam_j:
            K, Ds, xs = _inner_diagnostics(A, bs, s_br, lam_j, Z)
        if not lam_j:
            continue
        phi_j = _layer_correction(A, bs, s_br, lam_j, Z, inner)
        bs = [tuple(x + y for x, y in zip(b, p)) for b, p in zip(bs, phi_j)]
        total = [tuple(x + y for x, y in zip(t, p)) for t, p in zip(total, phi_j)]

    s = Subspace.span(bs, n)
    closed = restrict_bracket(A, s)
    if closed is None:
        raise StructureError("corrected complement is not closed under the bracket")
    if not (s + I).is_full():
        raise StructureError("corrected complement meets the ideal")
    correction = Mat.from_columns(total, n)
    phi = Mat.from_columns([tuple(x - y for x, y in zip(bs0[c], total[c])) for c in range(q)], n)
    return StraightenResult(s, s0, closed, lam, tuple(layers), Ds, xs, correction, phi, K)


# --------------------------------------------------------------------------
# isometric isomorphisms


def check_isometric_isomorphism(A1: HomLieAlgebra, A2: HomLieAlgebra, P: Mat) -> CheckReport:
    rep = CheckReport()
    n = A1.dim
    if A2.dim != n or P.shape != (n, n):
        raise AlgebraError("dimensions do not match")
    if P.rank() == n:
        rep.add(Check.ok("bijective"))
    else:
        rep.add(Check.fail("bijective", (), kernel(P).vectors()[0], note="kernel vector"))
    cols = [to_sparse(c) for c in P.columns()]
    bad = None
    for i in range(n):
        for j in range(i + 1, n):
            lhs = P @ to_dense(A1.bracket.basis_bracket(i, j), n)
            rhs = to_dense(A2.bracket.sparse_bracket(cols[i], cols[j]), n)
            if lhs != rhs:
                bad = Check.fail("bracket_preserved", (i, j), tuple(x - y for x, y in zip(lhs, rhs)))
                break
        if bad:
            break
    rep.add(bad or Check.ok("bracket_preserved"))
    M = P @ A1.twist - A2.twist @ P
    j = next((j for j in range(n) if any(M.col(j))), None)
    rep.add(Check.ok("twist_intertwined") if j is None else Check.fail("twist_intertwined", (j,), M.col(j)))
    if A1.form is None or A2.form is None:
        rep.add(Check.skip("isometric", "missing form"))
    else:
        G = P.T @ A2.form @ P - A1.form
        ij = next(((i, j) for i in range(n) for j in range(n) if G[i, j]), None)
        rep.add(Check.ok("isometric") if ij is None else Check.fail("isometric", ij, (G[ij[0], ij[1]],)))
    return rep


# --------------------------------------------------------------------------
# the decomposition


@dataclass
class DecompositionResult:
    """Everything the decomposition extracts.

    Block maps are matrices in the adapted bases of ``s``, ``h`` and
    ``I^perp`` (the latter chosen dual to the ``s`` basis under ``B``).
    """

    kind: str
    ideal: Subspace
    iperp: Subspace
    s: Subspace
    h: Subspace
    s_basis: Tuple[tuple, ...]
    h_basis: Tuple[tuple, ...]
    iperp_basis: Tuple[tuple, ...]
    s_bracket: StructureTensor
    h_algebra: HomLieAlgebra
    f: Mat
    g_map: Mat
    L: Mat
    R: Mat
    rho: Tuple[Mat, ...]
    sigma: Tuple[Mat, ...]
    gamma: Dict[Tuple[int, int], tuple]
    psi: Mat
    g_psi: Mat
    killing: Optional[Mat]
    eta: Optional[Fraction]
    reconstruction: HomLieAlgebra
    iso: Mat
    report: CheckReport
    straighten: StraightenResult
    data: object = None
    notes: List[str] = field(default_factory=list)


def _fail(check: Check):
    raise StructureError(f"verification failed: {check.name} at {check.witness.indices}", check)


def _require(rep: CheckReport, check: Check) -> None:
    rep.add(check)
    if not check:
        _fail(check)


def _zero_block(name: str, M: Mat, rep: CheckReport) -> None:
    for j in range(M.cols):
        if any(M.col(j)):
            _fail(Check.fail(name, (j,), M.col(j)))
    rep.add(Check.ok(name))


def _equal_mats(name: str, pairs, rep: CheckReport) -> None:
    for idx, X, Y in pairs:
        D = X - Y
        for j in range(D.cols):
            if any(D.col(j)):
                _fail(Check.fail(name, tuple(idx) + (j,), D.col(j)))
    rep.add(Check.ok(name))


def _isotropic_closed_correction(A: HomLieAlgebra, s: Subspace, iperp: Subspace) -> Subspace:
    """Shift ``s`` by a map into ``I^perp`` so it becomes isotropic and stays closed."""
    n = A.dim
    B = A.form
    ss, ws = s.vectors(), iperp.vectors()
    q, t = len(ss), len(ws)
    sbr = restrict_bracket(A, s)
    unknowns = [(k, c) for k in range(t) for c in range(q)]
    br_sw = [[to_dense(A.bracket.sparse_bracket(to_sparse(ss[a]), to_sparse(ws[k])), n) for k in range(t)]
             for a in range(q)]
    Bsw = gram(B, ss, ws)
    rows, rhs = [], []
    for a in range(q):
        for b in range(a + 1, q):
            sab = sbr.basis_bracket(a, b)
            for comp in range(n):
                row = []
                for k, c in unknowns:
                    val = sab.get(c, ZERO) * ws[k][comp]
                    if c == b:
                        val -= br_sw[a][k][comp]
                    if c == a:
                        val += br_sw[b][k][comp]
                    row.append(val)
                rows.append(row)
                rhs.append(ZERO)
        for b in range(a, q):
            row = []
            for k, c in unknowns:
                val = ZERO
                if c == b:
                    val += Bsw[a, k]
                if c == a:
                    val += Bsw[b, k]
                row.append(val)
            rows.append(row)
            rhs.append(-bilinear(B, ss[a], ss[b]))
    sol, _ = rref_solve(Mat(rows, cols=len(unknowns)), tuple(rhs))
    if sol is None:
        raise StructureError("no closed complement of the ideal is isotropic",
                             Check.fail("isotropic_closed_complement", (), ()))
    out = []
    for c in range(q):
        v = list(ss[c])
        for k in range(t):
            coef = sol[k * q + c]
            if coef:
                for m, x in enumerate(ws[k]):
                    v[m] += coef * x
        out.append(tuple(v))
    return Subspace.span(out, n)


def _names_for(A: HomLieAlgebra, vectors, prefix: str) -> Tuple[str, ...]:
    names = []
    n = A.dim
    for idx, v in enumerate(vectors):
        nz = [i for i, x in enumerate(v) if x]
        if len(nz) == 1 and v[nz[0]] == 1:
            names.append(A.basis_names[nz[0]])
        else:
            names.append(f"{prefix}{idx + 1}")
    if len(set(names)) != len(names):
        names = [f"{prefix}{i + 1}" for i in range(len(vectors))]
    return tuple(names)


def decompose_thm22(A: HomLieAlgebra, seed: int = PROBE_SEED) -> DecompositionResult:
    """Identify ``A`` with a double extension and return the isomorphism.

    Indecomposability of ``A`` is the caller's responsibility.
    """
    base = check_quadratic_homlie(A)
    for c in base.checks:
        if not c:
            _fail(c)
    if not is_nilpotent_map(A.twist):
        raise StructureError("twist is not nilpotent")
    n = A.dim
    B, T = A.form, A.twist
    rep = CheckReport()
    rep.extend(base)
    notes: List[str] = []

    kerT, imT = kernel(T), image(T)
    I = maximal_proper_ideal_containing(A, kerT, seed=seed)
    rep.add(Check.ok("maximal_ideal", f"dim {I.dim}, codim {n - I.dim}"))
    _require(rep, Check.ok("image_in_ideal") if imT <= I else Check.fail("image_in_ideal", (), (), note="Im(T) not inside I"))
    iperp = orthogonal_complement(I, B)
    Z = kerT & imT
    chain = iperp <= Z and Z <= I
    _require(rep, Check.ok("iperp_chain") if chain else Check.fail("iperp_chain", (), (), note="I^perp ⊂ Ker T ∩ Im T ⊂ I fails"))

    s_w, _ = witt_split(B, iperp)
    st = straighten(A, I, start=s_w, recursive=True)
    s = st.s
    if not gram(B, s.vectors(), s.vectors()).is_zero():
        s = _isotropic_closed_correction(A, s, iperp)
        notes.append("complement shifted along I^perp to make it isotropic")
    h = orthogonal_complement(s + iperp, B)
    r, m = s.dim, h.dim
    if r + m + iperp.dim != n or not (s + h + iperp).is_full():
        _fail(Check.fail("witt_decomposition", (), (), note="s + h + I^perp is not direct"))
    rep.add(Check.ok("witt_decomposition"))

    ss = s.vectors()
    hs = h.vectors()
    ws = iperp.vectors()
    G = gram(B, ws, ss)  # G[l][k] = B(w_l, s_k)
    C = G.T.inverse()  # alpha_j = sum_l C[j][l] w_l  with  B(alpha_j, s_k) = delta_jk
    alphas = tuple(tuple(sum((C[j, l] * ws[l][k] for l in range(r)), ZERO) for k in range(n)) for j in range(r))
    P = Mat.from_columns(list(ss) + list(hs) + list(alphas), n)
    P_inv = P.inverse()
    br = A.bracket.change_basis(P, P_inv)
    Tad = P_inv @ T @ P
    Bad = P.T @ B @ P
    S_ix, H_ix, W_ix = list(range(r)), list(range(r, r + m)), list(range(r + m, n))

    # form blocks
    _zero_block("form_s_s", Bad.submatrix(S_ix, S_ix), rep)
    _zero_block("form_s_h", Bad.submatrix(S_ix, H_ix), rep)
    _zero_block("form_h_iperp", Bad.submatrix(H_ix, W_ix), rep)
    _zero_block("form_iperp_iperp", Bad.submatrix(W_ix, W_ix), rep)
    psi = Bad.submatrix(S_ix, W_ix)  # psi(alpha_j) = sum_k B(alpha_j, s_k) xi^k
    Bh = Bad.submatrix(H_ix, H_ix)

    # bracket blocks
    def bvec(i, j):
        return to_dense(br.basis_bracket(i, j), n)

    s_entries, h_entries, gamma = {}, {}, {}
    rho_cols = [[None] * m for _ in range(r)]
    sigma_cols = [[None] * r for _ in range(r)]
    for a in range(r):
        for b in range(a + 1, r):
            v = bvec(a, b)
            if any(v[k] for k in H_ix + W_ix):
                _fail(Check.fail("s_closed", (a, b), v))
            s_entries[(a, b)] = v[:r]
        for b in range(m):
            v = bvec(a, r + b)
            if any(v[k] for k in S_ix + W_ix):
                _fail(Check.fail("s_h_into_h", (a, b), v))
            rho_cols[a][b] = v[r:r + m]
        for b in range(r):
            v = bvec(a, r + m + b)
            if any(v[k] for k in S_ix + H_ix):
                _fail(Check.fail("s_iperp_into_iperp", (a, b), v))
            sigma_cols[a][b] = v[r + m:]
    rep.add(Check.ok("s_closed"))
    rep.add(Check.ok("s_h_into_h"))
    rep.add(Check.ok("s_iperp_into_iperp"))
    for a in range(m):
        for b in range(a + 1, m):
            v = bvec(r + a, r + b)
            if any(v[k] for k in S_ix):
                _fail(Check.fail("h_h_into_ideal", (a, b), v))
            h_entries[(a, b)] = v[r:r + m]
            g = v[r + m:]
            if any(g):
                gamma[(a, b)] = g
        for b in range(r):
            v = bvec(r + a, r + m + b)
            if any(v):
                _fail(Check.fail("h_iperp_zero", (a, b), v))
    for a in range(r):
        for b in range(a + 1, r):
            v = bvec(r + m + a, r + m + b)
            if any(v):
                _fail(Check.fail("iperp_abelian", (a, b), v))
    rep.add(Check.ok("h_h_into_ideal"))
    rep.add(Check.ok("h_iperp_zero"))
    rep.add(Check.ok("iperp_abelian"))

    s_bracket = StructureTensor(r, s_entries)
    rho = tuple(Mat.from_columns(rho_cols[a], m) if m else Mat.zeros(0, 0) for a in range(r))
    sigma = tuple(Mat.from_columns(sigma_cols[a], r) for a in range(r))

    # twist blocks
    _zero_block("twist_into_ideal", Tad.submatrix(S_ix, list(range(n))), rep)
    _zero_block("twist_kills_iperp", Tad.submatrix(list(range(n)), W_ix), rep)
    f = Tad.submatrix(H_ix, S_ix)
    g_map = Tad.submatrix(W_ix, S_ix)
    L = Tad.submatrix(H_ix, H_ix)
    R = Tad.submatrix(W_ix, H_ix)

    h_names = _names_for(A, hs, "u")
    h_alg = HomLieAlgebra("h", h_names, StructureTensor(m, h_entries), L, Bh)
    s_alg = lie_algebra("s", [f"s{i}" for i in range(r)], s_bracket)
    ad_s = [adjoint_matrix(s_alg, unit(r, i)) for i in range(r)]

    # identities among the block maps
    _equal_mats("f_intertwines_ad", [((i,), f @ ad_s[i], rho[i] @ f) for i in range(r)], rep)
    _equal_mats("g_intertwines_ad", [((i,), g_map @ ad_s[i], sigma[i] @ g_map) for i in range(r)], rep)
    ad_h = [adjoint_matrix(h_alg, f.col(i)) for i in range(r)]
    _equal_mats("L_rho_matches_ad_f", [((i, 0), L @ rho[i], ad_h[i]) for i in range(r)]
                + [((i, 1), rho[i] @ L, ad_h[i]) for i in range(r)], rep)
    _require(rep, equivariance_check(h_alg).renamed("L_equivariant"))

    def rho_of(x):
        out = Mat.zeros(m, m)
        for c, Rm in zip(x, rho):
            if c:
                out = out + Rm * c
        return out

    _equal_mats("rho_bracket_on_L", [((a, b), rho_of(s_bracket.bracket(unit(r, a), unit(r, b))) @ L,
                                      (rho[a] @ rho[b] - rho[b] @ rho[a]) @ L)
                                     for a in range(r) for b in range(a + 1, r)], rep)
    for i in range(r):
        c = is_derivation(h_alg, ad_h[i])
        if not c:
            _fail(Check.fail("ad_f_derivation", (i,) + c.witness.indices, c.witness.defect))
    rep.add(Check.ok("ad_f_derivation"))
    _equal_mats("psi_intertwines", [((i,), psi @ sigma[i], -(ad_s[i].T) @ psi) for i in range(r)], rep)
    _equal_mats("rho_in_oB", [((i,), rho[i].T @ Bh + Bh @ rho[i], Mat.zeros(m, m)) for i in range(r)], rep)
    _equal_mats("R_matches_f", [((), psi @ R, f.T @ Bh)], rep)
    for a in range(m):
        for b in range(a + 1, m):
            gv = gamma.get((a, b), (ZERO,) * r)
            lhs = psi @ gv
            rhs = tuple(bilinear(Bh, rho[j].col(a), unit(m, b)) for j in range(r))
            if lhs != rhs:
                _fail(Check.fail("gamma_matches_rho", (a, b), tuple(x - y for x, y in zip(lhs, rhs))))
    rep.add(Check.ok("gamma_matches_rho"))
    _require(rep, check_quadratic_homlie(h_alg).checks[0].renamed("h_hom_jacobi"))
    _require(rep, invariance_check(h_alg.bracket, Bh, "h_invariance"))

    g_psi = (psi @ g_map).T  # g_psi(s_a, s_b) = psi(g(s_a))(s_b)
    _require(rep, symmetric_check(g_psi, "g_psi_symmetric"))

    s_names = _names_for(A, ss, "x")
    w_names = _names_for(A, alphas, "xi")
    killing = None
    eta = None
    if r == 1:
        kind = "one-dimensional"
        if not sigma[0].is_zero():
            _fail(Check.fail("sigma_zero", (0,), sigma[0].col(0)))
        vprime = f.col(0)
        lam = g_psi[0, 0]
        data = Prop12Data(h=h_alg, D=rho[0], vprime=vprime, lambda_prime=lam)
        rebuilt = extend_prop12(data, name=f"{A.name}_rebuilt")
        rebuilt = rebuilt.with_(basis_names=s_names + h_names + w_names)
    else:
        kind = "simple"
        _require(rep, invariance_check(s_bracket, g_psi, "g_psi_invariant"))
        killing = killing_form(s_bracket)
        if not is_nondegenerate(killing):
            _fail(Check.fail("s_semisimple", (), kernel(killing).vectors()[0]))
        simple = is_simple_thmA(s_bracket, killing)
        rep.add(Check.ok("s_simple") if simple else Check.fail("s_simple", (), (), note="ad(s) != o(K)"))
        if not simple:
            _fail(rep["s_simple"])
        eta = _proportionality(g_psi, killing)
        if eta is None:
            _fail(Check.fail("g_psi_proportional_to_killing", (), (), note="g_psi is not a multiple of K_s"))
        rep.add(Check.ok("g_psi_proportional_to_killing", f"eta = {eta}"))
        if eta == 0:
            notes.append("g vanishes: eta = 0, so the non-zero scalar claim does not apply to this instance")
        data = Prop11Data(h=h_alg, s_bracket=s_bracket, s_form=killing, f=f, rho=rho, eta=eta,
                          s_names=s_names, dual_names=w_names)
        rebuilt = extend_prop11(data, name=f"{A.name}_rebuilt")

    iso = Mat.block_diag(Mat.identity(r), Mat.identity(m), psi) @ P_inv
    iso_rep = check_isometric_isomorphism(A, rebuilt, iso)
    for c in iso_rep.checks:
        _require(rep, c.renamed(f"iso_{c.name}"))

    return DecompositionResult(
        kind=kind, ideal=I, iperp=iperp, s=s, h=h,
        s_basis=tuple(ss), h_basis=tuple(hs), iperp_basis=alphas,
        s_bracket=s_bracket, h_algebra=h_alg,
        f=f, g_map=g_map, L=L, R=R, rho=rho, sigma=sigma, gamma=gamma,
        psi=psi, g_psi=g_psi, killing=killing, eta=eta,
        reconstruction=rebuilt, iso=iso, report=rep, straighten=st, data=data, notes=notes,
    )


def _proportionality(G: Mat, K: Mat) -> Optional[Fraction]:
    """The scalar ``eta`` with ``G = eta K`` (K nonzero), or None."""
    pos = next(((i, j) for i in range(K.rows) for j in range(K.cols) if K[i, j]), None)
    if pos is None:
        return None
    eta = G[pos] / K[pos]
    return eta if G == K * eta else None
