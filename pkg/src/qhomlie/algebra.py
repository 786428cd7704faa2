"""Hom-Lie algebras given by structure constants, and their axiom checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .linalg import (
    ONE,
    ZERO,
    LinalgError,
    Mat,
    Subspace,
    as_rat,
    complement,
    dot,
    is_nondegenerate,
    kernel,
    unit,
)

Sparse = Dict[int, Fraction]


class AlgebraError(ValueError):
    pass


# --------------------------------------------------------------------------
# sparse helpers (hot paths of the exhaustive checks)


def to_sparse(v: Sequence) -> Sparse:
    return {i: a for i, a in enumerate(v) if a}


def to_dense(s: Mapping[int, Fraction], n: int) -> tuple:
    out = [ZERO] * n
    for i, a in s.items():
        out[i] = a
    return tuple(out)


def _axpy(acc: Sparse, c: Fraction, s: Mapping[int, Fraction]) -> None:
    for k, a in s.items():
        v = acc.get(k, ZERO) + c * a
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def _sub(a: Sparse, b: Sparse) -> Sparse:
    out = dict(a)
    _axpy(out, -ONE, b)
    return out


# --------------------------------------------------------------------------
# data model


class StructureTensor:
    """Skew structure constants: ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    Only entries with ``i < j`` are stored; the other orderings are derived
    on evaluation, so a non-skew product cannot be represented.
    """

    __slots__ = ("dim", "_entries", "_table")

    def __init__(self, dim: int, entries: Mapping[Tuple[int, int], object] = ()):
        self.dim = dim
        store = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (i, j), coeffs in items:
            if not (0 <= i < j < dim):
                raise AlgebraError(f"structure constant index ({i}, {j}) must satisfy 0 <= i < j < {dim}")
            sp = _coerce_coeffs(coeffs, dim)
            if sp:
                store[(i, j)] = tuple(sorted(sp.items()))
        self._entries = store
        table: List[List[Sparse]] = [[{} for _ in range(dim)] for _ in range(dim)]
        for (i, j), sp in store.items():
            table[i][j] = dict(sp)
            table[j][i] = {k: -c for k, c in sp}
        self._table = table

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[Tuple[int, int], object]) -> "StructureTensor":
        """Accept any ordering of the index pair and normalise by skew-symmetry."""
        entries: Dict[Tuple[int, int], Sparse] = {}
        for (i, j), coeffs in brackets.items():
            sp = _coerce_coeffs(coeffs, dim)
            if i == j:
                if sp:
                    raise AlgebraError(f"[e_{i}, e_{i}] must vanish")
                continue
            if i > j:
                i, j = j, i
                sp = {k: -c for k, c in sp.items()}
            if (i, j) in entries:
                raise AlgebraError(f"bracket ({i}, {j}) given twice")
            entries[(i, j)] = sp
        return cls(dim, entries)

    @classmethod
    def abelian(cls, dim: int) -> "StructureTensor":
        return cls(dim, {})

    @classmethod
    def from_function(cls, dim: int, fn) -> "StructureTensor":
        """Build from ``fn(i, j)`` returning the dense or sparse value of ``[e_i, e_j]`` (i < j)."""
        return cls(dim, {(i, j): fn(i, j) for i in range(dim) for j in range(i + 1, dim)})

    def entries(self) -> Dict[Tuple[int, int], Tuple[Tuple[int, Fraction], ...]]:
        return dict(self._entries)

    def basis_bracket(self, i: int, j: int) -> Sparse:
        """Sparse ``[e_i, e_j]``; treat the returned dict as read-only."""
        return self._table[i][j]

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        return self._table[i][j].get(k, ZERO)

    def sparse_bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Sparse:
        out: Sparse = {}
        table = self._table
        for i, a in x.items():
            row = table[i]
            for j, b in y.items():
                t = row[j]
                if t:
                    _axpy(out, a * b, t)
        return out

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        n = self.dim
        if len(x) != n or len(y) != n:
            raise AlgebraError(f"vectors must have length {n}")
        return to_dense(self.sparse_bracket(to_sparse(x), to_sparse(y)), n)

    def is_abelian(self) -> bool:
        return not self._entries

    def change_basis(self, P: Mat, P_inv: Optional[Mat] = None) -> "StructureTensor":
        """Structure constants in the basis given by the columns of ``P``."""
        if P_inv is None:
            P_inv = P.inverse()
        cols = [to_sparse(c) for c in P.columns()]
        n = self.dim
        return StructureTensor.from_function(
            n, lambda i, j: P_inv @ to_dense(self.sparse_bracket(cols[i], cols[j]), n)
        )

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return self.dim == other.dim and self._entries == other._entries

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self._entries.items()))))

    def __repr__(self):
        return f"StructureTensor(dim={self.dim}, nonzero_pairs={len(self._entries)})"


def _coerce_coeffs(coeffs, dim: int) -> Sparse:
    if isinstance(coeffs, Mapping):
        sp = {}
        for k, c in coeffs.items():
            if not 0 <= k < dim:
                raise AlgebraError(f"coefficient index {k} out of range")
            c = as_rat(c)
            if c:
                sp[k] = c
        return sp
    vals = tuple(coeffs)
    if len(vals) != dim:
        raise AlgebraError(f"bracket value must have length {dim}")
    return {k: as_rat(c) for k, c in enumerate(vals) if as_rat(c)}


@dataclass(frozen=True, eq=True)
class HomLieAlgebra:
    """A skew product with a twist map and an optional symmetric form."""

    name: str
    basis_names: Tuple[str, ...]
    bracket: StructureTensor
    twist: Mat
    form: Optional[Mat] = None

    def __post_init__(self):
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        n = self.bracket.dim
        if len(self.basis_names) != n:
            raise AlgebraError("number of basis names does not match dimension")
        if len(set(self.basis_names)) != n:
            raise AlgebraError("basis names must be distinct")
        if self.twist.shape != (n, n):
            raise AlgebraError(f"twist must be {n}x{n}")
        if self.form is not None:
            if self.form.shape != (n, n):
                raise AlgebraError(f"form must be {n}x{n}")
            if not self.form.is_symmetric():
                raise AlgebraError("asymmetric form")

    @property
    def dim(self) -> int:
        return self.bracket.dim

    def index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise AlgebraError(f"no basis vector named {name!r}") from None

    def basis_vector(self, i) -> tuple:
        if isinstance(i, str):
            i = self.index(i)
        return unit(self.dim, i)

    def element(self, coeffs: Mapping[str, object]) -> tuple:
        """Vector from ``{"x1": 1, "xi2": "-1/2"}``-style coefficients."""
        v = [ZERO] * self.dim
        for name, c in coeffs.items():
            v[self.index(name)] += as_rat(c)
        return tuple(v)

    def describe(self, v: Sequence) -> str:
        terms = []
        for name, c in zip(self.basis_names, v):
            if c:
                terms.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(terms) if terms else "0"

    def with_(self, **changes) -> "HomLieAlgebra":
        data = dict(name=self.name, basis_names=self.basis_names, bracket=self.bracket, twist=self.twist, form=self.form)
        data.update(changes)
        return HomLieAlgebra(**data)

    def twist_columns(self) -> List[Sparse]:
        return [to_sparse(c) for c in self.twist.columns()]


def lie_algebra(name: str, basis_names: Sequence[str], bracket: StructureTensor, form: Optional[Mat] = None) -> HomLieAlgebra:
    """An ordinary Lie algebra: twist is the identity."""
    return HomLieAlgebra(name, tuple(basis_names), bracket, Mat.identity(bracket.dim), form)


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Witness:
    indices: Tuple
    defect: Tuple[Fraction, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Optional[Witness] = None
    skipped: bool = False
    detail: str = ""

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"failed check {self.name!r} needs a witness")
        if self.passed and self.witness is not None:
            raise ValueError(f"passed check {self.name!r} must not carry a witness")

    def __bool__(self):
        return self.passed

    @classmethod
    def ok(cls, name: str, detail: str = "") -> "Check":
        return cls(name, True, None, False, detail)

    @classmethod
    def fail(cls, name: str, indices, defect=(), note: str = "") -> "Check":
        return cls(name, False, Witness(tuple(indices), tuple(defect), note))

    @classmethod
    def skip(cls, name: str, detail: str = "") -> "Check":
        return cls(name, True, None, True, detail)

    def renamed(self, name: str) -> "Check":
        return Check(name, self.passed, self.witness, self.skipped, self.detail)


@dataclass
class CheckReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(c.renamed(prefix + c.name) if prefix else c)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> List[str]:
        return [c.name for c in self.checks]

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> List[str]:
        out = []
        for c in self.checks:
            status = "SKIP" if c.skipped else ("PASS" if c.passed else "FAIL")
            line = f"{status} {c.name}"
            if c.witness is not None:
                w = c.witness
                line += f"  witness={list(w.indices)} defect=[{', '.join(str(x) for x in w.defect)}]"
                if w.note:
                    line += f" ({w.note})"
            elif c.detail:
                line += f"  ({c.detail})"
            out.append(line)
        return out

    def __str__(self):
        return "\n".join(self.lines())


# --------------------------------------------------------------------------
# evaluation


def _check_vec(A: HomLieAlgebra, *vs):
    for v in vs:
        if len(v) != A.dim:
            raise AlgebraError(f"vector of length {len(v)} for algebra of dimension {A.dim}")


def bracket_eval(A: HomLieAlgebra, x: Sequence, y: Sequence) -> tuple:
    _check_vec(A, x, y)
    return A.bracket.bracket(x, y)


def adjoint_matrix(A: HomLieAlgebra, x: Sequence) -> Mat:
    """Matrix of ``y -> [x, y]``."""
    _check_vec(A, x)
    xs = to_sparse(x)
    n = A.dim
    return Mat.from_columns([to_dense(A.bracket.sparse_bracket(xs, {j: ONE}), n) for j in range(n)], n)


def _twist_sparse(A: HomLieAlgebra, s: Mapping[int, Fraction], tcols=None) -> Sparse:
    tcols = tcols if tcols is not None else A.twist_columns()
    out: Sparse = {}
    for i, a in s.items():
        _axpy(out, a, tcols[i])
    return out


def _cyclic(br: StructureTensor, first, x, y, z) -> Sparse:
    out: Sparse = {}
    _axpy(out, ONE, br.sparse_bracket(first(x), br.sparse_bracket(y, z)))
    _axpy(out, ONE, br.sparse_bracket(first(y), br.sparse_bracket(z, x)))
    _axpy(out, ONE, br.sparse_bracket(first(z), br.sparse_bracket(x, y)))
    return out


def hom_jacobi_defect(A: HomLieAlgebra, x: Sequence, y: Sequence, z: Sequence) -> tuple:
    """``[T x, [y, z]] + [T y, [z, x]] + [T z, [x, y]]``."""
    _check_vec(A, x, y, z)
    tcols = A.twist_columns()
    s = _cyclic(A.bracket, lambda v: _twist_sparse(A, v, tcols), to_sparse(x), to_sparse(y), to_sparse(z))
    return to_dense(s, A.dim)


def jacobi_defect(A: HomLieAlgebra, x: Sequence, y: Sequence, z: Sequence) -> tuple:
    """Classical Jacobiator ``[x, [y, z]] + [y, [z, x]] + [z, [x, y]]``."""
    _check_vec(A, x, y, z)
    s = _cyclic(A.bracket, lambda v: v, to_sparse(x), to_sparse(y), to_sparse(z))
    return to_dense(s, A.dim)


def _triples(n: int):
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                yield i, j, k


def jacobi_check(bracket: StructureTensor, name: str = "jacobi", basis: Optional[Sequence[Sequence]] = None) -> Check:
    """Classical Jacobi identity on all basis triples (or on a supplied spanning set)."""
    n = bracket.dim
    vecs = [{i: ONE} for i in range(n)] if basis is None else [to_sparse(v) for v in basis]
    m = len(vecs)
    for i, j, k in _triples(m):
        d = _cyclic(bracket, lambda v: v, vecs[i], vecs[j], vecs[k])
        if d:
            return Check.fail(name, (i, j, k), to_dense(d, n))
    return Check.ok(name)


def hom_jacobi_check(A: HomLieAlgebra) -> Check:
    n = A.dim
    tcols = A.twist_columns()
    br = A.bracket
    # tb[i][l] = [T e_i, e_l], so each cyclic term is a combination of these
    tb = [[br.sparse_bracket(tcols[i], {l: ONE}) for l in range(n)] for i in range(n)]
    for i, j, k in _triples(n):
        d: Sparse = {}
        for a, (b, c) in ((i, (j, k)), (j, (k, i)), (k, (i, j))):
            for l, coef in br.basis_bracket(b, c).items():
                t = tb[a][l]
                if t:
                    _axpy(d, coef, t)
        if d:
            return Check.fail("hom_jacobi", (i, j, k), to_dense(d, n))
    return Check.ok("hom_jacobi")


def equivariance_check(A: HomLieAlgebra) -> Check:
    """``T([x, y]) = [T(x), y]`` on all ordered basis pairs."""
    n = A.dim
    tcols = A.twist_columns()
    br = A.bracket
    for i in range(n):
        for j in range(n):
            lhs = _twist_sparse(A, br.basis_bracket(i, j), tcols)
            rhs = br.sparse_bracket(tcols[i], {j: ONE})
            d = _sub(lhs, rhs)
            if d:
                return Check.fail("equivariance", (i, j), to_dense(d, n))
    return Check.ok("equivariance")


def invariance_check(br: StructureTensor, B: Mat, name: str = "invariance") -> Check:
    """``B([x, y], z) = B(x, [y, z])`` on all ordered basis triples."""
    n = br.dim
    Brows = B.row_vectors()

    def bz(s: Sparse) -> List[Fraction]:  # row vector B(s, .)
        out = [ZERO] * n
        for m, c in s.items():
            row = Brows[m]
            for k in range(n):
                if row[k]:
                    out[k] += c * row[k]
        return out

    pair = [[bz(br.basis_bracket(i, j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                d = pair[i][j][k] - pair[j][k][i]
                if d:
                    return Check.fail(name, (i, j, k), (d,))
    return Check.ok(name)


def self_adjoint_check(T: Mat, B: Mat, name: str = "self_adjoint") -> Check:
    """``B(T x, y) = B(x, T y)`` on basis pairs, i.e. ``T^t B = B T``."""
    M = T.T @ B - B @ T
    n = T.rows
    for i in range(n):
        for j in range(n):
            if M[i, j]:
                return Check.fail(name, (i, j), (M[i, j],))
    return Check.ok(name)


def symmetric_check(B: Mat, name: str = "symmetric") -> Check:
    n = B.rows
    for i in range(n):
        for j in range(i + 1, n):
            if B[i, j] != B[j, i]:
                return Check.fail(name, (i, j), (B[i, j] - B[j, i],))
    return Check.ok(name)


def nondegenerate_check(B: Mat, name: str = "nondegenerate") -> Check:
    K = kernel(B)
    if K.dim:
        return Check.fail(name, (), K.vectors()[0], note="radical vector")
    return Check.ok(name)


def check_quadratic_homlie(A: HomLieAlgebra) -> CheckReport:
    """Run every axiom of a quadratic Hom-Lie algebra over all basis tuples."""
    rep = CheckReport()
    rep.add(hom_jacobi_check(A))
    rep.add(equivariance_check(A))
    B = A.form
    if B is None:
        for name in ("invariance", "self_adjoint", "nondegenerate", "symmetric"):
            rep.add(Check.skip(name, "no form"))
        return rep
    rep.add(invariance_check(A.bracket, B))
    rep.add(self_adjoint_check(A.twist, B))
    rep.add(nondegenerate_check(B))
    rep.add(symmetric_check(B))
    return rep


# --------------------------------------------------------------------------
# ideals and subalgebras


def _check_subspace(A: HomLieAlgebra, S: Subspace):
    if S.ambient_dim != A.dim:
        raise AlgebraError("subspace lives in a space of the wrong dimension")


def is_ideal(A: HomLieAlgebra, I: Subspace) -> Check:
    """``[g, I] ⊂ I`` and ``T(I) ⊂ I``; the witness is the first violating pair."""
    _check_subspace(A, I)
    n = A.dim
    vecs = I.vectors()
    for i in range(n):
        for b, v in enumerate(vecs):
            w = to_dense(A.bracket.sparse_bracket({i: ONE}, to_sparse(v)), n)
            if not I.contains(w):
                return Check.fail("ideal", (i, b), w, note="bracket leaves the subspace")
    for b, v in enumerate(vecs):
        w = A.twist @ v
        if not I.contains(w):
            return Check.fail("ideal", (b,), w, note="twist leaves the subspace")
    return Check.ok("ideal")


def ideal_closure(A: HomLieAlgebra, S: Subspace) -> Subspace:
    """Smallest ideal containing ``S``."""
    _check_subspace(A, S)
    n = A.dim
    current = S
    frontier = list(S.vectors())
    while frontier:
        images = []
        for v in frontier:
            sv = to_sparse(v)
            for i in range(n):
                w = A.bracket.sparse_bracket({i: ONE}, sv)
                if w:
                    images.append(to_dense(w, n))
            images.append(A.twist @ v)
        frontier = []
        for w in images:
            if not current.contains(w):
                current = current + Subspace.span([w], n)
                frontier.append(w)
                if current.is_full():
                    return current
    return current


def bracket_span(A: HomLieAlgebra, U: Subspace, V: Subspace) -> Subspace:
    """``[U, V]`` as a subspace."""
    n = A.dim
    out = []
    for u in U.vectors():
        su = to_sparse(u)
        for v in V.vectors():
            w = A.bracket.sparse_bracket(su, to_sparse(v))
            if w:
                out.append(to_dense(w, n))
    return Subspace.span(out, n)


def derived_subalgebra(A: HomLieAlgebra) -> Subspace:
    full = Subspace.full(A.dim)
    return bracket_span(A, full, full)


def quotient(A: HomLieAlgebra, I: Subspace):
    """Quotient by an ideal, on the greedy complement of ``I`` as representatives.

    Returns ``(algebra, projection)`` where ``projection`` maps coordinates of
    the original space to quotient coordinates.  The form is dropped.
    """
    chk = is_ideal(A, I)
    if not chk:
        raise AlgebraError(f"not an ideal (witness {chk.witness.indices})")
    n = A.dim
    reps = complement(I).pivots
    q = len(reps)
    P = Mat.from_columns([unit(n, r) for r in reps] + list(I.vectors()), n)
    proj = P.inverse().submatrix(range(q), range(n))
    br = StructureTensor.from_function(
        q, lambda a, b: proj @ to_dense(A.bracket.basis_bracket(reps[a], reps[b]), n)
    )
    twist = Mat.from_columns([proj @ A.twist.col(r) for r in reps], q)
    names = tuple(A.basis_names[r] for r in reps)
    return HomLieAlgebra(f"{A.name}/I", names, br, twist, None), proj


def center(A: HomLieAlgebra) -> Subspace:
    """``{x : [x, e_j] = 0 for all j}``."""
    n = A.dim
    rows = []
    for j in range(n):
        for k in range(n):
            row = tuple(A.bracket.coefficient(i, j, k) for i in range(n))
            if any(row):
                rows.append(row)
    return kernel(Mat(rows, cols=n))


def is_derivation(A: HomLieAlgebra, D: Mat) -> Check:
    """Leibniz rule ``D[x, y] = [Dx, y] + [x, Dy]`` on basis pairs."""
    n = A.dim
    if D.shape != (n, n):
        raise AlgebraError(f"derivation candidate must be {n}x{n}")
    dcols = [to_sparse(c) for c in D.columns()]
    br = A.bracket
    for i in range(n):
        for j in range(i + 1, n):
            lhs: Sparse = {}
            for k, c in br.basis_bracket(i, j).items():
                _axpy(lhs, c, dcols[k])
            rhs = br.sparse_bracket(dcols[i], {j: ONE})
            _axpy(rhs, ONE, br.sparse_bracket({i: ONE}, dcols[j]))
            d = _sub(lhs, rhs)
            if d:
                return Check.fail("derivation", (i, j), to_dense(d, n))
    return Check.ok("derivation")


def is_in_oB(B: Mat, S: Mat) -> bool:
    """``B(S x, y) = -B(x, S y)``, i.e. ``S^t B + B S = 0``."""
    if not (B.is_square() and S.shape == B.shape):
        raise AlgebraError("form and map must be square of the same size")
    return (S.T @ B + B @ S).is_zero()


def lower_central_series(A: HomLieAlgebra, max_terms: Optional[int] = None) -> List[Subspace]:
    """``g^1 = g``, ``g^{k+1} = [g, g^k]``.

    Stops at the zero subspace (included) or when a term repeats (the repeat
    is not included).  ``max_terms`` forces a fixed number of terms instead.
    """
    full = Subspace.full(A.dim)
    series = [full]
    while True:
        if max_terms is not None and len(series) >= max_terms:
            return series
        nxt = bracket_span(A, full, series[-1])
        if max_terms is None and (nxt == series[-1]):
            return series
        series.append(nxt)
        if max_terms is None and nxt.is_zero():
            return series


def is_nilpotent(A: HomLieAlgebra) -> Optional[int]:
    """First ``m`` with ``g^m = 0``, or None if the series stalls above zero."""
    series = lower_central_series(A)
    if series[-1].is_zero():
        return len(series) if A.dim else 1
    return None


def restrict_bracket(A: HomLieAlgebra, S: Subspace) -> Optional[StructureTensor]:
    """Structure constants of a subalgebra in its stored basis, or None if not closed."""
    vecs = S.vectors()
    m = len(vecs)
    out = {}
    for a in range(m):
        for b in range(a + 1, m):
            w = to_dense(A.bracket.sparse_bracket(to_sparse(vecs[a]), to_sparse(vecs[b])), A.dim)
            c = S.coordinates(w)
            if c is None:
                return None
            out[(a, b)] = c
    return StructureTensor(m, out)


def transport(A: HomLieAlgebra, P: Mat, name: Optional[str] = None) -> HomLieAlgebra:
    """The same algebra written in the basis given by the columns of ``P``."""
    P_inv = P.inverse()
    form = None if A.form is None else P.T @ A.form @ P
    return HomLieAlgebra(
        name or A.name,
        tuple(f"b{i}" for i in range(A.dim)),
        A.bracket.change_basis(P, P_inv),
        P_inv @ A.twist @ P,
        form,
    )
