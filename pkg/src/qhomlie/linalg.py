"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`.  Matrices are
immutable, linear maps use the column convention (column ``j`` holds the
image of the ``j``-th basis vector) and subspaces are stored by a basis in
reduced row-echelon form, so two subspaces are equal exactly when their
stored bases are equal.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rat = Fraction
Vector = tuple  # tuple of Fraction

_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")

ZERO = Fraction(0)
ONE = Fraction(1)


class LinalgError(ValueError):
    pass


def parse_rat(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction.  Ints are accepted as is."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise LinalgError(f"unparseable rational {text!r}")
    m = _RAT_RE.match(text.strip())
    if m is None:
        raise LinalgError(f"unparseable rational {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise LinalgError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rat(x)
    if isinstance(x, float):
        raise LinalgError("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


def vec(*entries) -> Vector:
    """Build an exact vector: ``vec(1, "1/2", 0)``."""
    if len(entries) == 1 and not isinstance(entries[0], (int, str, Fraction)):
        entries = tuple(entries[0])
    return tuple(as_rat(e) for e in entries)


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return not any(v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c, v: Sequence[Fraction]) -> Vector:
    c = as_rat(c)
    return tuple(c * a for a in v)


def lincomb(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


class Mat:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable] = (), cols: Optional[int] = None):
        e = tuple(tuple(as_rat(x) for x in row) for row in entries)
        if e:
            width = len(e[0])
            if any(len(r) != width for r in e):
                raise LinalgError("ragged matrix")
            if cols is not None and cols != width:
                raise LinalgError("column count mismatch")
        else:
            width = 0 if cols is None else cols
        self.rows = len(e)
        self.cols = width
        self._e = e

    @classmethod
    def _raw(cls, e: tuple, cols: int) -> "Mat":
        m = cls.__new__(cls)
        m.rows = len(e)
        m.cols = cols
        m._e = e
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls._raw(tuple(unit(n, i) for i in range(n)), n)

    @classmethod
    def diag(cls, entries: Sequence) -> "Mat":
        d = [as_rat(x) for x in entries]
        n = len(d)
        return cls._raw(tuple(tuple(d[i] if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Mat":
        cols = [tuple(as_rat(x) for x in c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise LinalgError("column length mismatch")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(rows)), len(cols))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int) -> "Mat":
        return cls(rows, cols=cols)

    @classmethod
    def block_diag(cls, *blocks: "Mat") -> "Mat":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[ZERO] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b._e[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls._raw(tuple(tuple(r) for r in out), m)

    # access ------------------------------------------------------------
    def __getitem__(self, idx):
        i, j = idx
        return self._e[i][j]

    def row(self, i: int) -> Vector:
        return self._e[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._e)

    def row_vectors(self) -> tuple:
        return self._e

    def columns(self) -> tuple:
        return tuple(self.col(j) for j in range(self.cols))

    def tolist(self) -> list:
        return [list(r) for r in self._e]

    def to_strings(self) -> list:
        return [[format_rat(x) for x in r] for r in self._e]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Mat":
        return Mat._raw(tuple(self.col(j) for j in range(self.cols)), self.rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._e)

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        e = self._e
        return all(e[i][j] == e[j][i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat._raw(tuple(tuple(self._e[i][j] for j in cols) for i in rows), len(cols))

    # arithmetic --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def __repr__(self):
        body = "; ".join(" ".join(format_rat(x) for x in r) for r in self._e)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def _check_same(self, other: "Mat"):
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.cols)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.cols)

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self._e), self.cols)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            raise TypeError("use @ for matrix products")
        c = as_rat(c)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self._e), self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            return Mat._raw(tuple(tuple(dot(r, c) for c in ocols) for r in self._e), other.cols)
        v = tuple(other)
        if len(v) != self.cols:
            raise LinalgError(f"cannot apply {self.shape} matrix to vector of length {len(v)}")
        return tuple(dot(r, v) for r in self._e)

    def apply(self, v: Sequence) -> Vector:
        return self @ v

    def __pow__(self, k: int) -> "Mat":
        if not self.is_square() or k < 0:
            raise LinalgError("power needs a square matrix and k >= 0")
        out = Mat.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def rank(self) -> int:
        return len(rref(self._e, self.cols)[1])

    def inverse(self) -> "Mat":
        if not self.is_square():
            raise LinalgError("inverse of non-square matrix")
        n = self.rows
        aug = [list(r) + list(unit(n, i)) for i, r in enumerate(self._e)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)):
            raise LinalgError("matrix is singular")
        return Mat._raw(tuple(tuple(r[n:]) for r in red[:n]), n)

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise LinalgError("row count mismatch")
        return Mat._raw(tuple(r + s for r, s in zip(self._e, other._e)), self.cols + other.cols)

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise LinalgError("column count mismatch")
        return Mat._raw(self._e + other._e, self.cols)


# --------------------------------------------------------------------------
# elimination


def rref(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Reduced row-echelon form.  Returns (nonzero rows as lists, pivot columns)."""
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr = a[r]
        inv = ONE / pr[c]
        if inv != 1:
            pr = [x * inv if x else x for x in pr]
            a[r] = pr
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    ri = a[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref_solve(A: Mat, b: Mat):
    """Solve ``A x = b`` exactly.

    ``b`` may be a Mat (several right-hand sides) or a vector.  Returns
    ``(x, kernel)`` where ``x`` is one solution (free variables set to zero)
    or None when the system is inconsistent, and ``kernel`` is Null(A).
    """
    vector_rhs = not isinstance(b, Mat)
    if vector_rhs:
        b = Mat.from_columns([b], len(b)) if len(b) else Mat.zeros(0, 1)
    if A.rows != b.rows:
        raise LinalgError("A and b must have the same number of rows")
    n, k = A.cols, b.cols
    red, piv = rref([list(ra) + list(rb) for ra, rb in zip(A.row_vectors(), b.row_vectors())], n + k)
    ker = kernel(A)
    if any(p >= n for p in piv):
        return None, ker
    x = [[ZERO] * k for _ in range(n)]
    for row, p in zip(red, piv):
        x[p] = row[n:]
    xm = Mat(x, cols=k)
    if vector_rhs:
        return xm.col(0), ker
    return xm, ker


def solve_vector(A: Mat, b: Sequence) -> Optional[Vector]:
    return rref_solve(A, tuple(b))[0]


def _null_vectors(rows: Sequence[Sequence[Fraction]], ncols: int) -> list:
    red, piv = rref(rows, ncols)
    pivset = set(piv)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f]
        out.append(tuple(v))
    return out


def kernel(A: Mat) -> "Subspace":
    return Subspace.span(_null_vectors(A.row_vectors(), A.cols), A.cols)


def image(A: Mat) -> "Subspace":
    return Subspace.span(A.columns(), A.rows)


# --------------------------------------------------------------------------
# subspaces


class Subspace:
    """Subspace of coordinate space, stored by its reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, basis: Mat, _pivots=None):
        if basis.cols != ambient_dim:
            raise LinalgError("basis width must equal ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis = basis
        if _pivots is None:
            red, _pivots = rref(basis.row_vectors(), ambient_dim)
            if len(red) != basis.rows or Mat(red, cols=ambient_dim) != basis:
                raise LinalgError("basis is not in reduced row-echelon form")
        self._pivots = tuple(_pivots)

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = [tuple(as_rat(x) for x in v) for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise LinalgError("vector length does not match ambient dimension")
        red, piv = rref(rows, ambient_dim)
        return cls(ambient_dim, Mat._raw(tuple(tuple(r) for r in red), ambient_dim), piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Mat.zeros(0, n), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Mat.identity(n), tuple(range(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls.span([unit(n, i) for i in indices], n)

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> tuple:
        return self._pivots

    def vectors(self) -> tuple:
        return self.basis.row_vectors()

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        """Coefficients of ``v`` in the stored basis, or None if ``v`` is outside."""
        v = tuple(v)
        coeffs = tuple(v[p] for p in self._pivots)
        if lincomb(coeffs, self.basis.row_vectors(), self.ambient_dim) != v:
            return None
        return coeffs

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    __contains__ = contains

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.vectors())

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.ambient_dim}: {self.basis!r})"

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise LinalgError("ambient dimensions differ")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.vectors() + other.vectors(), self.ambient_dim)

    def annihilator(self) -> "Subspace":
        """Vectors ``w`` with ``v . w = 0`` for every ``v`` in the subspace."""
        return Subspace.span(_null_vectors(self.vectors(), self.ambient_dim), self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        n = self.ambient_dim
        rows = self.annihilator().vectors() + other.annihilator().vectors()
        return Subspace.span(_null_vectors(rows, n), n)

    intersection = __and__

    def image_under(self, A: Mat) -> "Subspace":
        return Subspace.span([A @ v for v in self.vectors()], A.rows)


def complement(S: Subspace) -> Subspace:
    """Greedy complement: standard basis vectors taken in index order."""
    n = S.ambient_dim
    current = S
    chosen = []
    for i in range(n):
        if current.dim == n:
            break
        e = unit(n, i)
        if not current.contains(e):
            chosen.append(i)
            current = current + Subspace.coordinate(n, [i])
    return Subspace.coordinate(n, chosen)


def orthogonal_complement(S: Subspace, B: Mat) -> Subspace:
    if not B.is_symmetric():
        raise LinalgError("form is not symmetric")
    if B.rows != S.ambient_dim:
        raise LinalgError("form size does not match ambient dimension")
    rows = [B @ v for v in S.vectors()]  # B symmetric: (B v) . w = B(v, w)
    return Subspace.span(_null_vectors(rows, S.ambient_dim), S.ambient_dim)


def bilinear(B: Mat, u: Sequence, v: Sequence) -> Fraction:
    return dot(u, B @ v)


def gram(B: Mat, us: Sequence[Sequence], vs: Sequence[Sequence]) -> Mat:
    Bv = [B @ v for v in vs]
    return Mat._raw(tuple(tuple(dot(u, w) for w in Bv) for u in us), len(vs))


def is_nondegenerate(B: Mat) -> bool:
    return B.is_square() and B.rank() == B.rows


def witt_split(B: Mat, W: Subspace):
    """Split the ambient space as S + H + W for a totally isotropic W.

    Returns ``(S, H)`` with S totally isotropic and paired with W by B,
    and ``H = (S + W)^perp`` nondegenerate.
    """
    if not B.is_symmetric():
        raise LinalgError("form is not symmetric")
    if not is_nondegenerate(B):
        raise LinalgError("form is degenerate")
    n = B.rows
    ws = W.vectors()
    r = len(ws)
    if r == 0:
        return Subspace.zero(n), Subspace.full(n)
    if not gram(B, ws, ws).is_zero():
        raise LinalgError("subspace is not totally isotropic")
    WB = Mat([B @ w for w in ws], cols=n)  # rows: functionals B(w_j, .)
    sol, _ = rref_solve(WB, Mat.identity(r))
    if sol is None:  # cannot happen for nondegenerate B
        raise LinalgError("no dual vectors for the isotropic subspace")
    ss = sol.columns()  # B(w_j, s_i) = delta_ij
    G = gram(B, ss, ss)
    half = Fraction(1, 2)
    corrected = [
        tuple(si[k] - half * sum((G[i, j] * ws[j][k] for j in range(r)), ZERO) for k in range(n))
        for i, si in enumerate(ss)
    ]
    S = Subspace.span(corrected, n)
    H = orthogonal_complement(S + W, B)
    return S, H


def flat_map(B: Mat) -> Mat:
    """Matrix of ``x -> B(x, .)`` with values in dual-basis coordinates."""
    if not B.is_square():
        raise LinalgError("form must be square")
    return B.T


def in_subspace_span(vectors: Sequence[Sequence], S: Subspace) -> bool:
    return all(S.contains(v) for v in vectors)


def coords_in_basis(basis_cols: Mat) -> Mat:
    """Inverse of a change-of-basis matrix whose columns are basis vectors."""
    return basis_cols.inverse()
