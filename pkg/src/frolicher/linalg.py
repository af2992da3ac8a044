"""Exact linear algebra over Q(i).

Vectors are plain Python lists of scalars.  A :class:`Matrix` stores its rows
as dictionaries ``{column: value}`` holding only the nonzero entries; the
matrices built from structure constants are extremely sparse, and elimination
on dictionary rows skips all the zero work.  Nothing here ever approximates.

A :class:`Subspace` is stored through the reduced row-echelon form of a
spanning set, which is canonical: two subspaces are equal exactly when their
stored rows are equal.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

from .field import conj

__all__ = [
    "Matrix",
    "Subspace",
    "Quotient",
    "Unsolvable",
    "DimensionError",
    "MinNormSolver",
    "rref",
    "rref_rows",
    "kernel",
    "image",
    "preimage",
    "quotient_dim",
    "complement",
    "min_norm_solve",
    "hermitian_inner",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "vec_is_zero",
    "zero_vec",
    "unit_vec",
]

_ZERO = mpq(0)
_ONE = mpq(1)


class Unsolvable(ArithmeticError):
    """Raised when a linear system has no solution."""


class DimensionError(ValueError):
    """Operands with incompatible shapes."""


# ---------------------------------------------------------------------------
# vectors


def zero_vec(n: int) -> list:
    return [_ZERO] * n


def unit_vec(n: int, i: int) -> list:
    v = [_ZERO] * n
    v[i] = _ONE
    return v


def vec_add(u, v):
    if len(u) != len(v):
        raise DimensionError(f"cannot add vectors of length {len(u)} and {len(v)}")
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    if len(u) != len(v):
        raise DimensionError(f"cannot subtract vectors of length {len(u)} and {len(v)}")
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v):
    if not c:
        return [_ZERO] * len(v)
    return [c * a if a else _ZERO for a in v]


def vec_is_zero(v) -> bool:
    return not any(v)


def _sparse(v) -> dict:
    return {i: x for i, x in enumerate(v) if x}


def _dense(d: dict, n: int) -> list:
    v = [_ZERO] * n
    for i, x in d.items():
        v[i] = x
    return v


def hermitian_inner(x, y, gram: "Matrix | None" = None):
    """``<x, y> = y^H G x`` (linear in ``x``, antilinear in ``y``)."""
    if gram is None:
        return sum((a * conj(b) for a, b in zip(x, y) if a and b), _ZERO)
    gx = gram.apply(x)
    return sum((a * conj(b) for a, b in zip(gx, y) if a and b), _ZERO)


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """An immutable ``rows x cols`` matrix with Q(i) entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Sequence[dict] | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError("matrix dimensions must be nonnegative")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        if data is None:
            data = tuple({} for _ in range(rows))
        else:
            if len(data) != rows:
                raise DimensionError(f"expected {rows} rows, got {len(data)}")
            clean = []
            for r in data:
                d = {}
                for j, x in r.items():
                    if not 0 <= j < cols:
                        raise DimensionError(f"column index {j} out of range for {cols} columns")
                    if x:
                        d[j] = x
                clean.append(d)
            data = tuple(clean)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _trusted(cls, rows, cols, data):
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "_data", tuple(data))
        return m

    # construction ----------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls._trusted(len(rows), cols, [_sparse([mpq(x) if isinstance(x, int) else x for x in r]) for r in rows])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        data = [dict() for _ in range(rows)]
        for j, c in enumerate(columns):
            if len(c) != rows:
                raise DimensionError("column length mismatch")
            for i, x in enumerate(c):
                if x:
                    data[i][j] = x
        return cls._trusted(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._trusted(rows, cols, [{} for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._trusted(n, n, [{i: _ONE} for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        return cls._trusted(len(values), len(values), [{i: v} if v else {} for i, v in enumerate(values)])

    # access -----------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def row_dict(self, i: int) -> dict:
        return self._data[i]

    def entry(self, i: int, j: int):
        return self._data[i].get(j, _ZERO)

    def __getitem__(self, ij):
        i, j = ij
        return self.entry(i, j)

    def to_lists(self) -> list:
        return [_dense(r, self.cols) for r in self._data]

    def column(self, j: int) -> list:
        return [r.get(j, _ZERO) for r in self._data]

    def columns(self) -> list:
        cols = [[_ZERO] * self.rows for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, x in r.items():
                cols[j][i] = x
        return cols

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def is_zero(self) -> bool:
        return not any(self._data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    # algebra ----------------------------------------------------------------
    def transpose(self) -> "Matrix":
        data = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, x in r.items():
                data[j][i] = x
        return Matrix._trusted(self.cols, self.rows, data)

    @property
    def T(self):
        return self.transpose()

    def conjugate(self) -> "Matrix":
        return Matrix._trusted(self.rows, self.cols, [{j: conj(x) for j, x in r.items()} for r in self._data])

    def conj_transpose(self) -> "Matrix":
        data = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, x in r.items():
                data[j][i] = conj(x)
        return Matrix._trusted(self.cols, self.rows, data)

    @property
    def H(self):
        return self.conj_transpose()

    def apply(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise DimensionError(f"matrix with {self.cols} columns applied to vector of length {len(v)}")
        out = []
        for r in self._data:
            s = _ZERO
            for j, x in r.items():
                y = v[j]
                if y:
                    s = s + x * y
            out.append(s)
        return out

    def apply_sparse(self, v: dict) -> dict:
        """Apply to a sparse vector ``{index: value}``; returns a sparse vector."""
        out = {}
        for i, r in enumerate(self._data):
            s = _ZERO
            if len(r) < len(v):
                for j, x in r.items():
                    y = v.get(j)
                    if y:
                        s = s + x * y
            else:
                for j, y in v.items():
                    x = r.get(j)
                    if x:
                        s = s + x * y
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            odata = other._data
            data = []
            for r in self._data:
                acc: dict = {}
                for k, x in r.items():
                    for j, y in odata[k].items():
                        acc[j] = acc.get(j, _ZERO) + x * y
                data.append({j: v for j, v in acc.items() if v})
            return Matrix._trusted(self.rows, other.cols, data)
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        data = []
        for a, b in zip(self._data, other._data):
            d = dict(a)
            for j, y in b.items():
                s = d.get(j, _ZERO) + y
                if s:
                    d[j] = s
                else:
                    d.pop(j, None)
            data.append(d)
        return Matrix._trusted(self.rows, self.cols, data)

    def __neg__(self):
        return Matrix._trusted(self.rows, self.cols, [{j: -x for j, x in r.items()} for r in self._data])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        if not c:
            return Matrix.zeros(self.rows, self.cols)
        return Matrix._trusted(self.rows, self.cols, [{j: c * x for j, x in r.items()} for r in self._data])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        off = self.cols
        data = []
        for a, b in zip(self._data, other._data):
            d = dict(a)
            for j, y in b.items():
                d[j + off] = y
            data.append(d)
        return Matrix._trusted(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        return Matrix._trusted(self.rows + other.rows, self.cols, list(self._data) + list(other._data))

    def submatrix_rows(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix._trusted(len(idx), self.cols, [self._data[i] for i in idx])

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and self == self.conj_transpose()

    def rank(self) -> int:
        return len(rref_rows(self._data, self.cols)[1])


def block_matrix(blocks: Sequence[Sequence["Matrix | None"]], row_sizes, col_sizes) -> Matrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    col_off = [0]
    for c in col_sizes:
        col_off.append(col_off[-1] + c)
    data = []
    for bi, brow in enumerate(blocks):
        rows = [dict() for _ in range(row_sizes[bi])]
        for bj, blk in enumerate(brow):
            if blk is None:
                continue
            if blk.shape != (row_sizes[bi], col_sizes[bj]):
                raise DimensionError(f"block ({bi},{bj}) has shape {blk.shape}, expected {(row_sizes[bi], col_sizes[bj])}")
            off = col_off[bj]
            for i, r in enumerate(blk._data):
                for j, x in r.items():
                    rows[i][j + off] = x
        data.extend(rows)
    return Matrix._trusted(sum(row_sizes), col_off[-1], data)


# ---------------------------------------------------------------------------
# elimination


def rref_rows(rows: Iterable[dict], ncols: int, track: bool = False):
    """Gauss-Jordan elimination on sparse rows.

    Returns ``(reduced_rows, pivots)`` where ``reduced_rows`` holds only the
    nonzero rows, ordered by pivot.  With ``track=True`` a third element is
    returned: for each reduced row and for each zero row, the combination of
    input rows (as sparse dicts over input indices) that produced it, given as
    ``(transforms_of_reduced, transforms_of_null_rows)``.
    """
    work = []
    for k, r in enumerate(rows):
        r = {j: x for j, x in r.items() if x}
        if track:
            work.append((r, {k: _ONE}))
        else:
            work.append((r, None))

    pivot_rows: dict[int, tuple] = {}  # pivot column -> (row, transform)
    null_transforms = []
    for r, t in work:
        # reduce r against existing pivots (forward only; back-substitution later)
        r = dict(r)
        t = dict(t) if t is not None else None
        while r:
            c = min(r)
            if c in pivot_rows:
                pr, pt = pivot_rows[c]
                f = r[c]
                for j, x in pr.items():
                    s = r.get(j, _ZERO) - f * x
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
                if t is not None:
                    for j, x in pt.items():
                        s = t.get(j, _ZERO) - f * x
                        if s:
                            t[j] = s
                        else:
                            t.pop(j, None)
                continue
            # new pivot: normalise
            inv = _ONE / r[c]
            if inv != _ONE:
                r = {j: x * inv for j, x in r.items()}
                if t is not None:
                    t = {j: x * inv for j, x in t.items()}
            pivot_rows[c] = (r, t)
            break
        else:
            if t is not None:
                null_transforms.append(t)

    pivots = sorted(pivot_rows)
    # back substitution, from the last pivot upwards
    done: dict[int, tuple] = {}
    for c in reversed(pivots):
        r, t = pivot_rows[c]
        r = dict(r)
        t = dict(t) if t is not None else None
        for c2 in [j for j in r if j > c and j in done]:
            f = r.get(c2)
            if not f:
                continue
            pr, pt = done[c2]
            for j, x in pr.items():
                s = r.get(j, _ZERO) - f * x
                if s:
                    r[j] = s
                else:
                    r.pop(j, None)
            if t is not None:
                for j, x in pt.items():
                    s = t.get(j, _ZERO) - f * x
                    if s:
                        t[j] = s
                    else:
                        t.pop(j, None)
        done[c] = (r, t)
    reduced = [done[c][0] for c in pivots]
    if track:
        return reduced, pivots, ([done[c][1] for c in pivots], null_transforms)
    return reduced, pivots


def rref(m: Matrix):
    """Reduced row-echelon form and pivot columns of ``m``."""
    rows, pivots = rref_rows(m._data, m.cols)
    data = list(rows) + [{} for _ in range(m.rows - len(rows))]
    return Matrix._trusted(m.rows, m.cols, data), pivots


def _kernel_from_rref(rows, pivots, ncols) -> list:
    """Kernel basis (sparse dicts) from reduced rows; one vector per free column."""
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: _ONE}
        for r, p in zip(rows, pivots):
            x = r.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A linear subspace of ``Q(i)^n`` in canonical echelon form.

    ``basis()`` returns the rows of the reduced row-echelon form of any
    spanning set; they are the columns of the reduced column-echelon basis
    matrix, so equal subspaces have identical stored data.
    """

    __slots__ = ("ambient_dim", "_rows", "pivots", "_ann", "__weakref__")

    def __init__(self, ambient_dim: int, rows: Sequence[dict], pivots: Sequence[int]):
        self.ambient_dim = ambient_dim
        self._rows = tuple(rows)
        self.pivots = tuple(pivots)
        self._ann = None

    # constructors -----------------------------------------------------------
    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable) -> "Subspace":
        rows = []
        for v in vectors:
            if isinstance(v, dict):
                rows.append(v)
            else:
                if len(v) != ambient_dim:
                    raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
                rows.append(_sparse(v))
        red, piv = rref_rows(rows, ambient_dim)
        return cls(ambient_dim, red, piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [{i: _ONE} for i in range(n)], range(n))

    # queries -----------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self):
        return self.dim

    def basis(self) -> list:
        return [_dense(r, self.ambient_dim) for r in self._rows]

    def basis_sparse(self) -> tuple:
        return self._rows

    def basis_matrix(self) -> Matrix:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return Matrix._trusted(self.dim, self.ambient_dim, self._rows).transpose()

    def coords(self, v) -> list:
        """Coordinates of ``v`` in :meth:`basis`; raises ``ValueError`` if ``v`` is outside."""
        vv = v if isinstance(v, dict) else _sparse(v)
        c = [vv.get(p, _ZERO) for p in self.pivots]
        resid = dict(vv)
        for x, r in zip(c, self._rows):
            if x:
                for j, y in r.items():
                    s = resid.get(j, _ZERO) - x * y
                    if s:
                        resid[j] = s
                    else:
                        resid.pop(j, None)
        if resid:
            raise ValueError("vector is not in the subspace")
        return c

    def contains(self, v) -> bool:
        try:
            self.coords(v)
        except ValueError:
            return False
        return True

    __contains__ = contains

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __le__(self, other: "Subspace") -> bool:
        _check_same(self, other)
        return all(other.contains(r) for r in self._rows)

    def issubset(self, other: "Subspace") -> bool:
        return self <= other

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    # algebra -----------------------------------------------------------------
    def annihilator_rows(self) -> list:
        """Sparse rows ``N`` with ``self = {v : N v = 0}`` (bilinear pairing)."""
        if self._ann is None:
            self._ann = _kernel_from_rref(self._rows, self.pivots, self.ambient_dim)
        return self._ann

    def sum(self, other: "Subspace") -> "Subspace":
        _check_same(self, other)
        return Subspace.span(self.ambient_dim, list(self._rows) + list(other._rows))

    __add__ = sum

    def intersect(self, other: "Subspace") -> "Subspace":
        _check_same(self, other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        if self <= other:
            return self
        if other <= self:
            return other
        cons = self.annihilator_rows() + other.annihilator_rows()
        red, piv = rref_rows(cons, self.ambient_dim)
        return Subspace.span(self.ambient_dim, _kernel_from_rref(red, piv, self.ambient_dim))

    __and__ = intersect

    def image_under(self, m: Matrix) -> "Subspace":
        if m.cols != self.ambient_dim:
            raise DimensionError("matrix does not act on this subspace")
        return Subspace.span(m.rows, [m.apply_sparse(r) for r in self._rows])


def _check_same(s: Subspace, t: Subspace):
    if s.ambient_dim != t.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {s.ambient_dim} vs {t.ambient_dim}")


def kernel(m: Matrix) -> Subspace:
    red, piv = rref_rows(m._data, m.cols)
    return Subspace.span(m.cols, _kernel_from_rref(red, piv, m.cols))


def image(m: Matrix) -> Subspace:
    return Subspace.span(m.rows, m.transpose()._data)


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """``{x : m x in s}``."""
    if m.rows != s.ambient_dim:
        raise DimensionError("target subspace lives in the wrong space")
    ann = s.annihilator_rows()
    if not ann:
        return Subspace.full(m.cols)
    # rows of N m are N_row . m = sum_k N_row[k] * m.row(k)
    cons = []
    for a in ann:
        acc: dict = {}
        for k, x in a.items():
            for j, y in m.row_dict(k).items():
                acc[j] = acc.get(j, _ZERO) + x * y
        cons.append({j: v for j, v in acc.items() if v})
    red, piv = rref_rows(cons, m.cols)
    return Subspace.span(m.cols, _kernel_from_rref(red, piv, m.cols))


def quotient_dim(s: Subspace, t: Subspace) -> int:
    _check_same(s, t)
    if not t <= s:
        raise ValueError("quotient needs T contained in S")
    return s.dim - t.dim


def complement(s: Subspace, t: Subspace) -> list:
    """Canonical complement of ``t`` inside ``s``.

    Greedy in the canonical basis order of ``s``: a basis vector is kept when it
    is independent of ``t`` plus the vectors kept so far.  Works whether or not
    ``t`` is contained in ``s`` (the complement is then taken of ``s ∩ t``).
    Returns sparse vectors.
    """
    _check_same(s, t)
    kept = []
    # incremental echelon structure over t
    pivot_rows: dict[int, dict] = {}
    for r in t.basis_sparse():
        _insert_row(pivot_rows, r)
    for r in s.basis_sparse():
        if _insert_row(pivot_rows, r):
            kept.append(r)
    return kept


def _insert_row(pivot_rows: dict, r: dict) -> bool:
    r = dict(r)
    while r:
        c = min(r)
        pr = pivot_rows.get(c)
        if pr is None:
            inv = _ONE / r[c]
            pivot_rows[c] = {j: x * inv for j, x in r.items()}
            return True
        f = r[c]
        for j, x in pr.items():
            s = r.get(j, _ZERO) - f * x
            if s:
                r[j] = s
            else:
                r.pop(j, None)
    return False


class Quotient:
    """The quotient ``S / T`` with a canonical complement basis.

    ``T`` need not lie inside ``S``; the quotient taken is ``S / (S ∩ T)``,
    with ``coords`` accepting any vector of ``S + T`` and returning its class
    coordinates (the ``T`` part is discarded).
    """

    def __init__(self, s: Subspace, t: Subspace):
        _check_same(s, t)
        self.S = s
        self.T = t
        self.reps = complement(s, t)  # sparse dicts
        n = s.ambient_dim
        rows = list(self.reps) + list(t.basis_sparse())
        red, piv, (tr, _null) = rref_rows(rows, n, track=True)
        self._red = red
        self._piv = piv
        self._tr = tr
        self._k = len(self.reps)

    @property
    def dim(self) -> int:
        return self._k

    def rep_vectors(self) -> list:
        return [_dense(r, self.S.ambient_dim) for r in self.reps]

    def coords(self, v) -> list:
        vv = v if isinstance(v, dict) else _sparse(v)
        resid = dict(vv)
        c = {}
        for p, r, t in zip(self._piv, self._red, self._tr):
            x = resid.get(p)
            if not x:
                continue
            for j, y in r.items():
                s = resid.get(j, _ZERO) - x * y
                if s:
                    resid[j] = s
                else:
                    resid.pop(j, None)
            for j, y in t.items():
                if j < self._k:
                    c[j] = c.get(j, _ZERO) + x * y
        if resid:
            raise ValueError("vector is not in S + T")
        return [c.get(j, _ZERO) for j in range(self._k)]

    def lift(self, coords) -> list:
        out = zero_vec(self.S.ambient_dim)
        for x, r in zip(coords, self.reps):
            if x:
                for j, y in r.items():
                    out[j] = out[j] + x * y
        return out


# ---------------------------------------------------------------------------
# minimal-norm solves


def _inverse(m: Matrix) -> Matrix:
    n = m.rows
    if m.cols != n:
        raise DimensionError("inverse of a non-square matrix")
    red, piv, (tr, _null) = rref_rows(m._data, n, track=True)
    if len(piv) != n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._trusted(n, n, tr)


class MinNormSolver:
    """Precomputed minimal-norm solver for ``a x = b`` under the metric ``gram``.

    The returned solution is the unique one orthogonal (for ``gram``) to the
    kernel of ``a``.  Construction costs one elimination; every later solve is
    a matrix-vector product plus a solvability check.
    """

    def __init__(self, a: Matrix, gram: Matrix | None = None):
        self.a = a
        m, n = a.shape
        if gram is not None and gram.shape != (n, n):
            raise DimensionError("gram does not match the domain of a")
        red, piv, (tr, null) = rref_rows(a._data, n, track=True)
        self.rank = len(piv)
        self._null = null  # left-kernel: b solvable iff these vanish on b
        # particular solution: x[piv_j] = (tr_j . b)
        part = [dict() for _ in range(n)]
        for p, t in zip(piv, tr):
            part[p] = t
        particular = Matrix._trusted(n, m, part)
        kb = _kernel_from_rref(red, piv, n)
        if kb:
            k = Matrix._trusted(len(kb), n, kb).transpose()  # n x d
            g = gram if gram is not None else Matrix.identity(n)
            kh_g = k.conj_transpose() @ g
            small = kh_g @ k
            proj = Matrix.identity(n) - (k @ (_inverse(small) @ kh_g))
            self.pinv = proj @ particular
            self.kernel = Subspace.span(n, kb)
        else:
            self.pinv = particular
            self.kernel = Subspace.zero(n)

    def solvable(self, b) -> bool:
        bb = b if isinstance(b, dict) else _sparse(b)
        for t in self._null:
            s = _ZERO
            for j, x in t.items():
                y = bb.get(j)
                if y:
                    s = s + x * y
            if s:
                return False
        return True

    def solve(self, b) -> list:
        if len(b) != self.a.rows:
            raise DimensionError("right-hand side has the wrong length")
        if not self.solvable(b):
            raise Unsolvable("right-hand side is not in the image")
        return self.pinv.apply(b)


def min_norm_solve(a: Matrix, b, gram: Matrix | None = None) -> list:
    """Minimal ``gram``-norm solution of ``a x = b``; raises :class:`Unsolvable`."""
    return MinNormSolver(a, gram).solve(b)
