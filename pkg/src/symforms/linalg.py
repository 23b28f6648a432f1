"""Exact dense linear algebra over a finite field.

Matrices hold integer element codes in numpy arrays and stay immutable
after construction.  Row reduction uses first-nonzero pivot selection,
which is all exact arithmetic needs and keeps every canonical form
reproducible.  ``batch_rank`` runs Gaussian elimination across a whole
stack of matrices at once; the enumeration sweeps in
:mod:`symforms.spaces` are built on it.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .field import Field, FieldElement

__all__ = [
    "Matrix",
    "VectorSubspace",
    "rank",
    "kernel_basis",
    "congruence",
    "complete_basis",
    "mat_mul",
    "mat_vec",
    "batch_rank",
    "stacked_rank",
    "intersection_dim",
    "vector_codes",
    "DIM_CAP",
]

# Dense matrices only; all worked instances are tiny.
DIM_CAP = 64


def vector_codes(field: Field, v, n: Optional[int] = None) -> np.ndarray:
    """Coerce a coordinate vector (codes or FieldElements) to a code array."""
    if isinstance(v, np.ndarray):
        arr = v.astype(field.code_dtype)
    else:
        codes = []
        for x in v:
            if isinstance(x, FieldElement):
                if x.owner != field:
                    raise ValueError(f"vector entry from {x.owner!r}, expected {field!r}")
                codes.append(x.code)
            else:
                codes.append(int(x))
        arr = np.array(codes, dtype=field.code_dtype)
    if arr.ndim != 1:
        raise ValueError("expected a 1-d coordinate vector")
    if arr.size and int(arr.max()) >= field.q:
        raise ValueError("vector entry out of range for the field")
    if n is not None and arr.size != n:
        raise ValueError(f"vector length {arr.size}, expected {n}")
    return arr


def _as_code_array(field: Field, entries) -> np.ndarray:
    if isinstance(entries, np.ndarray):
        arr = entries.astype(field.code_dtype)
    else:
        rows = []
        for row in entries:
            rows.append(
                [x.code if isinstance(x, FieldElement) else int(x) for x in row]
            )
        arr = np.array(rows, dtype=field.code_dtype)
        if arr.size == 0:
            arr = arr.reshape(len(rows), 0)
    if arr.ndim != 2:
        raise ValueError("matrix entries must form a 2-d grid")
    if arr.size and int(arr.max()) >= field.q:
        raise ValueError("matrix entry out of range for the field")
    return arr


class Matrix:
    """Immutable dense matrix over a single field."""

    __slots__ = ("field", "_arr")

    def __init__(self, field: Field, entries):
        arr = _as_code_array(field, entries)
        if arr.shape[0] > DIM_CAP or arr.shape[1] > DIM_CAP:
            raise ValueError(f"matrix dimensions {arr.shape} exceed the cap {DIM_CAP}")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_arr", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=field.code_dtype))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=field.code_dtype))

    @property
    def rows(self) -> int:
        return self._arr.shape[0]

    @property
    def cols(self) -> int:
        return self._arr.shape[1]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self._arr.T)

    def codes(self) -> np.ndarray:
        """A writable copy of the code grid."""
        return self._arr.copy()

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, int(self._arr[i, j]))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self._arr.shape == other._arr.shape
            and bool(np.array_equal(self._arr, other._arr))
        )

    def __hash__(self):
        return hash((self.field, self._arr.shape, self._arr.tobytes()))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def is_zero(self) -> bool:
        return not self._arr.any()

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self._arr, self._arr.T))

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self._arr.tolist()!r})"

    def to_json_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[int(x) for x in row] for row in self._arr],
        }

    @classmethod
    def from_json_dict(cls, field: Field, d: dict) -> "Matrix":
        arr = np.array(d["entries"], dtype=field.code_dtype).reshape(
            d["rows"], d["cols"]
        )
        return cls(field, arr)

    def __getstate__(self):
        return (self.field, self._arr.tobytes(), self._arr.shape)

    def __setstate__(self, state):
        field, raw, shape = state
        arr = np.frombuffer(raw, dtype=field.code_dtype).reshape(shape).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_arr", arr)


def _check_same_field(a: Matrix, b: Matrix) -> None:
    if a.field != b.field:
        raise ValueError(f"mixed fields: {a.field!r} and {b.field!r}")


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------


def _row_reduce(arr: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting.

    Returns (R, pivot_columns); rows beyond len(pivot_columns) are zero.
    """
    ops = field.ops()
    R = arr.astype(field.code_dtype).copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        pv = int(R[r, c])
        if pv != 1:
            R[r] = ops.mul(ops.inv(np.array(pv, dtype=field.code_dtype)), R[r])
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = ops.sub(R[others], ops.mul(R[others, c][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M: Matrix) -> int:
    """Exact rank by Gaussian elimination."""
    _, pivots = _row_reduce(M._arr, M.field)
    return len(pivots)


def batch_rank(mats: np.ndarray, field: Field) -> np.ndarray:
    """Ranks of a stack of matrices, eliminated column by column in lockstep.

    ``mats`` has shape (N, rows, cols) of element codes; the result is a
    length-N int array.  Per column, every matrix that still has a
    pivot candidate gets one elimination step.
    """
    ops = field.ops()
    A = np.array(mats, dtype=field.code_dtype, copy=True)
    if A.ndim != 3:
        raise ValueError("expected a (N, rows, cols) stack")
    N, R, C = A.shape
    pivot = np.zeros(N, dtype=np.int64)
    if N == 0 or R == 0 or C == 0:
        return pivot
    rowidx = np.arange(R)
    for c in range(C):
        cand = (A[:, :, c] != 0) & (rowidx[None, :] >= pivot[:, None])
        has = cand.any(axis=1)
        idx = np.nonzero(has)[0]
        if idx.size == 0:
            continue
        src = np.argmax(cand[idx], axis=1)
        dst = pivot[idx]
        tmp = A[idx, src, :].copy()
        A[idx, src, :] = A[idx, dst, :]
        A[idx, dst, :] = tmp
        piv = A[idx, dst, c]
        pivrow = ops.mul(ops.inv(piv)[:, None], A[idx, dst, :])
        sub = A[idx]
        fac = sub[:, :, c]
        sub = ops.sub(sub, ops.mul(fac[:, :, None], pivrow[:, None, :]))
        sub[np.arange(idx.size), dst, :] = pivrow
        A[idx] = sub
        pivot[idx] += 1
    return pivot


# ---------------------------------------------------------------------------
# Vector subspaces
# ---------------------------------------------------------------------------


class VectorSubspace:
    """A subspace of K^n held as a canonical RREF basis.

    Equal subspaces have byte-identical bases, so equality and hashing
    are structural.
    """

    __slots__ = ("field", "ambient_dim", "_basis", "_pivots")

    def __init__(self, field: Field, ambient_dim: int, basis: np.ndarray, pivots):
        basis = np.ascontiguousarray(basis.astype(field.code_dtype))
        basis.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "_basis", basis)
        object.__setattr__(self, "_pivots", tuple(pivots))

    def __setattr__(self, name, value):
        raise AttributeError("VectorSubspace is immutable")

    @classmethod
    def from_vectors(cls, field: Field, ambient_dim: int, vectors) -> "VectorSubspace":
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            arr = vectors.astype(field.code_dtype)
        else:
            rows = [vector_codes(field, v, ambient_dim) for v in vectors]
            if rows:
                arr = np.stack(rows)
            else:
                arr = np.zeros((0, ambient_dim), dtype=field.code_dtype)
        if arr.shape[1] != ambient_dim:
            raise ValueError(f"vectors have length {arr.shape[1]}, expected {ambient_dim}")
        R, pivots = _row_reduce(arr, field)
        return cls(field, ambient_dim, R[: len(pivots)], pivots)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "VectorSubspace":
        return cls.from_vectors(field, ambient_dim, [])

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "VectorSubspace":
        return cls.from_vectors(
            field, ambient_dim, np.eye(ambient_dim, dtype=field.code_dtype)
        )

    @property
    def dim(self) -> int:
        return self._basis.shape[0]

    def basis_matrix(self) -> Matrix:
        return Matrix(self.field, self._basis)

    def basis_rows(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self._basis]

    def contains(self, v) -> bool:
        w = vector_codes(self.field, v, self.ambient_dim).copy()
        ops = self.field.ops()
        for i, p in enumerate(self._pivots):
            c = w[p]
            if c:
                w = ops.sub(w, ops.mul(np.array(c), self._basis[i]))
        return not w.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VectorSubspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and bool(np.array_equal(self._basis, other._basis))
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self._basis.tobytes()))

    def __repr__(self) -> str:
        return f"VectorSubspace(dim={self.dim}, ambient={self.ambient_dim})"

    def __getstate__(self):
        return (self.field, self.ambient_dim, self._basis.tobytes(), self._basis.shape, self._pivots)

    def __setstate__(self, state):
        field, n, raw, shape, pivots = state
        arr = np.frombuffer(raw, dtype=field.code_dtype).reshape(shape).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient_dim", n)
        object.__setattr__(self, "_basis", arr)
        object.__setattr__(self, "_pivots", tuple(pivots))


def kernel_basis(M: Matrix) -> VectorSubspace:
    """Canonical basis of the right kernel {v : M v = 0}."""
    field = M.field
    R, pivots = _row_reduce(M._arr, field)
    n = M.cols
    ops = field.ops()
    free = [c for c in range(n) if c not in pivots]
    rows = np.zeros((len(free), n), dtype=field.code_dtype)
    for out_row, f in enumerate(free):
        rows[out_row, f] = 1
        for r_i, p_c in enumerate(pivots):
            val = int(R[r_i, f])
            if val:
                rows[out_row, p_c] = field._neg_code(val)
    del ops
    return VectorSubspace.from_vectors(field, n, rows)


# ---------------------------------------------------------------------------
# Products and congruence
# ---------------------------------------------------------------------------


def _matmul_arr(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    ops = field.ops()
    out = np.zeros((a.shape[0], b.shape[1]), dtype=field.code_dtype)
    for k0 in range(a.shape[1]):
        col = a[:, k0]
        if not col.any():
            continue
        out = ops.add(out, ops.mul(col[:, None], b[k0][None, :]))
    return out


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    _check_same_field(A, B)
    if A.cols != B.rows:
        raise ValueError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    return Matrix(A.field, _matmul_arr(A._arr, B._arr, A.field))


def mat_vec(M: Matrix, v) -> np.ndarray:
    """M v as a code array."""
    w = vector_codes(M.field, v, M.cols)
    return _matmul_arr(M._arr, w[:, None], M.field)[:, 0]


def congruence(X: Matrix, S: Matrix) -> Matrix:
    """The congruence transform X S X^T (X may be rectangular m x n)."""
    _check_same_field(X, S)
    if S.rows != S.cols:
        raise ValueError("S must be square")
    if X.cols != S.rows:
        raise ValueError(f"X has {X.cols} columns but S is {S.rows}x{S.rows}")
    field = X.field
    XS = _matmul_arr(X._arr, S._arr, field)
    return Matrix(field, _matmul_arr(XS, X._arr.T, field))


def complete_basis(W: VectorSubspace) -> Matrix:
    """An invertible n x n matrix whose first dim(W) rows span W.

    The remaining rows are the standard vectors at the non-pivot
    coordinates of W's canonical basis, smallest index first.
    """
    field = W.field
    n = W.ambient_dim
    free = [c for c in range(n) if c not in W._pivots]
    rows = np.zeros((n, n), dtype=field.code_dtype)
    rows[: W.dim] = W._basis
    for i, f in enumerate(free):
        rows[W.dim + i, f] = 1
    return Matrix(field, rows)


def stacked_rank(field: Field, *arrays: np.ndarray) -> int:
    """Rank of several row blocks stacked together."""
    parts = [a for a in arrays if a.shape[0]]
    if not parts:
        return 0
    _, pivots = _row_reduce(np.vstack(parts), field)
    return len(pivots)


def intersection_dim(A: VectorSubspace, B: VectorSubspace) -> int:
    """dim(A) + dim(B) - dim(A + B)."""
    if A.field != B.field or A.ambient_dim != B.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    return A.dim + B.dim - stacked_rank(A.field, A._basis, B._basis)
