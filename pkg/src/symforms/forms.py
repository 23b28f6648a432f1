"""Symmetric bilinear forms as Gram matrices.

A form f on K^n is stored as its full symmetric n x n Gram matrix;
f(u, v) = u^T G v.  Symmetry is validated at construction and on load,
never repaired.  Vectors are plain coordinate sequences over the
field.
"""

from __future__ import annotations

import numpy as np

from .field import Field, FieldElement
from .linalg import (
    Matrix,
    VectorSubspace,
    congruence,
    kernel_basis,
    mat_vec,
    rank,
    vector_codes,
)

__all__ = [
    "SymForm",
    "evaluate",
    "radical",
    "is_alternating",
    "restrict",
    "is_totally_isotropic",
    "even_rank_check",
]


class SymForm:
    """A symmetric bilinear form on K^n."""

    __slots__ = ("gram",)

    def __init__(self, gram: Matrix):
        if gram.rows != gram.cols:
            raise ValueError("Gram matrix must be square")
        if not gram.is_symmetric():
            raise ValueError("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", gram)

    def __setattr__(self, name, value):
        raise AttributeError("SymForm is immutable")

    @classmethod
    def from_rows(cls, field: Field, rows) -> "SymForm":
        return cls(Matrix(field, rows))

    @classmethod
    def zero(cls, field: Field, n: int) -> "SymForm":
        return cls(Matrix.zeros(field, n, n))

    @property
    def field(self) -> Field:
        return self.gram.field

    @property
    def n(self) -> int:
        return self.gram.rows

    def rank(self) -> int:
        return rank(self.gram)

    def is_zero(self) -> bool:
        return self.gram.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, SymForm) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"SymForm({self.gram!r})"

    def to_json_dict(self) -> dict:
        d = self.gram.to_json_dict()
        d["n"] = self.n
        return d

    @classmethod
    def from_json_dict(cls, field: Field, d: dict) -> "SymForm":
        gram = Matrix.from_json_dict(field, d)
        if d.get("n", gram.rows) != gram.rows:
            raise ValueError("inconsistent dimension in serialized form")
        return cls(gram)


def evaluate(f: SymForm, u, v) -> FieldElement:
    """f(u, v) = u^T G v; symmetric in its arguments."""
    field = f.field
    uc = vector_codes(field, u, f.n)
    w = mat_vec(f.gram, v)
    acc = 0
    for a, b in zip(uc, w):
        acc = field._add_codes(acc, field._mul_codes(int(a), int(b)))
    return FieldElement(field, acc)


def radical(f: SymForm) -> VectorSubspace:
    """{v : f(v, w) = 0 for all w}, the kernel of the Gram matrix."""
    return kernel_basis(f.gram)


def is_alternating(f: SymForm) -> bool:
    """Whether f(v, v) = 0 for every v.

    In characteristic 2 this is exactly "zero diagonal"; in odd
    characteristic a symmetric alternating form is the zero form.
    """
    if f.field.p == 2:
        return not f.gram._arr.diagonal().any()
    return f.is_zero()


def restrict(f: SymForm, U: VectorSubspace) -> SymForm:
    """The form induced on U, as a dim(U) x dim(U) Gram matrix B G B^T."""
    if U.field != f.field or U.ambient_dim != f.n:
        raise ValueError("subspace does not live in the form's space")
    return SymForm(congruence(U.basis_matrix(), f.gram))


def is_totally_isotropic(f: SymForm, R: VectorSubspace) -> bool:
    """Whether f vanishes identically on R x R."""
    return restrict(f, R).is_zero()


def even_rank_check(A2: Matrix) -> tuple[int, bool]:
    """Rank and parity of the block matrix [[0, A2], [A2^T, 0]].

    The rank always comes out even, equal to twice the rank of A2.
    """
    field = A2.field
    a, b = A2.rows, A2.cols
    n = a + b
    blk = np.zeros((n, n), dtype=field.code_dtype)
    blk[:a, a:] = A2._arr
    blk[a:, :a] = A2._arr.T
    r = rank(Matrix(field, blk))
    return r, r % 2 == 0
