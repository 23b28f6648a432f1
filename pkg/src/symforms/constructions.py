"""Builders for the example subspaces.

Five families: the rank-2 space of dimension n-1, the even-rank-2r
space of dimension n-2r+1, trace-form spaces of dimension 3r built
from 2x2 Grams over a degree-r extension, the full alternating space
on a 4-dimensional space in characteristic 2, and restriction of
scalars of a space over an extension field.

Every builder attaches a JSON-safe recipe record to the result so the
counting verifier can recognise instances with known closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .field import Field, FieldElement, embed_subfield, make_field, trace_table
from .linalg import Matrix, rank
from .forms import SymForm
from .spaces import FormSubspace, span_canonicalize

__all__ = [
    "ConstructionRecipe",
    "rank2_space",
    "even_rank_space",
    "trace_form_space",
    "alt_full_space",
    "restrict_scalars",
    "build_from_recipe",
]


@dataclass(frozen=True)
class ConstructionRecipe:
    kind: str
    params: dict

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ConstructionRecipe":
        return cls(d["kind"], dict(d["params"]))


def _recipe(kind: str, **params) -> dict:
    return ConstructionRecipe(kind, params).to_json_dict()


def rank2_space(F: Field, n: int) -> FormSubspace:
    """Span of e_1 w^T + w e_1^T for w in <e_2, ..., e_n>.

    Dimension n - 1; every nonzero element has rank exactly 2.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    forms = []
    for j in range(1, n):
        G = np.zeros((n, n), dtype=F.code_dtype)
        G[0, j] = G[j, 0] = 1
        forms.append(SymForm(Matrix(F, G)))
    return span_canonicalize(
        forms, recipe=_recipe("rank2", field=F.to_json_dict(), n=n)
    )


def even_rank_space(F: Field, n: int, r: int) -> FormSubspace:
    """A space of dimension n - 2r + 1 whose nonzero elements have rank 2r.

    For a parameter vector c the element is U C^T + C U^T, where U
    collects e_1 ... e_r and column i of C is the vector with the
    entries of c placed starting at coordinate r + i.  The staircase of
    leading entries makes [U C] full column rank for c != 0, so the
    rank is exactly 2r; the exhaustive spectra in the test-suite
    certify this on every instance used.
    """
    if not (1 <= r and 2 * r <= n):
        raise ValueError(f"need 2 <= 2r <= n, got r={r}, n={n}")
    forms = []
    for k0 in range(n - 2 * r + 1):
        G = np.zeros((n, n), dtype=F.code_dtype)
        for i in range(r):
            j = r + k0 + i
            G[i, j] = F._add_codes(int(G[i, j]), 1)
            G[j, i] = G[i, j]
        forms.append(SymForm(Matrix(F, G)))
    return span_canonicalize(
        forms, recipe=_recipe("even_rank", field=F.to_json_dict(), n=n, r=r)
    )


def _power_basis(L: Field, s: int) -> list[int]:
    # 1, t, ..., t^(s-1) of L's own generator; independent over any
    # subfield K with [L:K] = s since t generates L.
    t = L.p if L.k > 1 else 1
    out = [1]
    for _ in range(1, s):
        out.append(L._mul_codes(out[-1], t))
    return out


def _check_k_basis(L: Field, K: Field, basis_codes: Sequence[int], s: int) -> None:
    """Validate that the given L-elements form a K-basis of L."""
    if len(basis_codes) != s:
        raise ValueError(f"need exactly {s} basis elements, got {len(basis_codes)}")
    gfp = make_field(L.p, 1)
    # GF(p)-matrix of (c_0..c_{s-1}) in K^s -> sum embed(c_i) * b_i in L;
    # the b_i are a K-basis exactly when this map is invertible.
    rows = []
    for b in basis_codes:
        for i in range(K.k):
            e = embed_subfield(L, K, FieldElement(K, _k_power_code(K, i)))
            prod = L._mul_codes(b, e.code)
            digs = []
            c = prod
            for _ in range(L.k):
                digs.append(c % L.p)
                c //= L.p
            rows.append(digs)
    m = Matrix(gfp, rows)
    if rank(m) != L.k:
        raise ValueError("the given elements are not a K-basis of L")


def _k_power_code(K: Field, i: int) -> int:
    g = K.p if K.k > 1 else 1
    return K._pow_code(g, i)


def _traced_gram(
    L: Field,
    K: Field,
    gram_L: np.ndarray,
    twist: int,
    basis_codes: Sequence[int],
) -> np.ndarray:
    """K-Gram of (u, v) -> Tr(twist * g_L(u, v)) on K^(s * n_L).

    Coordinate (c, a) of the K-space corresponds to basis_codes[a] * e_c
    in L^(n_L); entries are Tr(twist * b_a * b_b * G_L[c, c']).
    """
    TR = trace_table(L, K)
    s = len(basis_codes)
    n_L = gram_L.shape[0]
    n = s * n_L
    out = np.zeros((n, n), dtype=K.code_dtype)
    prods = [
        [L._mul_codes(basis_codes[a], basis_codes[b]) for b in range(s)]
        for a in range(s)
    ]
    for c in range(n_L):
        for cp in range(n_L):
            g = int(gram_L[c, cp])
            if not g:
                continue
            for a in range(s):
                for b in range(s):
                    val = L._mul_codes(twist, L._mul_codes(prods[a][b], g))
                    out[c * s + a, cp * s + b] = TR[val]
    return out


def trace_form_space(K: Field, r: int, shape: str = "2x2") -> FormSubspace:
    """Compose 2x2 symmetric Grams over a degree-r extension with the trace.

    W is a 2-dimensional space over L = GF(q^r) viewed as K^(2r); each
    L-form f yields the K-form (u, v) -> Tr(f(u, v)).  Generators are
    the L-Grams E11, E22, E12+E21 crossed with the power-basis scalars,
    in that row-major order.  The span has dimension 3r and nonzero
    ranks contained in {r, 2r}.
    """
    if shape != "2x2":
        raise ValueError(f"unsupported shape {shape!r}")
    if r < 2:
        raise ValueError(f"need extension degree r >= 2, got {r}")
    L = make_field(K.p, K.k * r)
    basis_codes = _power_basis(L, r)
    grams_L = []
    for which in ("11", "22", "sym"):
        G = np.zeros((2, 2), dtype=np.int64)
        if which == "11":
            G[0, 0] = 1
        elif which == "22":
            G[1, 1] = 1
        else:
            G[0, 1] = G[1, 0] = 1
        grams_L.append(G)
    forms = []
    for G in grams_L:
        for twist in basis_codes:
            arr = _traced_gram(L, K, G, twist, basis_codes)
            forms.append(SymForm(Matrix(K, arr)))
    space = span_canonicalize(
        forms,
        recipe=_recipe("trace2x2", field=K.to_json_dict(), degree=r),
    )
    if space.dim != 3 * r:
        raise AssertionError(
            f"trace construction produced dimension {space.dim}, expected {3 * r}"
        )
    return space


def alt_full_space(F: Field) -> FormSubspace:
    """Alt(V) for a 4-dimensional V in characteristic 2.

    The 6-dimensional space of symmetric 4x4 Grams with zero diagonal;
    nonzero ranks are 2 or 4.
    """
    if F.p != 2:
        raise ValueError("the alternating space construction needs characteristic 2")
    n = 4
    forms = []
    for i in range(n):
        for j in range(i + 1, n):
            G = np.zeros((n, n), dtype=F.code_dtype)
            G[i, j] = G[j, i] = 1
            forms.append(SymForm(Matrix(F, G)))
    return span_canonicalize(
        forms, recipe=_recipe("alt_full", field=F.to_json_dict())
    )


def restrict_scalars(
    M_L: FormSubspace, K: Field, basis: Optional[Sequence] = None
) -> FormSubspace:
    """View an L-space of forms as a K-space via an L/K-basis and the trace.

    The result lives on K^(s * n_L) with s = [L:K], is spanned by
    Tr(b_m * f(., .)) for f over M_L's basis and b_m over the chosen
    L/K-basis, and has dimension s * dim(M_L); an L-rank-rho form maps
    to K-rank s * rho.  The default basis is the power basis of L's
    generator; rank counts do not depend on this choice.
    """
    L = M_L.field
    if L.p != K.p or L.k % K.k != 0:
        raise ValueError(f"{K!r} is not a subfield of {L!r}")
    s = L.k // K.k
    if basis is None:
        basis_codes = _power_basis(L, s)
    else:
        basis_codes = [L.element(b).code for b in basis]
        _check_k_basis(L, K, basis_codes, s)
    forms = []
    for f in M_L.basis:
        for twist in basis_codes:
            arr = _traced_gram(L, K, f.gram._arr, twist, basis_codes)
            forms.append(SymForm(Matrix(K, arr)))
    inner = M_L.recipe
    space = span_canonicalize(
        forms,
        field=K,
        n=s * M_L.n,
        recipe=_recipe(
            "restrict_scalars",
            field=K.to_json_dict(),
            degree=s,
            inner=inner,
        ),
    )
    if space.dim != s * M_L.dim:
        raise AssertionError(
            f"restriction produced dimension {space.dim}, expected {s * M_L.dim}"
        )
    return space


def build_from_recipe(recipe: dict) -> FormSubspace:
    """Rebuild a space from a recipe record (used by the CLI)."""
    kind = recipe["kind"]
    params = recipe["params"]
    if kind == "rank2":
        return rank2_space(Field.from_json_dict(params["field"]), params["n"])
    if kind == "even_rank":
        return even_rank_space(
            Field.from_json_dict(params["field"]), params["n"], params["r"]
        )
    if kind == "trace2x2":
        return trace_form_space(Field.from_json_dict(params["field"]), params["degree"])
    if kind == "alt_full":
        return alt_full_space(Field.from_json_dict(params["field"]))
    if kind == "restrict_scalars":
        inner = params.get("inner")
        if inner is None:
            raise ValueError("restriction recipe lacks the inner construction")
        return restrict_scalars(
            build_from_recipe(inner), Field.from_json_dict(params["field"])
        )
    raise ValueError(f"unknown recipe kind {kind!r}")
