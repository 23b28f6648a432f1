"""Subspaces of Symm(K^n) with canonical coordinates and exact sweeps.

A subspace M is canonicalised through the upper-triangle vectorisation
of its Gram matrices: coordinates are ordered lexicographically by
(i, j) with i <= j, and the basis is the RREF of the spanning set in
those coordinates.  Equality of subspaces is therefore structural.

Enumeration-based operations (rank spectra, common radicals, the
brute-force isotropic sweep) walk scaling representatives whose first
nonzero coordinate is 1, in increasing coordinate-code order, and may
partition their range across worker processes; results are merged in
range order so the outcome is independent of the worker count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import CapExceeded, NormalFormError
from .field import Field, FieldElement, sqrt_char2
from .forms import SymForm
from .linalg import (
    Matrix,
    VectorSubspace,
    batch_rank,
    complete_basis,
    congruence,
    kernel_basis,
    mat_vec,
    vector_codes,
)
from .linalg import _row_reduce
from .parallel import DEFAULT_CHUNK, chunk_ranges, run_tasks
from .reports import PASS, Hypothesis, VerificationReport

__all__ = [
    "FormSubspace",
    "RankSpectrum",
    "span_canonicalize",
    "member",
    "enumerate_nonzero",
    "rank_spectrum",
    "v_of_m",
    "alt_subspace",
    "kernel_at_point",
    "common_radical",
    "normal_form_basis",
    "projective_vectors",
    "save_space",
    "load_space",
    "space_to_json_dict",
    "space_from_json_dict",
    "DEFAULT_ENUMERATION_CAP",
]

DEFAULT_ENUMERATION_CAP = 1 << 24


def _upper_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n)


def vectorize_form(f: SymForm) -> np.ndarray:
    """Upper-triangle coordinates of the Gram matrix, (i, j) lex order."""
    iu = _upper_indices(f.n)
    return f.gram._arr[iu]


def _gram_from_vec(vec: np.ndarray, n: int, field: Field) -> np.ndarray:
    iu = _upper_indices(n)
    G = np.zeros((n, n), dtype=field.code_dtype)
    G[iu] = vec
    G[(iu[1], iu[0])] = vec
    return G


def _combo_grams(coeffs: np.ndarray, basis: np.ndarray, field: Field) -> np.ndarray:
    """Gram stacks for coordinate rows: out[m] = sum_j coeffs[m, j] * basis[j]."""
    ops = field.ops()
    N = coeffs.shape[0]
    d, n, _ = basis.shape
    out = np.zeros((N, n, n), dtype=field.code_dtype)
    for j in range(d):
        cj = coeffs[:, j]
        if cj.any():
            out = ops.add(out, ops.mul(cj[:, None, None], basis[j][None, :, :]))
    return out


class FormSubspace:
    """A canonicalised subspace of Symm(K^n).

    Construct via :func:`span_canonicalize`.  ``recipe`` is an optional
    JSON-safe record of the construction that produced the space; the
    counting verifier uses it to pick a closed form.
    """

    __slots__ = ("field", "n", "_coords", "_pivots", "basis", "recipe", "_basis_arrs")

    def __init__(self, field: Field, n: int, coords: np.ndarray, recipe: Optional[dict] = None):
        coords = np.ascontiguousarray(coords.astype(field.code_dtype))
        coords.flags.writeable = False
        pivots = []
        for row in coords:
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                raise ValueError("canonical basis cannot contain the zero form")
            pivots.append(int(nz[0]))
        basis = tuple(
            SymForm(Matrix(field, _gram_from_vec(row, n, field))) for row in coords
        )
        arrs = (
            np.stack([f.gram._arr for f in basis])
            if basis
            else np.zeros((0, n, n), dtype=field.code_dtype)
        )
        arrs.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_coords", coords)
        object.__setattr__(self, "_pivots", tuple(pivots))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "recipe", recipe)
        object.__setattr__(self, "_basis_arrs", arrs)

    def __setattr__(self, name, value):
        raise AttributeError("FormSubspace is immutable")

    @classmethod
    def zero(cls, field: Field, n: int) -> "FormSubspace":
        D = n * (n + 1) // 2
        return cls(field, n, np.zeros((0, D), dtype=field.code_dtype))

    @property
    def dim(self) -> int:
        return self._coords.shape[0]

    def coordinate_basis(self) -> np.ndarray:
        return self._coords.copy()

    def form_from_coords(self, coords) -> SymForm:
        c = vector_codes(self.field, coords, self.dim)
        gram = _combo_grams(c[None, :], self._basis_arrs, self.field)[0]
        return SymForm(Matrix(self.field, gram))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FormSubspace)
            and self.field == other.field
            and self.n == other.n
            and bool(np.array_equal(self._coords, other._coords))
        )

    def __hash__(self):
        return hash((self.field, self.n, self._coords.tobytes()))

    def __repr__(self) -> str:
        return f"FormSubspace(n={self.n}, dim={self.dim}, field={self.field!r})"

    def __getstate__(self):
        return (self.field, self.n, self._coords.tobytes(), self._coords.shape, self.recipe)

    def __setstate__(self, state):
        field, n, raw, shape, recipe = state
        coords = np.frombuffer(raw, dtype=field.code_dtype).reshape(shape).copy()
        self.__init__(field, n, coords, recipe)


def span_canonicalize(
    forms: Sequence[SymForm],
    field: Optional[Field] = None,
    n: Optional[int] = None,
    recipe: Optional[dict] = None,
) -> FormSubspace:
    """Canonical subspace spanned by the given forms.

    Dependencies are discarded; the result's basis is the RREF of the
    vectorised input, so any spanning set of the same subspace produces
    the identical object.
    """
    forms = list(forms)
    if forms:
        field = forms[0].field
        n = forms[0].n
        for f in forms:
            if f.field != field or f.n != n:
                raise ValueError("all forms must share the same field and dimension")
    elif field is None or n is None:
        raise ValueError("an empty span needs an explicit field and dimension")
    D = n * (n + 1) // 2
    if forms:
        vecs = np.stack([vectorize_form(f) for f in forms])
    else:
        vecs = np.zeros((0, D), dtype=field.code_dtype)
    R, pivots = _row_reduce(vecs, field)
    return FormSubspace(field, n, R[: len(pivots)], recipe)


def member(M: FormSubspace, f: SymForm):
    """Coordinates of f in M's canonical basis, or None when f is outside M."""
    if f.field != M.field or f.n != M.n:
        raise ValueError("form does not live in the same space")
    vec = vectorize_form(f).copy()
    ops = M.field.ops()
    coords = []
    for i, p in enumerate(M._pivots):
        c = int(vec[p])
        coords.append(c)
        if c:
            vec = ops.sub(vec, ops.mul(np.array(c), M._coords[i]))
    if vec.any():
        return None
    return tuple(FieldElement(M.field, c) for c in coords)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _coords_from_indices(ms: np.ndarray, q: int, d: int, dtype) -> np.ndarray:
    """Base-q digits of the given coordinate codes, index 0 least significant."""
    out = np.empty((ms.shape[0], d), dtype=dtype)
    t = ms.astype(np.int64).copy()
    for j in range(d):
        out[:, j] = t % q
        t //= q
    return out


def projective_count(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1)


def _projective_reps(q: int, d: int, dtype) -> np.ndarray:
    """Scaling representatives (first nonzero coordinate 1), ordered by code."""
    blocks = []
    for lead in range(d):
        tail = d - lead - 1
        count = q**tail
        arr = np.zeros((count, d), dtype=dtype)
        arr[:, lead] = 1
        if tail:
            arr[:, lead + 1 :] = _coords_from_indices(
                np.arange(count), q, tail, dtype
            )
        blocks.append(arr)
    A = np.vstack(blocks)
    weights = (np.int64(q) ** np.arange(d)).astype(np.int64)
    m = A.astype(np.int64) @ weights
    return A[np.argsort(m, kind="stable")]


def enumerate_nonzero(
    M: FormSubspace,
    cap: int = DEFAULT_ENUMERATION_CAP,
    projective: bool = False,
) -> Iterator[tuple[tuple[FieldElement, ...], SymForm]]:
    """Yield each nonzero element of M exactly once.

    The full sweep walks all q^d - 1 coordinate vectors in increasing
    coordinate code; the projective sweep yields one representative per
    scalar line, the one whose first nonzero coordinate is 1.
    """
    q, d = M.field.q, M.dim
    if d == 0:
        return
    if projective:
        total = projective_count(q, d)
        if total > cap:
            raise CapExceeded(total, cap, "projective enumeration")
        reps = _projective_reps(q, d, M.field.code_dtype)
        for row in reps:
            coords = tuple(FieldElement(M.field, int(c)) for c in row)
            yield coords, M.form_from_coords(row)
    else:
        total = q**d
        if total > cap:
            raise CapExceeded(total, cap, "enumeration")
        for lo, hi in chunk_ranges(total - 1, DEFAULT_CHUNK):
            ms = np.arange(lo + 1, hi + 1)
            rows = _coords_from_indices(ms, q, d, M.field.code_dtype)
            for row in rows:
                coords = tuple(FieldElement(M.field, int(c)) for c in row)
                yield coords, M.form_from_coords(row)


def projective_vectors(field: Field, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """One representative per projective point of K^n, ordered by code."""
    total = projective_count(field.q, n)
    if total > cap:
        raise CapExceeded(total, cap, "projective point sweep")
    return _projective_reps(field.q, n, field.code_dtype)


# ---------------------------------------------------------------------------
# Rank spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankSpectrum:
    """Counts of nonzero elements by rank; total is q^d - 1."""

    counts: dict
    total: int

    def ranks(self) -> list[int]:
        return sorted(self.counts)

    @property
    def max_rank(self) -> int:
        return max(self.counts) if self.counts else 0

    @property
    def min_rank(self) -> int:
        return min(self.counts) if self.counts else 0

    def get(self, r: int) -> int:
        return self.counts.get(r, 0)


def _spectrum_task(task) -> np.ndarray:
    M, reps = task
    grams = _combo_grams(reps, M._basis_arrs, M.field)
    ranks = batch_rank(grams, M.field)
    return np.bincount(ranks, minlength=M.n + 1)


def rank_spectrum(
    M: FormSubspace,
    cap: int = DEFAULT_ENUMERATION_CAP,
    jobs: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> RankSpectrum:
    """Exact rank distribution of the nonzero elements of M.

    Ranks are computed on scaling representatives and counts multiplied
    by q - 1, which is valid because rank is constant on scalar lines.
    """
    q, d = M.field.q, M.dim
    if d == 0:
        return RankSpectrum({}, 0)
    nreps = projective_count(q, d)
    if nreps > cap:
        raise CapExceeded(nreps, cap, "projective enumeration")
    reps = _projective_reps(q, d, M.field.code_dtype)
    tasks = [(M, reps[lo:hi]) for lo, hi in chunk_ranges(nreps, chunk)]
    hists = run_tasks(_spectrum_task, tasks, jobs)
    hist = np.sum(hists, axis=0)
    counts = {
        int(r): int(hist[r]) * (q - 1) for r in range(1, len(hist)) if hist[r]
    }
    return RankSpectrum(counts, q**d - 1)


# ---------------------------------------------------------------------------
# V(M), the alternating part, and kernels at a point
# ---------------------------------------------------------------------------


def _quadratic_values(V: np.ndarray, gram: np.ndarray, field: Field) -> np.ndarray:
    """f(v, v) for every row v of V, by full bilinear evaluation."""
    ops = field.ops()
    n = gram.shape[0]
    VG = np.zeros_like(V)
    for k0 in range(n):
        col = V[:, k0]
        if col.any():
            VG = ops.add(VG, ops.mul(col[:, None], gram[k0][None, :]))
    acc = np.zeros(V.shape[0], dtype=field.code_dtype)
    for i in range(n):
        acc = ops.add(acc, ops.mul(V[:, i], VG[:, i]))
    return acc


def _vm_search_task(task) -> np.ndarray:
    M, lo, hi = task
    q, n = M.field.q, M.n
    V = _coords_from_indices(np.arange(lo, hi), q, n, M.field.code_dtype)
    keep = np.ones(V.shape[0], dtype=bool)
    for j in range(M.dim):
        keep &= _quadratic_values(V, M._basis_arrs[j], M.field) == 0
    return V[keep]


def v_of_m(
    M: FormSubspace,
    cap: int = DEFAULT_ENUMERATION_CAP,
    method: str = "auto",
    jobs: int = 1,
) -> VectorSubspace:
    """The common isotropic points {v : f(v, v) = 0 for all f in M}.

    method "closed" (characteristic 2 only) exploits that
    v -> sqrt(f(v, v)) is linear, so the answer is the kernel of the
    d x n matrix of square roots of the Gram diagonals.  method
    "search" filters all of K^n and spans the survivors; in
    characteristic 2 both methods agree, and the sweep is the
    independent cross-check.
    """
    field, n, d = M.field, M.n, M.dim
    if method == "auto":
        method = "closed" if field.p == 2 else "search"
    if method == "closed":
        if field.p != 2:
            raise ValueError("the closed form needs characteristic 2")
        T = np.zeros((d, n), dtype=field.code_dtype)
        for j in range(d):
            for i in range(n):
                a = FieldElement(field, int(M._basis_arrs[j, i, i]))
                T[j, i] = sqrt_char2(a).code
        return kernel_basis(Matrix(field, T))
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    total = field.q**n
    if total > cap:
        raise CapExceeded(total, cap, "vector sweep")
    tasks = [(M, lo, hi) for lo, hi in chunk_ranges(total, DEFAULT_CHUNK)]
    kept = run_tasks(_vm_search_task, tasks, jobs)
    rows = np.vstack(kept) if kept else np.zeros((0, n), dtype=field.code_dtype)
    return VectorSubspace.from_vectors(field, n, rows)


def alt_subspace(M: FormSubspace) -> FormSubspace:
    """M intersected with the alternating forms.

    In characteristic 2 this solves "all Gram diagonals vanish" for the
    coordinates; in odd characteristic the intersection is zero because
    a symmetric alternating form is the zero form.
    """
    field, n, d = M.field, M.n, M.dim
    if d == 0 or field.p != 2:
        return FormSubspace.zero(field, n)
    A = np.zeros((n, d), dtype=field.code_dtype)
    for j in range(d):
        A[:, j] = M._basis_arrs[j].diagonal()
    coeffs = kernel_basis(Matrix(field, A))
    forms = [M.form_from_coords(row) for row in coeffs._basis]
    return span_canonicalize(forms, field=field, n=n)


def kernel_at_point(M: FormSubspace, u) -> FormSubspace:
    """{f in M : u lies in the radical of f}, for a nonzero point u."""
    field, n, d = M.field, M.n, M.dim
    uc = vector_codes(field, u, n)
    if not uc.any():
        raise ValueError("the base point must be nonzero")
    if d == 0:
        return FormSubspace.zero(field, n)
    E = np.zeros((n, d), dtype=field.code_dtype)
    for j in range(d):
        E[:, j] = mat_vec(Matrix(field, M._basis_arrs[j]), uc)
    coeffs = kernel_basis(Matrix(field, E))
    forms = [M.form_from_coords(row) for row in coeffs._basis]
    return span_canonicalize(forms, field=field, n=n)


# ---------------------------------------------------------------------------
# Common radicals
# ---------------------------------------------------------------------------


def _radical_check_task(task):
    """(all_match, index of first mismatching representative or None)."""
    M, reps, rank0, rad_basis = task
    grams = _combo_grams(reps, M._basis_arrs, M.field)
    ranks = batch_rank(grams, M.field)
    ops = M.field.ops()
    n = M.n
    prod = np.zeros((reps.shape[0], n, rad_basis.shape[0]), dtype=M.field.code_dtype)
    for k0 in range(n):
        col = grams[:, :, k0]
        if col.any():
            prod = ops.add(prod, ops.mul(col[:, :, None], rad_basis[:, k0][None, None, :]))
    ok = (ranks == rank0) & ~prod.reshape(reps.shape[0], -1).any(axis=1)
    if ok.all():
        return True, None
    return False, int(np.argmin(ok))


def common_radical(
    M: FormSubspace,
    cap: int = DEFAULT_ENUMERATION_CAP,
    jobs: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> Optional[VectorSubspace]:
    """The shared radical of all nonzero elements of M, if one exists.

    Radical equality is checked against the first representative: every
    element must have the same rank and must annihilate that radical,
    which pins the kernels to being identical.
    """
    q, d = M.field.q, M.dim
    if d == 0:
        raise ValueError("the zero subspace has no elements to compare")
    nreps = projective_count(q, d)
    if nreps > cap:
        raise CapExceeded(nreps, cap, "projective enumeration")
    reps = _projective_reps(q, d, M.field.code_dtype)
    first = M.form_from_coords(reps[0])
    rad = kernel_basis(first.gram)
    rank0 = M.n - rad.dim
    rad_rows = rad._basis if rad.dim else np.zeros((0, M.n), dtype=M.field.code_dtype)
    tasks = [
        (M, reps[lo:hi], rank0, rad_rows) for lo, hi in chunk_ranges(nreps, chunk)
    ]
    for ok, _bad in run_tasks(_radical_check_task, tasks, jobs):
        if not ok:
            return None
    return rad


# ---------------------------------------------------------------------------
# Block normal form from a witness radical
# ---------------------------------------------------------------------------


def normal_form_basis(
    M: FormSubspace,
    r: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    jobs: int = 1,
) -> tuple[Matrix, VerificationReport]:
    """Invertible X putting every Gram of M into zero-leading-block shape.

    Requires every nonzero element of M to have rank at most r < n
    (checked by enumeration) and some element of rank exactly r.  X is
    built by completing the radical R of the first enumerated rank-r
    element; for every basis form, the leading (n-r) x (n-r) block of
    X S X^T must vanish, i.e. R is totally isotropic for all of M.
    A verification failure raises :class:`NormalFormError`; with
    |K| >= r + 1 that would contradict the block theorem, so it is
    never silently absorbed.
    """
    field, n, d = M.field, M.n, M.dim
    q = field.q
    if d == 0:
        raise ValueError("the zero subspace has no rank-r witness")
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    nreps = projective_count(q, d)
    if nreps > cap:
        raise CapExceeded(nreps, cap, "projective enumeration")
    reps = _projective_reps(q, d, field.code_dtype)
    tasks = [(M, reps[lo:hi]) for lo, hi in chunk_ranges(nreps, DEFAULT_CHUNK)]
    ranks = np.concatenate(
        [batch_rank(_combo_grams(t[1], M._basis_arrs, field), field) for t in tasks]
    )
    if int(ranks.max()) > r:
        bad = int(np.argmax(ranks > r))
        raise ValueError(
            f"rank bound violated: representative {reps[bad].tolist()} has rank "
            f"{int(ranks[bad])} > {r}"
        )
    hit = np.nonzero(ranks == r)[0]
    if hit.size == 0:
        raise ValueError(f"no element of rank exactly {r} in the subspace")
    # First element of rank r in full enumeration order: minimise the
    # coordinate code over all scalar multiples of the rank-r lines.
    ops = field.ops()
    scalars = np.arange(1, q, dtype=field.code_dtype)
    lines = reps[hit]
    scaled = ops.mul(scalars[:, None, None], lines[None, :, :])
    weights = (np.int64(q) ** np.arange(d)).astype(np.int64)
    codes = scaled.astype(np.int64) @ weights
    s_i, l_i = np.unravel_index(np.argmin(codes), codes.shape)
    witness_coords = scaled[s_i, l_i]
    witness = M.form_from_coords(witness_coords)
    R = kernel_basis(witness.gram)
    X = complete_basis(R)
    blocks_ok = []
    for f in M.basis:
        Y = congruence(X, f.gram)
        blocks_ok.append(not Y._arr[: n - r, : n - r].any())
    if not all(blocks_ok):
        hint = "" if q >= r + 1 else f" (hypothesis |K| >= r + 1 fails: q = {q})"
        raise NormalFormError(
            f"leading {n - r} x {n - r} block is nonzero for basis forms "
            f"{[i for i, ok in enumerate(blocks_ok) if not ok]}{hint}"
        )
    report = VerificationReport(
        theorem="normal-form",
        verdict=PASS,
        hypotheses=[
            Hypothesis("all ranks <= r", True, int(ranks.max())),
            Hypothesis("|K| >= r + 1", q >= r + 1, q),
        ],
        quantities={
            "n": n,
            "r": r,
            "d": d,
            "q": q,
            "witness_coords": [int(c) for c in witness_coords],
            "zero_block_size": n - r,
            "basis_blocks_ok": blocks_ok,
        },
    )
    return X, report


# ---------------------------------------------------------------------------
# Space files
# ---------------------------------------------------------------------------


def space_to_json_dict(M: FormSubspace) -> dict:
    d: dict = {
        "field": M.field.to_json_dict(),
        "n": M.n,
        "basis": [f.to_json_dict() for f in M.basis],
    }
    if M.recipe is not None:
        d["recipe"] = M.recipe
    return d


def space_from_json_dict(d: dict) -> tuple[FormSubspace, bool]:
    """Rebuild a subspace from its JSON form.

    Returns (space, was_canonical); symmetry violations are rejected,
    not repaired, and the input basis is always re-canonicalised.
    """
    field = Field.from_json_dict(d["field"])
    n = int(d["n"])
    forms = [SymForm.from_json_dict(field, fd) for fd in d["basis"]]
    for f in forms:
        if f.n != n:
            raise ValueError("basis form dimension disagrees with the space")
    space = span_canonicalize(forms, field=field, n=n, recipe=d.get("recipe"))
    if len(forms) == space.dim:
        given = (
            np.stack([vectorize_form(f) for f in forms])
            if forms
            else np.zeros((0, n * (n + 1) // 2), dtype=field.code_dtype)
        )
        was_canonical = bool(np.array_equal(given, space._coords))
    else:
        was_canonical = False
    return space, was_canonical


def save_space(M: FormSubspace, path: Union[str, Path]) -> None:
    Path(path).write_text(
        json.dumps(space_to_json_dict(M), sort_keys=True, indent=2) + "\n"
    )


def load_space(path: Union[str, Path]) -> tuple[FormSubspace, bool]:
    return space_from_json_dict(json.loads(Path(path).read_text()))
