"""Slow, independent reference computations.

Everything here works element-by-element with scalar FieldElement
arithmetic and itertools enumeration, deliberately avoiding the numpy
batch kernels it is used to cross-check.
"""

from itertools import product

from symforms import FieldElement, FormSubspace, SymForm


def oracle_rank(rows) -> int:
    """Gaussian elimination on lists of FieldElement, no numpy."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c].code), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c].code:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def form_rank(f: SymForm) -> int:
    n = f.n
    return oracle_rank([[f.gram[i, j] for j in range(n)] for i in range(n)])


def combo_entries(M: FormSubspace, coeffs):
    """Gram of sum(c_j * basis_j) as FieldElement rows."""
    field = M.field
    n = M.n
    total = [[field.zero for _ in range(n)] for _ in range(n)]
    for c, f in zip(coeffs, M.basis):
        if c.code:
            for i in range(n):
                for j in range(n):
                    total[i][j] = total[i][j] + c * f.gram[i, j]
    return total


def oracle_spectrum(M: FormSubspace) -> dict:
    """Rank counts over all q^d - 1 nonzero elements, one at a time."""
    field = M.field
    elems = list(field.elements())
    counts: dict[int, int] = {}
    for coeffs in product(elems, repeat=M.dim):
        if all(c.code == 0 for c in coeffs):
            continue
        r = oracle_rank(combo_entries(M, coeffs))
        counts[r] = counts.get(r, 0) + 1
    return counts


def oracle_evaluate(f: SymForm, u, v) -> FieldElement:
    field = f.field
    acc = field.zero
    for i, ui in enumerate(u):
        for j, vj in enumerate(v):
            acc = acc + ui * f.gram[i, j] * vj
    return acc


def count_2dim_subspaces_gf2(n: int) -> int:
    """Exhaustive count of 2-dimensional subspaces of GF(2)^n.

    Vectors are bitmasks; a plane is the frozenset of its three nonzero
    vectors.
    """
    seen = set()
    N = 1 << n
    for v1 in range(1, N):
        for v2 in range(v1 + 1, N):
            seen.add(frozenset((v1, v2, v1 ^ v2)))
    return len(seen)
