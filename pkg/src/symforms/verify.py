"""Theorem verifiers producing structured, machine-readable reports.

Each checker measures its hypotheses before asserting anything: a
report comes back ``hypotheses-not-met`` when the premises fail,
``fail`` with a concrete witness when a measured quantity violates the
asserted bound, and ``pass`` otherwise.  Counting and inequality
checks use exact integer and rational arithmetic throughout; no
verdict ever depends on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import CapExceeded
from .field import Field, make_field
from .forms import SymForm
from .linalg import Matrix, VectorSubspace, batch_rank, kernel_basis, stacked_rank
from .parallel import DEFAULT_CHUNK, chunk_ranges, run_tasks
from .reports import (
    FAIL,
    HYPOTHESES_NOT_MET,
    PASS,
    Hypothesis,
    VerificationReport,
)
from .spaces import (
    DEFAULT_ENUMERATION_CAP,
    FormSubspace,
    _combo_grams,
    _gram_from_vec,
    _projective_reps,
    alt_subspace,
    common_radical,
    kernel_at_point,
    member,
    projective_count,
    projective_vectors,
    rank_spectrum,
    span_canonicalize,
    space_to_json_dict,
    v_of_m,
)

__all__ = [
    "check_odd_rank_bound",
    "check_vm_bound",
    "check_rank_bound",
    "check_common_radicals",
    "check_two_rank_bound",
    "spread_decomposition",
    "SpreadComponent",
    "SpreadDecomposition",
    "gaussian_binomial",
    "check_inequalities",
    "check_radical_threshold",
    "count_rank_elements",
    "random_subspace_search",
    "SearchParams",
    "PREDICATES",
]

_MASK64 = (1 << 64) - 1


def _space_witness(M: FormSubspace) -> dict:
    return {"space": space_to_json_dict(M)}


# ---------------------------------------------------------------------------
# Dimension bounds
# ---------------------------------------------------------------------------


def check_odd_rank_bound(
    M: FormSubspace, cap: int = DEFAULT_ENUMERATION_CAP, jobs: int = 1
) -> VerificationReport:
    """All nonzero ranks odd forces dim M <= r(r+1)/2 and, over a finite
    field, dim M <= r, where r is the maximum rank."""
    spec = rank_spectrum(M, cap, jobs)
    d = M.dim
    odd = d > 0 and all(r % 2 == 1 for r in spec.counts)
    hyps = [
        Hypothesis("subspace is nonzero", d > 0, d),
        Hypothesis("all nonzero ranks odd", odd, spec.ranks()),
    ]
    quantities = {"n": M.n, "q": M.field.q, "d": d, "ranks": spec.ranks()}
    if not (d > 0 and odd):
        return VerificationReport("odd-rank", HYPOTHESES_NOT_MET, hyps, quantities)
    r = spec.max_rank
    quantities.update(
        {"r": r, "bound_r": r, "bound_triangular": r * (r + 1) // 2}
    )
    ok = d <= r and d <= r * (r + 1) // 2
    if ok:
        return VerificationReport("odd-rank", PASS, hyps, quantities)
    return VerificationReport(
        "odd-rank", FAIL, hyps, quantities, [_space_witness(M)]
    )


def check_vm_bound(
    M: FormSubspace, cap: int = DEFAULT_ENUMERATION_CAP, jobs: int = 1
) -> VerificationReport:
    """With no nonzero alternating elements, the common isotropic points
    satisfy dim V(M) <= n - d, with equality over finite (perfect) fields."""
    char2 = M.field.p == 2
    hyps = [Hypothesis("characteristic 2", char2, M.field.p)]
    quantities = {"n": M.n, "q": M.field.q, "d": M.dim}
    if not char2:
        return VerificationReport("vm", HYPOTHESES_NOT_MET, hyps, quantities)
    alt = alt_subspace(M)
    hyps.append(Hypothesis("no nonzero alternating element", alt.dim == 0, alt.dim))
    if alt.dim != 0:
        return VerificationReport("vm", HYPOTHESES_NOT_MET, hyps, quantities)
    vm = v_of_m(M, cap, method="closed")
    quantities["dim_vm"] = vm.dim
    quantities["expected"] = M.n - M.dim
    if vm.dim == M.n - M.dim:
        return VerificationReport("vm", PASS, hyps, quantities)
    return VerificationReport("vm", FAIL, hyps, quantities, [_space_witness(M)])


def check_rank_bound(
    M: FormSubspace, cap: int = DEFAULT_ENUMERATION_CAP, jobs: int = 1
) -> VerificationReport:
    """In characteristic 2 with no alternating part and ranks at most r,
    dim M <= r once |K| >= r + 1 (needed only when r < n)."""
    spec = rank_spectrum(M, cap, jobs)
    d, n, q = M.dim, M.n, M.field.q
    char2 = M.field.p == 2
    hyps = [
        Hypothesis("subspace is nonzero", d > 0, d),
        Hypothesis("characteristic 2", char2, M.field.p),
    ]
    quantities = {"n": n, "q": q, "d": d, "ranks": spec.ranks()}
    alt = alt_subspace(M)
    hyps.append(Hypothesis("no nonzero alternating element", alt.dim == 0, alt.dim))
    if not (d > 0 and char2 and alt.dim == 0):
        return VerificationReport("rank-bound", HYPOTHESES_NOT_MET, hyps, quantities)
    r = spec.max_rank
    quantities["r"] = r
    if r < n:
        hyps.append(Hypothesis("|K| >= r + 1", q >= r + 1, q))
        if q < r + 1:
            return VerificationReport(
                "rank-bound", HYPOTHESES_NOT_MET, hyps, quantities
            )
    else:
        # The bound holds for every field once r = n.
        hyps.append(Hypothesis("|K| >= r + 1 (waived, r = n)", True, q))
    if d <= r:
        return VerificationReport("rank-bound", PASS, hyps, quantities)
    return VerificationReport(
        "rank-bound", FAIL, hyps, quantities, [_space_witness(M)]
    )


def check_common_radicals(
    M: FormSubspace, cap: int = DEFAULT_ENUMERATION_CAP, jobs: int = 1
) -> VerificationReport:
    """An r-dimensional constant rank r subspace over a big enough
    characteristic-2 field has one shared radical, equal to V(M)."""
    spec = rank_spectrum(M, cap, jobs)
    d, n, q = M.dim, M.n, M.field.q
    char2 = M.field.p == 2
    constant = len(spec.counts) == 1
    r = spec.max_rank
    hyps = [
        Hypothesis("characteristic 2", char2, M.field.p),
        Hypothesis("constant rank", constant, spec.ranks()),
        Hypothesis("dim M equals the rank", constant and d == r, d),
        Hypothesis("|K| >= r + 1", q >= r + 1, q),
    ]
    quantities = {"n": n, "q": q, "d": d, "ranks": spec.ranks()}
    shared = common_radical(M, cap, jobs) if d > 0 else None
    quantities["common_radical_found"] = shared is not None
    if shared is not None:
        quantities["common_radical_dim"] = shared.dim
    if not all(h.holds for h in hyps):
        return VerificationReport("radicals", HYPOTHESES_NOT_MET, hyps, quantities)
    vm = v_of_m(M, cap, method="closed")
    quantities["dim_vm"] = vm.dim
    if shared is not None and shared == vm:
        return VerificationReport("radicals", PASS, hyps, quantities)
    return VerificationReport(
        "radicals", FAIL, hyps, quantities, [_space_witness(M)]
    )


def check_two_rank_bound(
    M: FormSubspace, cap: int = DEFAULT_ENUMERATION_CAP, jobs: int = 1
) -> VerificationReport:
    """Nonzero ranks confined to {r, n} with r odd, n even, 0 < r < n
    force dim M <= n + r.  The sharper conjectured bound 2n - r is
    recorded for information only."""
    spec = rank_spectrum(M, cap, jobs)
    d, n, q = M.dim, M.n, M.field.q
    ranks = spec.ranks()
    r: Optional[int] = None
    if len(ranks) == 2 and ranks[1] == n:
        r = ranks[0]
    elif len(ranks) == 1 and ranks[0] != n:
        r = ranks[0]
    shape_ok = r is not None and 0 < r < n
    hyps = [
        Hypothesis("rank set is {r, n} with 0 < r < n", shape_ok, ranks),
        Hypothesis("r odd", shape_ok and r % 2 == 1, r),
        Hypothesis("n even", n % 2 == 0, n),
    ]
    quantities = {"n": n, "q": q, "d": d, "ranks": ranks}
    if not all(h.holds for h in hyps):
        return VerificationReport("two-rank", HYPOTHESES_NOT_MET, hyps, quantities)
    quantities.update(
        {
            "r": r,
            "bound": n + r,
            "conjectured_bound": 2 * n - r,
            "conjecture_satisfied": d <= 2 * n - r,
        }
    )
    if d <= n + r:
        return VerificationReport("two-rank", PASS, hyps, quantities)
    return VerificationReport(
        "two-rank", FAIL, hyps, quantities, [_space_witness(M)]
    )


# ---------------------------------------------------------------------------
# Spread decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpreadComponent:
    point: tuple
    space: FormSubspace
    radical: Optional[VectorSubspace]


@dataclass(frozen=True)
class SpreadDecomposition:
    components: list
    alt_part: FormSubspace
    chosen_split: Optional[tuple]


def _kernel_sweep_task(task):
    M, pts = task
    out = []
    for u in pts:
        out.append((tuple(int(c) for c in u), kernel_at_point(M, u)))
    return out


def spread_decomposition(
    M: FormSubspace, cap: int = DEFAULT_ENUMERATION_CAP, jobs: int = 1
) -> tuple[SpreadDecomposition, VerificationReport]:
    """Extract the point kernels K_u, their radicals, and the direct-sum
    splits of a two-rank space of dimension 3r on a 2r-dimensional space.

    The sweep runs even when the premises fail, so exploratory runs
    still report what holds; the verdict is hypotheses-not-met in that
    case rather than a silent pass.
    """
    field, n, d, q = M.field, M.n, M.dim, M.field.q
    r = n // 2
    spec = rank_spectrum(M, cap, jobs)
    ranks = set(spec.counts)
    hyps = [
        Hypothesis("characteristic 2", field.p == 2, field.p),
        Hypothesis("n = 2r even", n % 2 == 0, n),
        Hypothesis("r odd", r % 2 == 1, r),
        Hypothesis("dim M = 3r", d == 3 * r, d),
        Hypothesis("rank set within {r, n}", ranks <= {r, n}, sorted(ranks)),
        Hypothesis("|K| >= r + 1", q >= r + 1, q),
    ]
    pres_met = all(h.holds for h in hyps)
    checks: dict[str, bool] = {}
    quantities: dict = {"n": n, "q": q, "d": d, "r": r, "ranks": sorted(ranks)}
    witnesses: list = []

    points = projective_vectors(field, n, cap)
    tasks = [
        (M, points[lo:hi]) for lo, hi in chunk_ranges(points.shape[0], 256)
    ]
    pairs: list[tuple[tuple, FormSubspace]] = []
    for chunk in run_tasks(_kernel_sweep_task, tasks, jobs):
        pairs.extend(chunk)

    checks["every point kernel has dimension r"] = all(
        K.dim == r for _, K in pairs
    )
    # Constant rank r inside every K_u, batched over all points at once.
    if checks["every point kernel has dimension r"] and r >= 1:
        reps = _projective_reps(q, r, field.code_dtype)
        gram_blocks = [
            _combo_grams(reps, K._basis_arrs, field) for _, K in pairs
        ]
        all_ranks = batch_rank(np.concatenate(gram_blocks), field)
        checks["every point kernel has constant rank r"] = bool(
            (all_ranks == r).all()
        )
    else:
        checks["every point kernel has constant rank r"] = False

    seen: dict[bytes, tuple] = {}
    for point, K in pairs:
        key = K._coords.tobytes()
        if key not in seen:
            seen[key] = (point, K)
    distinct = list(seen.values())
    t = len(distinct)
    quantities["num_components"] = t
    quantities["expected_components"] = q**r + 1
    checks["component count is q^r + 1"] = t == q**r + 1

    pairwise_spaces = True
    for i in range(t):
        for j in range(i + 1, t):
            if (
                stacked_rank(field, distinct[i][1]._coords, distinct[j][1]._coords)
                != distinct[i][1].dim + distinct[j][1].dim
            ):
                pairwise_spaces = False
                break
        if not pairwise_spaces:
            break
    checks["distinct kernels intersect trivially"] = pairwise_spaces

    components = []
    radicals_ok = True
    for point, K in distinct:
        rad = common_radical(K, cap) if K.dim else None
        if rad is None or rad.dim != n - r:
            radicals_ok = False
        components.append(SpreadComponent(point, K, rad))
    checks["each kernel has a common radical of dimension r"] = radicals_ok

    pairwise_rads = radicals_ok
    if radicals_ok:
        for i in range(t):
            for j in range(i + 1, t):
                a, b = components[i].radical, components[j].radical
                if stacked_rank(field, a._basis, b._basis) != a.dim + b.dim:
                    pairwise_rads = False
                    break
            if not pairwise_rads:
                break
    checks["radicals pairwise intersect trivially"] = pairwise_rads
    covered = t * (q**r - 1) if radicals_ok else 0
    quantities["covered_nonzero_vectors"] = covered
    quantities["total_nonzero_vectors"] = q**n - 1
    checks["radicals cover V"] = pairwise_rads and covered == q**n - 1

    alt_part = alt_subspace(M)
    quantities["dim_alt_part"] = alt_part.dim
    checks["alternating part has dimension r"] = alt_part.dim == r
    if alt_part.dim:
        alt_spec = rank_spectrum(alt_part, cap)
        quantities["alt_part_ranks"] = alt_spec.ranks()
        checks["alternating part has constant rank n"] = alt_spec.ranks() == [n]
    else:
        checks["alternating part has constant rank n"] = False

    chosen_split = None
    if t >= 2:
        N, N1 = distinct[0][1], distinct[1][1]
        D = span_canonicalize(list(N.basis) + list(N1.basis), field=field, n=n)
        checks["N + N1 is a direct sum of dimension n"] = D.dim == N.dim + N1.dim == n
        alt_D = alt_subspace(D)
        checks["N + N1 has no nonzero alternating element"] = alt_D.dim == 0
        if D.dim and projective_count(q, D.dim) <= cap:
            reps_D = _projective_reps(q, D.dim, field.code_dtype)
            ranks_D = batch_rank(
                _combo_grams(reps_D, D._basis_arrs, field), field
            )
            in_pair = True
            for idx in np.nonzero(ranks_D == r)[0]:
                f = D.form_from_coords(reps_D[idx])
                if member(N, f) is None and member(N1, f) is None:
                    in_pair = False
                    witnesses.append(
                        {"rank_r_outside_pair": f.to_json_dict()}
                    )
                    break
            checks["rank-r elements of N + N1 lie in N or N1"] = in_pair
            checks["N + N1 ranks within {r, n}"] = set(
                int(x) for x in np.unique(ranks_D)
            ) <= {r, n}
        third_ok = True
        for point, K in distinct[2:]:
            if stacked_rank(field, D._coords, K._coords) != D.dim + K.dim or (
                D.dim + K.dim != d
            ):
                third_ok = False
                break
        checks["M = N + N1 + N2 for every third kernel"] = t > 2 and third_ok
        malt_ok = (
            alt_part.dim == r
            and stacked_rank(field, D._coords, alt_part._coords)
            == D.dim + alt_part.dim
            and D.dim + alt_part.dim == d
        )
        checks["M = N + N1 + M_alt"] = malt_ok
        chosen_split = (N, N1, alt_part)

    quantities["checks"] = checks
    decomposition = SpreadDecomposition(components, alt_part, chosen_split)
    if not pres_met:
        return decomposition, VerificationReport(
            "spread", HYPOTHESES_NOT_MET, hyps, quantities
        )
    if all(checks.values()):
        return decomposition, VerificationReport("spread", PASS, hyps, quantities)
    if not witnesses:
        witnesses.append(
            {"failed_checks": [name for name, ok in checks.items() if not ok]}
        )
    return decomposition, VerificationReport(
        "spread", FAIL, hyps, quantities, witnesses
    )


# ---------------------------------------------------------------------------
# Counting machinery
# ---------------------------------------------------------------------------


def gaussian_binomial(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of an a-dimensional space over
    GF(q); exact integer arithmetic."""
    if not (isinstance(a, int) and isinstance(b, int) and isinstance(q, int)):
        raise ValueError("arguments must be integers")
    if not 0 <= b <= a:
        raise ValueError(f"need 0 <= b <= a, got a={a}, b={b}")
    if q < 2:
        raise ValueError(f"need q >= 2, got {q}")
    res = 1
    for i in range(1, b + 1):
        res = res * (q ** (a - i + 1) - 1) // (q**i - 1)
    return res


def check_inequalities(a: int, b: int, x_values: Sequence) -> VerificationReport:
    """Exact rational verification of the two counting inequalities:
    (x^a - 1)/(x^b - 1) < x^(a-b) (1 + x^(1-b)) for x >= 2, and
    F(x) < 4 x^((a-b) b) for x >= 4 with F the q-binomial product."""
    if not 1 <= b <= a:
        raise ValueError(f"need 1 <= b <= a, got a={a}, b={b}")
    xs = [Fraction(x) for x in x_values]
    if any(x < 2 for x in xs):
        raise ValueError("the ratio inequality needs x >= 2")
    checked_ratio = 0
    checked_product = 0
    witnesses = []
    for x in xs:
        lhs = Fraction(x**a - 1, x**b - 1)
        rhs = x ** (a - b) * (1 + Fraction(1, x ** (b - 1)))
        checked_ratio += 1
        if not lhs < rhs:
            witnesses.append({"inequality": "ratio", "x": str(x)})
        if x >= 4:
            F = Fraction(1)
            for i in range(1, b + 1):
                F *= Fraction(x ** (a - i + 1) - 1, x**i - 1)
            bound = 4 * x ** ((a - b) * b)
            checked_product += 1
            if not F < bound:
                witnesses.append({"inequality": "product", "x": str(x)})
    quantities = {
        "a": a,
        "b": b,
        "x_count": len(xs),
        "ratio_checks": checked_ratio,
        "product_checks": checked_product,
    }
    if witnesses:
        return VerificationReport("inequality", FAIL, [], quantities, witnesses)
    return VerificationReport("inequality", PASS, [], quantities)


def _distinct_radicals_task(task):
    """Ordered (radical-key, coords) first occurrences within one chunk."""
    M, reps = task
    grams = _combo_grams(reps, M._basis_arrs, M.field)
    out = []
    seen = set()
    for i in range(reps.shape[0]):
        rad = kernel_basis(Matrix(M.field, grams[i]))
        key = (rad.dim, rad._basis.tobytes())
        if key not in seen:
            seen.add(key)
            out.append((key, [int(c) for c in reps[i]]))
    return out


def check_radical_threshold(
    M: FormSubspace, cap: int = DEFAULT_ENUMERATION_CAP, jobs: int = 1
) -> VerificationReport:
    """Constant rank r (r odd, 1 < r < n, q >= r + 1, d <= r): once
    d > 2(n-r)r / (2(n-r)+1), all radicals coincide.  The number t of
    distinct radicals is always measured; for t > 1 the partition lower
    bound and the subspace-count upper bound are cross-checked."""
    spec = rank_spectrum(M, cap, jobs)
    d, n, q = M.dim, M.n, M.field.q
    constant = len(spec.counts) == 1
    r = spec.max_rank
    threshold = (
        Fraction(2 * (n - r) * r, 2 * (n - r) + 1) if r < n else Fraction(0)
    )
    hyps = [
        Hypothesis("characteristic 2", M.field.p == 2, M.field.p),
        Hypothesis("constant rank", constant, spec.ranks()),
        Hypothesis("r odd", constant and r % 2 == 1, r),
        Hypothesis("1 < r < n", constant and 1 < r < n, (r, n)),
        Hypothesis("|K| >= r + 1", q >= r + 1, q),
        Hypothesis("d <= r", d <= r, d),
        Hypothesis("d exceeds the threshold", Fraction(d) > threshold, d),
    ]
    quantities = {
        "n": n,
        "q": q,
        "d": d,
        "r": r,
        "threshold": threshold,
        "contentless": 3 * r <= 2 * n - 1,
        "ranks": spec.ranks(),
    }
    # Count distinct radicals whenever the sweep is feasible.
    t = None
    rad_reps: list = []
    if d > 0:
        nreps = projective_count(q, d)
        if nreps > cap:
            raise CapExceeded(nreps, cap, "projective enumeration")
        reps = _projective_reps(q, d, M.field.code_dtype)
        seen: dict = {}
        tasks = [(M, reps[lo:hi]) for lo, hi in chunk_ranges(nreps, DEFAULT_CHUNK)]
        for chunk in run_tasks(_distinct_radicals_task, tasks, jobs):
            for key, coords in chunk:
                if key not in seen:
                    seen[key] = coords
        t = len(seen)
        rad_reps = list(seen.values())
        quantities["t"] = t
        if constant and t is not None and t > 1:
            lower = q ** ((d + 1) // 2) + 1
            quantities["partition_lower_bound"] = lower
            quantities["partition_lower_bound_ok"] = t >= lower
            if q >= max(4, r + 1) and d <= r and r < n:
                exact_cap = gaussian_binomial(n - d, n - r, q)
                upper = 4 * Fraction(q) ** ((n - r) * (r - d))
                quantities["subspace_count_cap"] = exact_cap
                quantities["subspace_count_cap_ok"] = t <= exact_cap
                quantities["relaxed_cap"] = upper
                quantities["relaxed_cap_ok"] = Fraction(t) <= upper
    if not all(h.holds for h in hyps):
        return VerificationReport("threshold", HYPOTHESES_NOT_MET, hyps, quantities)
    if t == 1:
        return VerificationReport("threshold", PASS, hyps, quantities)
    return VerificationReport(
        "threshold",
        FAIL,
        hyps,
        quantities,
        [{"radical_representatives": rad_reps[:2]}],
    )


def _closed_form(recipe: Optional[dict], q: int, rank_value: int):
    if not recipe:
        return None
    kind = recipe.get("kind")
    params = recipe.get("params", {})
    if kind == "alt_full" and rank_value == 2:
        return ("(q^2+1)(q^3-1)", (q**2 + 1) * (q**3 - 1))
    if kind == "trace2x2" and params.get("degree") == 2 and rank_value == 2:
        return ("q^4-1", q**4 - 1)
    if kind == "restrict_scalars":
        s = params.get("degree")
        inner = params.get("inner") or {}
        if s and inner.get("kind") == "alt_full" and rank_value == 2 * s:
            return (
                "(q^(2r)+1)(q^(3r)-1)",
                (q ** (2 * s) + 1) * (q ** (3 * s) - 1),
            )
        if (
            s
            and inner.get("kind") == "trace2x2"
            and inner.get("params", {}).get("degree") == 2
            and rank_value == 2 * s
        ):
            return ("q^(4r)-1", q ** (4 * s) - 1)
    return None


def count_rank_elements(
    M: FormSubspace,
    rank: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    jobs: int = 1,
) -> tuple[int, VerificationReport]:
    """Exact count of elements of the given rank, compared against the
    matching closed form when the space carries a recognised recipe."""
    spec = rank_spectrum(M, cap, jobs)
    count = spec.get(rank)
    quantities = {
        "n": M.n,
        "q": M.field.q,
        "d": M.dim,
        "rank": rank,
        "count": count,
    }
    closed = _closed_form(M.recipe, M.field.q, rank)
    if closed is None:
        quantities["closed_form"] = None
        return count, VerificationReport("counts", PASS, [], quantities)
    label, expected = closed
    quantities["closed_form"] = label
    quantities["closed_form_value"] = expected
    if count == expected:
        return count, VerificationReport("counts", PASS, [], quantities)
    return count, VerificationReport(
        "counts", FAIL, [], quantities, [_space_witness(M)]
    )


# ---------------------------------------------------------------------------
# Seeded randomized search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchParams:
    p: int
    k: int
    n: int
    d: int
    predicate: str
    trials: int
    seed: int
    cap: int = DEFAULT_ENUMERATION_CAP
    jobs: int = 1


def _draw_space(field: Field, n: int, d: int, seed: int, trial: int) -> FormSubspace:
    rng = np.random.Generator(
        np.random.Philox(
            key=np.array([seed & _MASK64, trial & _MASK64], dtype=np.uint64)
        )
    )
    D = n * (n + 1) // 2
    vecs = rng.integers(0, field.q, size=(d, D)).astype(field.code_dtype)
    forms = [
        SymForm(Matrix(field, _gram_from_vec(v, n, field))) for v in vecs
    ]
    return span_canonicalize(forms, field=field, n=n)


def _iter_rank_chunks(space: FormSubspace, cap: int, chunk: int = DEFAULT_CHUNK):
    q, d = space.field.q, space.dim
    nreps = projective_count(q, d)
    if nreps > cap:
        raise CapExceeded(nreps, cap, "projective enumeration")
    reps = _projective_reps(q, d, space.field.code_dtype)
    for lo, hi in chunk_ranges(nreps, chunk):
        grams = _combo_grams(reps[lo:hi], space._basis_arrs, space.field)
        yield batch_rank(grams, space.field)


def _pred_always_false(space: FormSubspace, cap: int):
    return False, None


def _pred_odd_rank(space: FormSubspace, cap: int):
    d = space.dim
    if d == 0:
        return False, None
    basis_ranks = batch_rank(space._basis_arrs, space.field)
    if (basis_ranks % 2 == 0).any():
        return False, None
    max_rank = 0
    for ranks in _iter_rank_chunks(space, cap):
        if (ranks % 2 == 0).any():
            return False, None
        max_rank = max(max_rank, int(ranks.max()))
    r = max_rank
    if d > r or d > r * (r + 1) // 2:
        return True, {"kind": "odd-rank", "d": d, "r": r, **_space_witness(space)}
    return True, None


def _pred_malt_zero(space: FormSubspace, cap: int):
    d = space.dim
    if d == 0:
        return False, None
    if alt_subspace(space).dim != 0:
        return False, None
    basis_ranks = batch_rank(space._basis_arrs, space.field)
    if int(basis_ranks.max()) >= d:
        return True, None
    max_rank = 0
    for ranks in _iter_rank_chunks(space, cap):
        max_rank = max(max_rank, int(ranks.max()))
        if max_rank >= d:
            return True, None
    if d > max_rank:
        return True, {
            "kind": "malt-zero",
            "d": d,
            "r": max_rank,
            **_space_witness(space),
        }
    return True, None


def _pred_two_rank(space: FormSubspace, cap: int):
    d, n = space.dim, space.n
    if d == 0:
        return False, None
    seen: set[int] = set()
    for ranks in _iter_rank_chunks(space, cap):
        seen.update(int(x) for x in np.unique(ranks))
        if len(seen) > 2:
            return False, None
    ranks_sorted = sorted(seen)
    if len(ranks_sorted) == 2 and ranks_sorted[1] == n:
        r = ranks_sorted[0]
    elif len(ranks_sorted) == 1 and ranks_sorted[0] != n:
        r = ranks_sorted[0]
    else:
        return False, None
    if not (0 < r < n and r % 2 == 1 and n % 2 == 0):
        return False, None
    if d > n + r:
        return True, {"kind": "two-rank", "d": d, "r": r, **_space_witness(space)}
    return True, None


def _pred_bounds_probe(space: FormSubspace, cap: int):
    """Joint probe: the all-odd-rank bound and the alternating-free bound
    evaluated on the same candidate, sharing one sweep."""
    d = space.dim
    if d == 0:
        return False, None
    basis_ranks = batch_rank(space._basis_arrs, space.field)
    alt_zero = alt_subspace(space).dim == 0
    odd_alive = not (basis_ranks % 2 == 0).any()
    need_max = alt_zero and int(basis_ranks.max()) < d
    max_rank = int(basis_ranks.max())
    if odd_alive or need_max:
        for ranks in _iter_rank_chunks(space, cap):
            if (ranks % 2 == 0).any():
                odd_alive = False
            max_rank = max(max_rank, int(ranks.max()))
            if not odd_alive and (not alt_zero or max_rank >= d):
                break
    satisfied = alt_zero or odd_alive
    if not satisfied:
        return False, None
    if odd_alive and (d > max_rank or d > max_rank * (max_rank + 1) // 2):
        return True, {
            "kind": "odd-rank",
            "d": d,
            "r": max_rank,
            **_space_witness(space),
        }
    if alt_zero and max_rank < d:
        return True, {
            "kind": "malt-zero",
            "d": d,
            "r": max_rank,
            **_space_witness(space),
        }
    return True, None


PREDICATES = {
    "odd-rank": _pred_odd_rank,
    "malt-zero": _pred_malt_zero,
    "two-rank": _pred_two_rank,
    "bounds-probe": _pred_bounds_probe,
    "always-false": _pred_always_false,
}


def _search_task(task):
    params, lo, hi = task
    field = make_field(params.p, params.k)
    pred = PREDICATES[params.predicate]
    satisfied = 0
    violations = []
    for trial in range(lo, hi):
        space = _draw_space(field, params.n, params.d, params.seed, trial)
        ok, violation = pred(space, params.cap)
        if ok:
            satisfied += 1
        if violation is not None:
            violation = dict(violation)
            violation["trial"] = trial
            violations.append(violation)
    return satisfied, violations


def random_subspace_search(params: SearchParams) -> VerificationReport:
    """Deterministic seeded probe for counterexamples to a bound.

    Each trial draws its own counter-based stream keyed by (seed,
    trial), so results are identical under any work partitioning.
    """
    if params.predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {params.predicate!r}")
    field = make_field(params.p, params.k)
    if projective_count(field.q, params.d) > params.cap:
        raise CapExceeded(
            projective_count(field.q, params.d), params.cap, "per-trial enumeration"
        )
    tasks = [
        (params, lo, hi) for lo, hi in chunk_ranges(params.trials, 256)
    ]
    satisfied = 0
    violations: list = []
    for s, v in run_tasks(_search_task, tasks, params.jobs):
        satisfied += s
        violations.extend(v)
    quantities = {
        "predicate": params.predicate,
        "trials": params.trials,
        "satisfied": satisfied,
        "violations": len(violations),
        "p": params.p,
        "k": params.k,
        "q": field.q,
        "n": params.n,
        "d": params.d,
        "seed": params.seed,
    }
    if violations:
        return VerificationReport(
            "search", FAIL, [], quantities, violations
        )
    return VerificationReport("search", PASS, [], quantities)
