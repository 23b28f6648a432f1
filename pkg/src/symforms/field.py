"""Exact arithmetic in finite fields GF(p^k).

An element of GF(p^k) = GF(p)[t]/(m(t)) is the residue polynomial
c_0 + c_1*t + ... + c_{k-1}*t^{k-1}, stored as the integer code
sum(c_i * p**i) (little-endian base-p digits).  The modulus m is a
monic irreducible polynomial of degree k over GF(p), kept as a
coefficient tuple listed lowest degree first.  All arithmetic is exact
residue arithmetic modulo (p, m); there is no coercion between
distinct fields.

Scalar arithmetic works for any field up to ``Q_CAP`` elements.
Fields of at most ``TABLE_Q_CAP`` elements additionally build numpy
lookup tables on demand; those tables back the vectorised kernels in
:mod:`symforms.linalg`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

import numpy as np

__all__ = [
    "Field",
    "FieldElement",
    "make_field",
    "enumerate_elements",
    "sqrt_char2",
    "rel_trace",
    "embed_subfield",
    "trace_table",
    "Q_CAP",
    "TABLE_Q_CAP",
]

# Largest permitted field cardinality p**k.
Q_CAP = 1 << 20
# Largest field that gets numpy lookup tables (required by batch kernels).
TABLE_Q_CAP = 1 << 11


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _digits(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


def _encode(digits: Sequence[int], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


# ---------------------------------------------------------------------------
# Polynomials over GF(p): coefficient tuples, lowest degree first, trimmed.
# ---------------------------------------------------------------------------


def _ptrim(c: Sequence[int]) -> tuple[int, ...]:
    i = len(c)
    while i and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _ptrim(a[:dm])


def _is_irreducible(modulus: Sequence[int], p: int, k: int) -> bool:
    """Exhaustive trial division by all monic divisors of degree <= k//2."""
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for low in range(p**d):
            div = tuple(_digits(low, p, d)) + (1,)
            if not _pmod(modulus, div, p):
                return False
    return True


def _default_modulus(p: int, k: int) -> tuple[int, ...]:
    # Smallest integer encoding wins, so runs are reproducible without
    # external polynomial tables.
    for low in range(p**k):
        cand = tuple(_digits(low, p, k)) + (1,)
        if _is_irreducible(cand, p, k):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """The finite field GF(p^k) with a fixed monic irreducible modulus.

    Use :func:`make_field` to construct one.  Fields compare equal when
    they have the same characteristic, degree and modulus; elements of
    unequal fields never mix.
    """

    __slots__ = ("p", "k", "q", "modulus", "_mod_code", "_ops")

    def __init__(self, p: int, k: int = 1, modulus: Optional[Sequence[int]] = None):
        if not isinstance(p, int) or not _is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"extension degree must be a positive integer, got {k!r}")
        q = p**k
        if q > Q_CAP:
            raise ValueError(f"field size {p}^{k} = {q} exceeds the cap {Q_CAP}")
        if modulus is None:
            mod = _default_modulus(p, k)
        else:
            mod = tuple(int(c) % p for c in modulus)
            if len(mod) != k + 1 or _ptrim(mod) != mod or mod[k] != 1:
                raise ValueError(
                    f"modulus must be monic of degree exactly {k}, got {list(modulus)!r}"
                )
            if not _is_irreducible(mod, p, k):
                raise ValueError(f"modulus {list(mod)!r} is reducible over GF({p})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "_mod_code", _encode(mod, p))
        object.__setattr__(self, "_ops", None)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def __getstate__(self):
        return (self.p, self.k, self.modulus)

    def __setstate__(self, state):
        p, k, mod = state
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "q", p**k)
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "_mod_code", _encode(mod, p))
        object.__setattr__(self, "_ops", None)

    # -- element handling ---------------------------------------------------

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def element(self, value: Union[int, "FieldElement"]) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.owner != self:
                raise ValueError(f"element of {value.owner!r} is not in {self!r}")
            return value
        code = int(value)
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range [0, {self.q})")
        return FieldElement(self, code)

    def elements(self) -> Iterator["FieldElement"]:
        """All q elements in increasing code order."""
        for code in range(self.q):
            yield FieldElement(self, code)

    @property
    def code_dtype(self):
        return np.uint16 if self.q <= 0xFFFF else np.uint32

    # -- scalar code arithmetic ---------------------------------------------

    def _add_codes(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        da = _digits(a, p, self.k)
        db = _digits(b, p, self.k)
        return _encode([(x + y) % p for x, y in zip(da, db)], p)

    def _neg_code(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        return _encode([(-x) % p for x in _digits(a, p, self.k)], p)

    def _sub_codes(self, a: int, b: int) -> int:
        return self._add_codes(a, self._neg_code(b))

    def _mul_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self.p == 2:
            # Carry-less multiply, reducing by the modulus bitmask as we go.
            res = 0
            top = 1 << self.k
            while b:
                if b & 1:
                    res ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._mod_code
            return res
        pa = _ptrim(_digits(a, self.p, self.k))
        pb = _ptrim(_digits(b, self.p, self.k))
        rem = _pmod(_pmul(pa, pb, self.p), self.modulus, self.p)
        return _encode(list(rem) + [0] * (self.k - len(rem)), self.p)

    def _pow_code(self, a: int, e: int) -> int:
        if e < 0:
            a = self._inv_code(a)
            e = -e
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_codes(result, base)
            base = self._mul_codes(base, base)
            e >>= 1
        return result

    def _inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        return self._pow_code(a, self.q - 2)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Field":
        return cls(int(d["p"]), int(d["k"]), [int(c) for c in d["modulus"]])

    # -- batch kernels -------------------------------------------------------

    def ops(self) -> "_Ops":
        """Numpy lookup-table kernels; only available for q <= TABLE_Q_CAP."""
        ops = self._ops
        if ops is None:
            if self.q > TABLE_Q_CAP:
                raise ValueError(
                    f"batch kernels need lookup tables; {self!r} has q = {self.q} "
                    f"> {TABLE_Q_CAP}"
                )
            ops = _Ops(self)
            object.__setattr__(self, "_ops", ops)
        return ops


def _find_generator(field: Field) -> int:
    """Smallest code generating the multiplicative group."""
    q = field.q
    if q == 2:
        return 1
    n = q - 1
    primes = []
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            primes.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        primes.append(m)
    for g in range(2, q):
        if all(field._pow_code(g, n // ell) != 1 for ell in primes):
            return g
    raise AssertionError("multiplicative group has a generator")  # unreachable


class _Ops:
    """Vectorised field arithmetic on integer-code ndarrays.

    Addition uses XOR in characteristic 2 and plain modular addition in
    prime fields; odd-characteristic extensions fall back to a full
    addition table.  Multiplication and inversion always go through
    exp/log-derived tables.
    """

    __slots__ = ("field", "q", "p", "k", "dtype", "MUL", "INV", "NEG", "ADD")

    def __init__(self, field: Field):
        q, p, k = field.q, field.p, field.k
        self.field = field
        self.q, self.p, self.k = q, p, k
        self.dtype = field.code_dtype

        g = _find_generator(field)
        exp = np.zeros(max(q - 1, 1), dtype=self.dtype)
        val = 1
        for i in range(q - 1):
            exp[i] = val
            val = field._mul_codes(val, g)
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)

        MUL = np.zeros((q, q), dtype=self.dtype)
        if q > 2:
            la = log[1:q]
            MUL[1:, 1:] = exp[(la[:, None] + la[None, :]) % (q - 1)]
        else:
            MUL[1, 1] = 1
        MUL.flags.writeable = False
        self.MUL = MUL

        INV = np.zeros(q, dtype=self.dtype)
        INV[1:] = exp[(-log[1:]) % (q - 1)]
        INV.flags.writeable = False
        self.INV = INV

        if p == 2:
            self.NEG = None
            self.ADD = None
        else:
            codes = np.arange(q, dtype=np.int64)
            digs = np.empty((q, k), dtype=np.int64)
            t = codes.copy()
            for i in range(k):
                digs[:, i] = t % p
                t //= p
            weights = p ** np.arange(k, dtype=np.int64)
            NEG = (((-digs) % p) * weights).sum(axis=1).astype(self.dtype)
            NEG.flags.writeable = False
            self.NEG = NEG
            if k == 1:
                self.ADD = None
            else:
                # Chunked build keeps the intermediate digit sums small.
                ADD = np.empty((q, q), dtype=self.dtype)
                step = max(1, (1 << 22) // (q * k))
                for lo in range(0, q, step):
                    hi = min(lo + step, q)
                    s = (digs[lo:hi, None, :] + digs[None, :, :]) % p
                    ADD[lo:hi] = (s * weights).sum(axis=2).astype(self.dtype)
                ADD.flags.writeable = False
                self.ADD = ADD

    def add(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        if self.k == 1:
            return ((x.astype(np.int64) + y) % self.p).astype(self.dtype)
        return self.ADD[x, y]

    def neg(self, x):
        if self.p == 2:
            return x
        if self.k == 1:
            return ((self.p - x.astype(np.int64)) % self.p).astype(self.dtype)
        return self.NEG[x]

    def sub(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        if self.k == 1:
            return ((x.astype(np.int64) - y) % self.p).astype(self.dtype)
        return self.ADD[x, self.NEG[y]]

    def mul(self, x, y):
        return self.MUL[x, y]

    def inv(self, x):
        return self.INV[x]


@dataclass(frozen=True)
class FieldElement:
    """An element of a :class:`Field`, identified by its integer code.

    Arithmetic between elements of distinct fields raises; there is no
    implicit coercion.
    """

    owner: Field
    code: int

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected a FieldElement, got {type(other).__name__}")
        if other.owner != self.owner:
            raise ValueError(f"mixed fields: {self.owner!r} and {other.owner!r}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.owner, self.owner._add_codes(self.code, other.code))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.owner, self.owner._sub_codes(self.code, other.code))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.owner, self.owner._neg_code(self.code))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.owner, self.owner._mul_codes(self.code, other.code))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        if not isinstance(e, int):
            raise TypeError("exponent must be an integer")
        return FieldElement(self.owner, self.owner._pow_code(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.owner, self.owner._inv_code(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        return f"{self.owner!r}:{self.code}"


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def make_field(p: int, k: int = 1, modulus: Optional[Sequence[int]] = None) -> Field:
    """Construct GF(p^k).

    When ``modulus`` is omitted the monic irreducible polynomial of
    degree k with the smallest integer encoding is selected by
    deterministic search, so repeated runs agree without any external
    polynomial tables.
    """
    return Field(p, k, modulus)


def enumerate_elements(field: Field) -> Iterator[FieldElement]:
    """Yield all q elements of the field in increasing code order."""
    return field.elements()


def sqrt_char2(a: FieldElement) -> FieldElement:
    """The unique square root in characteristic 2, a ** (q // 2)."""
    if a.owner.p != 2:
        raise ValueError("square roots via q/2-th powers need characteristic 2")
    return a ** (a.owner.q // 2)


@lru_cache(maxsize=None)
def _embedding(L: Field, K: Field):
    """Embedding data for K inside L: (beta powers, projection solver rows).

    beta is the smallest-code root in L of K's modulus; the embedding
    sends the generator of K to beta.  Returns (powers, proj) where
    ``powers[i]`` is the L-code of beta**i and ``proj`` solves for
    K-digits given L-digits.
    """
    if L.p != K.p or L.k % K.k != 0:
        raise ValueError(f"{K!r} does not embed into {L!r}")
    p = L.p
    beta = None
    for cand in range(L.q):
        # Evaluate K's modulus at cand inside L (Horner, coefficients are
        # GF(p) constants and embed as constant codes).
        acc = 0
        for coeff in reversed(K.modulus):
            acc = L._add_codes(L._mul_codes(acc, cand), coeff)
        if acc == 0:
            beta = cand
            break
    assert beta is not None, "subfield root must exist when degrees divide"
    powers = [1]
    for _ in range(1, K.k):
        powers.append(L._mul_codes(powers[-1], beta))
    # GF(p)-matrix of the embedding: column i holds the digits of beta**i.
    cols = [_digits(c, p, L.k) for c in powers]
    rows = [[cols[j][i] for j in range(K.k)] for i in range(L.k)]
    return tuple(powers), tuple(tuple(r) for r in rows)


def _solve_gfp(rows, rhs, p: int) -> Optional[list[int]]:
    """Solve A x = b over GF(p) for small dense A given as row tuples."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, m) if aug[i][c] % p), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if aug[i][n] % p:
            return None
    x = [0] * n
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][n]
    return x


def embed_subfield(L: Field, K: Field, x: FieldElement) -> FieldElement:
    """Image of x in L under the canonical embedding of K."""
    if x.owner != K:
        raise ValueError("x must belong to K")
    powers, _ = _embedding(L, K)
    digs = _digits(x.code, K.p, K.k)
    acc = 0
    for d, pw in zip(digs, powers):
        if d:
            acc = L._add_codes(acc, L._mul_codes(d, pw))
    return FieldElement(L, acc)


def _project_code(L: Field, K: Field, code: int) -> int:
    _, rows = _embedding(L, K)
    sol = _solve_gfp(rows, _digits(code, L.p, L.k), L.p)
    if sol is None:
        raise ValueError(f"L-code {code} is not in the embedded copy of {K!r}")
    return _encode(sol, K.p)


def rel_trace(L: Field, K: Field, x: FieldElement) -> FieldElement:
    """Relative trace from L down to K: sum of x ** (|K| ** i), i < [L:K].

    L and K must share the characteristic and the degree of K must
    divide that of L.  The result always lands in the embedded copy of
    K and is returned as an element of K.
    """
    if x.owner != L:
        raise ValueError("x must belong to L")
    if L.p != K.p or L.k % K.k != 0:
        raise ValueError(f"incompatible field pair {L!r} / {K!r}")
    r = L.k // K.k
    qk = K.q
    acc = x.code
    term = x.code
    for _ in range(r - 1):
        term = L._pow_code(term, qk)
        acc = L._add_codes(acc, term)
    return FieldElement(K, _project_code(L, K, acc))


@lru_cache(maxsize=None)
def trace_table(L: Field, K: Field) -> np.ndarray:
    """K-codes of the relative trace, indexed by L-code."""
    out = np.empty(L.q, dtype=K.code_dtype)
    for code in range(L.q):
        out[code] = rel_trace(L, K, FieldElement(L, code)).code
    out.flags.writeable = False
    return out
