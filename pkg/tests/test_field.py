import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import symforms as sf
from symforms.field import TABLE_Q_CAP, Q_CAP


def test_prime_field_default_modulus(gf2):
    assert gf2.modulus == (0, 1)
    assert gf2.q == 2


def test_gf4_default_modulus_is_the_only_irreducible_quadratic(gf4):
    # The four monic quadratics over GF(2): t^2, t^2+1, t^2+t, t^2+t+1.
    # Only the last has no root in GF(2).
    assert gf4.modulus == (1, 1, 1)
    for low in ((0, 0), (1, 0), (0, 1)):
        with pytest.raises(ValueError):
            sf.make_field(2, 2, list(low) + [1])


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError, match="reducible"):
        sf.make_field(2, 2, [1, 0, 1])  # (t+1)^2 in characteristic 2


def test_bad_parameters_rejected():
    with pytest.raises(ValueError):
        sf.make_field(4)
    with pytest.raises(ValueError):
        sf.make_field(2, 0)
    with pytest.raises(ValueError):
        sf.make_field(2, 2, [1, 1])  # wrong degree
    with pytest.raises(ValueError):
        sf.make_field(2, 2, [1, 1, 1, 0])  # not monic of degree 2
    with pytest.raises(ValueError, match="cap"):
        sf.make_field(2, 21)
    assert 2**21 > Q_CAP


def test_gf4_multiplication(gf4):
    w = gf4.element(2)
    w2 = gf4.element(3)
    assert (w * w).code == 3
    assert (w * w2).code == 1


def test_characteristic_two_addition(gf2):
    assert (gf2.one + gf2.one).code == 0


def test_gf5_division(gf5):
    assert (gf5.element(2) / gf5.element(3)).code == 4


def test_pow_and_inverse(gf5):
    a = gf5.element(3)
    assert (a**0).code == 1
    assert (a**-1 * a).code == 1
    assert (a**4).code == 1  # Fermat
    with pytest.raises(ZeroDivisionError):
        gf5.zero.inverse()


def test_cross_field_arithmetic_is_an_error(gf2, gf4):
    with pytest.raises(ValueError, match="mixed fields"):
        gf2.one + gf4.one
    with pytest.raises(ValueError):
        gf4.element(gf2.one)


def test_element_code_range(gf4):
    with pytest.raises(ValueError):
        gf4.element(4)
    with pytest.raises(ValueError):
        gf4.element(-1)


def test_enumerate_elements_order_and_roundtrip(gf2, gf4, gf9):
    assert [e.code for e in sf.enumerate_elements(gf2)] == [0, 1]
    assert [e.code for e in sf.enumerate_elements(gf4)] == [0, 1, 2, 3]
    nine = [e.code for e in sf.enumerate_elements(gf9)]
    assert len(nine) == 9 and len(set(nine)) == 9
    for e in sf.enumerate_elements(gf9):
        assert gf9.element(e.code) == e


def test_field_equality_and_hash():
    a = sf.make_field(2, 3)
    b = sf.make_field(2, 3)
    assert a == b and hash(a) == hash(b)
    # Smallest-encoding search picks t^3 + t + 1; the other irreducible
    # cubic gives a distinct (incompatible) field object.
    assert a.modulus == (1, 1, 0, 1)
    other = sf.make_field(2, 3, [1, 0, 1, 1])
    assert other != a
    with pytest.raises(ValueError, match="mixed fields"):
        a.one + other.one


EXHAUSTIVE_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3)]
SAMPLED_FIELDS = [(3, 2), (2, 4), (3, 3), (2, 6)]


@pytest.mark.parametrize("p,k", EXHAUSTIVE_FIELDS)
def test_field_axioms_exhaustive(p, k):
    F = sf.make_field(p, k)
    elems = list(F.elements())
    for a, b, c in itertools.product(elems, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a, b in itertools.product(elems, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    for a in elems:
        assert (a + (-a)).code == 0
        if a.code:
            assert (a * a.inverse()).code == 1


@pytest.mark.parametrize("p,k", SAMPLED_FIELDS)
def test_field_axioms_sampled(p, k):
    F = sf.make_field(p, k)
    rng = np.random.default_rng(12345)
    codes = rng.integers(0, F.q, size=(300, 3))
    for ca, cb, cc in codes:
        a, b, c = F.element(int(ca)), F.element(int(cb)), F.element(int(cc))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a


@given(st.sampled_from(EXHAUSTIVE_FIELDS + SAMPLED_FIELDS), st.data())
@settings(max_examples=60, deadline=None)
def test_frobenius_is_additive(pk, data):
    F = sf.make_field(*pk)
    a = F.element(data.draw(st.integers(0, F.q - 1)))
    b = F.element(data.draw(st.integers(0, F.q - 1)))
    assert (a + b) ** F.p == a**F.p + b**F.p


def test_sqrt_char2(gf2, gf4, gf8):
    assert sf.sqrt_char2(gf2.one).code == 1
    w = gf4.element(2)
    assert sf.sqrt_char2(w).code == 3  # (w^2)^2 = w^4 = w
    for a in gf8.elements():
        s = sf.sqrt_char2(a)
        assert s * s == a


def test_sqrt_char2_unique(gf8):
    for a in gf8.elements():
        roots = [b for b in gf8.elements() if b * b == a]
        assert roots == [sf.sqrt_char2(a)]


def test_sqrt_rejects_odd_characteristic(gf5):
    with pytest.raises(ValueError):
        sf.sqrt_char2(gf5.element(4))


def test_rel_trace_gf4_down_to_gf2(gf2, gf4):
    w = gf4.element(2)
    assert sf.rel_trace(gf4, gf2, w).code == 1  # w + w^2 = 1
    assert sf.rel_trace(gf4, gf2, gf4.one).code == 0
    assert sf.rel_trace(gf4, gf2, gf4.zero).code == 0


def test_rel_trace_not_identically_zero(gf2, gf8):
    values = {sf.rel_trace(gf8, gf2, a).code for a in gf8.elements()}
    assert values == {0, 1}
    assert sum(sf.rel_trace(gf8, gf2, a).code for a in gf8.elements()) == 4


def test_rel_trace_restricted_to_subfield_is_multiplication_by_degree(gf4):
    # [L:K] = 3 over GF(4): odd, so the trace fixes the embedded copy.
    L = sf.make_field(2, 6)
    for z in gf4.elements():
        assert sf.rel_trace(L, gf4, sf.embed_subfield(L, gf4, z)) == z
    # [L:K] = 2 over GF(4): even degree kills the embedded copy.
    L2 = sf.make_field(2, 4)
    for z in gf4.elements():
        assert sf.rel_trace(L2, gf4, sf.embed_subfield(L2, gf4, z)).code == 0


def test_rel_trace_is_k_linear(gf4):
    L = sf.make_field(2, 6)
    rng = np.random.default_rng(7)
    for _ in range(40):
        alpha = gf4.element(int(rng.integers(0, 4)))
        x = L.element(int(rng.integers(0, 64)))
        y = L.element(int(rng.integers(0, 64)))
        lhs = sf.rel_trace(L, gf4, sf.embed_subfield(L, gf4, alpha) * x + y)
        rhs = alpha * sf.rel_trace(L, gf4, x) + sf.rel_trace(L, gf4, y)
        assert lhs == rhs


def test_rel_trace_incompatible_pair_rejected(gf4, gf8, gf9):
    with pytest.raises(ValueError):
        sf.rel_trace(gf8, gf4, gf8.zero)  # 2 does not divide 3
    with pytest.raises(ValueError):
        sf.rel_trace(gf9, gf4, gf9.zero)  # mixed characteristic


def test_batch_kernels_refuse_oversized_fields():
    big = sf.make_field(2, 12)
    assert big.q > TABLE_Q_CAP
    with pytest.raises(ValueError, match="lookup tables"):
        big.ops()


def test_field_json_roundtrip(gf9):
    d = gf9.to_json_dict()
    assert d == {"p": 3, "k": 2, "modulus": [1, 0, 1]} or d["p"] == 3
    again = sf.Field.from_json_dict(d)
    assert again == gf9
