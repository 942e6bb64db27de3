from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import SMALL_FIELDS
from hankelff.errors import DegreeMismatch, DivisionByZero, NotIrreducible, NotPrime
from hankelff.ffield import (
    FieldElement,
    FieldSpec,
    elem_arith,
    elem_inv,
    field_enumerate,
    field_make,
    is_prime,
    smallest_irreducible,
)
from oracles import gf_tables


def test_prime_and_extension_fields():
    f2 = field_make(2)
    assert (f2.p, f2.e, f2.q) == (2, 1, 2)
    gf4 = field_make(2, 2, [1, 1, 1])
    assert gf4.q == 4 and gf4.modulus == (1, 1, 1)
    with pytest.raises(NotPrime):
        field_make(4)


def test_bad_moduli():
    with pytest.raises(NotIrreducible):
        field_make(2, 2, [1, 0, 1])  # (x+1)^2
    with pytest.raises(DegreeMismatch):
        field_make(2, 2, [1, 1, 0, 1])
    with pytest.raises(DegreeMismatch):
        field_make(3, 0)


def test_default_modulus_is_smallest():
    assert smallest_irreducible(2, 3) == (1, 1, 0, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    assert field_make(2, 2).modulus == (1, 1, 1)


@pytest.mark.parametrize(
    "p, e, a, b, op, want",
    [
        (3, 1, 2, 2, "add", 1),
        (5, 1, 3, 4, "mul", 2),
        (5, 1, 1, 3, "sub", 3),
    ],
)
def test_elem_arith_prime(p, e, a, b, op, want):
    spec = field_make(p, e)
    assert elem_arith(spec(a), spec(b), op) == spec(want)


def test_gf4_examples(gf4):
    x = gf4([0, 1])
    assert x * x == gf4([1, 1])
    assert elem_inv(x) == gf4([1, 1])
    assert [str(el) for el in field_enumerate(gf4)] == ["0", "1", "x", "x+1"]


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        elem_inv(field_make(2)(0))
    assert elem_inv(field_make(5)(2)) == field_make(5)(3)


def test_enumeration_order():
    assert [e.code for e in field_enumerate(field_make(3))] == [0, 1, 2]
    assert len(field_enumerate(field_make(2))) == 2


@pytest.mark.parametrize("p, e", SMALL_FIELDS)
def test_tables_match_schoolbook(p, e):
    spec = field_make(p, e)
    add, mul = gf_tables(p, spec.modulus if e > 1 else None)
    assert [list(r) for r in spec.add] == add
    assert [list(r) for r in spec.mul] == mul


@pytest.mark.parametrize("p, e", [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3), (7, 1)])
def test_field_axioms_exhaustive(p, e):
    spec = field_make(p, e)
    els = field_enumerate(spec)
    assert len({x.code for x in els}) == spec.q
    zero, one = spec(0), spec(1)
    for a, b in product(els, repeat=2):
        assert a + b == b + a and a * b == b * a
        assert (a - b) + b == a
    for a, b, c in product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in els:
        assert a + zero == a and a * one == a
        if a.code:
            assert a * elem_inv(a) == one
            assert elem_inv(elem_inv(a)) == a


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_division_inverts_multiplication(pe, data):
    spec = field_make(*pe)
    a = data.draw(st.integers(0, spec.q - 1))
    b = data.draw(st.integers(1, spec.q - 1))
    x, y = spec(a), spec(b)
    assert (x * y) / y == x


def test_is_prime_small():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_json_and_pickle_roundtrip():
    import pickle

    spec = field_make(3, 2)
    assert FieldSpec.from_json(spec.to_json()) == spec
    clone = pickle.loads(pickle.dumps(spec))
    assert clone == spec and clone.mul[4][5] == spec.mul[4][5]


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        field_make(2)(1) + field_make(3)(1)


def test_element_repr_is_readable():
    assert isinstance(field_make(3, 2)([2, 1]), FieldElement)
    el = field_make(3, 2)([2, 1])
    assert str(el) == "x+2" and el.repr == (2, 1)
