"""Cyclotomic scalar arithmetic: frozen values first, then field-axiom properties."""

import pytest
from hypothesis import given, settings, strategies as st

from qhopf.errors import EngineError
from qhopf.scalars import (
    CycScalar,
    Q,
    arith,
    as_root_power,
    cyclotomic_poly,
    euler_phi,
    lift_level,
    make_root,
)


# ---------------------------------------------------------------------
# frozen oracle values
# ---------------------------------------------------------------------

def test_cyclotomic_polys():
    assert [int(c) for c in cyclotomic_poly(1)] == [-1, 1]
    assert [int(c) for c in cyclotomic_poly(2)] == [1, 1]
    assert [int(c) for c in cyclotomic_poly(3)] == [1, 1, 1]
    assert [int(c) for c in cyclotomic_poly(4)] == [1, 0, 1]
    assert [int(c) for c in cyclotomic_poly(6)] == [1, -1, 1]
    assert [int(c) for c in cyclotomic_poly(8)] == [1, 0, 0, 0, 1]
    assert [int(c) for c in cyclotomic_poly(9)] == [1, 0, 0, 1, 0, 0, 1]
    assert [int(c) for c in cyclotomic_poly(12)] == [1, 0, -1, 0, 1]


def test_make_root_basics():
    assert make_root(1, 0) == 1
    assert make_root(4, 2) == -1
    # zeta_3 + zeta_3^2 = -1 (from Phi_3 = x^2 + x + 1)
    assert make_root(3, 1) + make_root(3, 2) == -1
    # zeta_9 * zeta_9^8 = 1
    assert make_root(9, 1) * make_root(9, 8) == 1
    assert make_root(4, 1) * make_root(4, 1) == -1


def test_inv_one_minus_i():
    i = make_root(4, 1)
    one = CycScalar.one(4)
    lhs = (one - i).inv()
    rhs = (one + i) * CycScalar.from_rational(Q(1, 2), 4)
    assert lhs == rhs


def test_root_orders():
    for N in (2, 3, 4, 6, 9):
        z = make_root(N, 1)
        acc = CycScalar.one(N)
        for k in range(1, N):
            acc = acc * z
            assert acc != 1, f"zeta_{N}^{k} should differ from 1"
        assert acc * z == 1

    # make_root(N, k) has multiplicative order N/gcd(N,k)
    from math import gcd

    for N in (4, 6, 9, 12):
        for k in range(N):
            z = make_root(N, k)
            order = 1
            acc = z
            while acc != 1:
                acc = acc * z
                order += 1
                assert order <= N
            assert order == N // gcd(N, k) if k else order == 1


def test_lift_level_values():
    assert lift_level(CycScalar.from_rational(-1, 2), 4) == make_root(4, 2)
    assert lift_level(CycScalar.one(1), 12) == CycScalar.one(12)
    assert lift_level(make_root(3, 1), 9) == make_root(9, 3)
    with pytest.raises(EngineError) as e:
        lift_level(make_root(4, 1), 6)
    assert e.value.code == "NOT_DIVISIBLE"


def test_arith_named_ops():
    z = make_root(4, 1)
    assert arith("mul", z, z) == -1
    assert arith("add", z, -z).is_zero()
    assert arith("neg", z) == -z
    assert arith("inv", z) == make_root(4, 3)
    with pytest.raises(EngineError) as e:
        arith("add", z, make_root(3, 1))
    assert e.value.code == "LEVEL_MISMATCH"
    with pytest.raises(EngineError) as e:
        arith("inv", CycScalar.zero(4))
    assert e.value.code == "DIVISION_BY_ZERO"


def test_as_root_power():
    for N in (2, 3, 4, 9):
        for e in range(N):
            assert as_root_power(make_root(N, e)) == e
    assert as_root_power(make_root(4, 1) + 1) is None


def test_euler_phi():
    assert [euler_phi(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_serialization_roundtrip():
    z = make_root(9, 2) * CycScalar.from_rational(Q(3, 7), 9) + 5
    assert CycScalar.from_obj(z.to_obj()) == z


# ---------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------

def _scalars(level):
    deg = len(cyclotomic_poly(level)) - 1
    coeff = st.integers(min_value=-9, max_value=9)
    return st.tuples(*([coeff] * deg)).map(
        lambda cs: CycScalar(level, tuple(Q(c) for c in cs))
    )


@settings(max_examples=60, deadline=None)
@given(_scalars(9), _scalars(9), _scalars(9))
def test_field_axioms_level9(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(_scalars(4))
def test_inverse_property_level4(a):
    if a.is_zero():
        with pytest.raises(EngineError):
            a.inv()
    else:
        assert a * a.inv() == 1


@settings(max_examples=100, deadline=None)
@given(_scalars(3), _scalars(3))
def test_lift_is_ring_hom(a, b):
    assert lift_level(a * b, 12) == lift_level(a, 12) * lift_level(b, 12)
    assert lift_level(a + b, 12) == lift_level(a, 12) + lift_level(b, 12)


@settings(max_examples=30, deadline=None)
@given(_scalars(9))
def test_inverse_property_level9(a):
    if not a.is_zero():
        assert a * a.inv() == 1
