import random

import pytest
from hypothesis import given, strategies as st

from koszul_plane.field import FieldError, field_create, field_inverse, is_probable_prime, next_prime

P = 2147483647


def test_mersenne_prime_accepted():
    assert field_create(P).modulus == P


def test_small_prime_rejected_with_reason():
    with pytest.raises(FieldError, match="2\\^20"):
        field_create(10007)


def test_composite_rejected():
    with pytest.raises(FieldError, match="not prime"):
        field_create(P - 1)


def test_inverse_of_one_and_minus_one():
    F = field_create(P)
    assert field_inverse(F(1)) == 1
    assert field_inverse(F(P - 1)).value == P - 1


def test_inverse_defining_property_random():
    F = field_create(P)
    rng = random.Random(1)
    for _ in range(100):
        a = F(rng.randrange(1, P))
        assert (a * field_inverse(a)).value == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inverse(field_create(P)(0))


def test_primality_against_trial_division():
    def slow(n):
        return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))

    for n in range(0, 3000):
        assert is_probable_prime(n) == slow(n), n
    assert next_prime(1 << 20) == 1048583


@given(st.integers(0, P - 1), st.integers(0, P - 1), st.integers(0, P - 1))
def test_field_axioms(a, b, c):
    F = field_create(P)
    x, y, z = F(a), F(b), F(c)
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x
    if b:
        assert (x / y) * y == x
