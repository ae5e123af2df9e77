from hypothesis import given, settings
from hypothesis import strategies as st

from catsl2.series import PrecisionError, TruncatedSeries

import pytest

coeff_dicts = st.dictionaries(st.integers(-8, 12), st.integers(-9, 9),
                              max_size=6)


def series(coeffs, precision=30):
    return TruncatedSeries(coeffs, precision)


@given(coeff_dicts, coeff_dicts)
@settings(max_examples=200)
def test_ring_laws(a, b):
    x, y = series(a), series(b)
    assert x + y == y + x
    assert x * y == y * x
    assert (x - x).is_zero()
    one = TruncatedSeries.one()
    assert x * one == x


@given(coeff_dicts, coeff_dicts, coeff_dicts)
@settings(max_examples=100)
def test_distributivity(a, b, c):
    x, y, z = series(a), series(b), series(c)
    assert x * (y + z) == x * y + x * z


def test_truncation_and_window_propagation():
    x = TruncatedSeries({0: 1, 31: 5})
    assert x == TruncatedSeries.one()
    # multiplying by q^-1 terms costs window
    y = TruncatedSeries.circle() * TruncatedSeries.circle()
    assert y.precision == 29
    assert y == TruncatedSeries({-2: 1, 0: 2, 2: 1}, 29)


def test_quantum_integers_and_inverse():
    two = TruncatedSeries.quantum_integer(2)
    assert two == TruncatedSeries.circle()
    three = TruncatedSeries.quantum_integer(3)
    assert three == TruncatedSeries({-2: 1, 0: 1, 2: 1})
    inv = two.inverse()
    prod = two * inv
    assert prod == TruncatedSeries.one(prod.precision)
    # [2]^-1 = q(1 + q^2)^-1 = q - q^3 + q^5 - ...
    expect = TruncatedSeries({1 + 4 * k: 1 for k in range(8)}) + \
        TruncatedSeries({3 + 4 * k: -1 for k in range(7)})
    assert two.inverse() == expect


def test_inverse_errors():
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries.zero().inverse()
    with pytest.raises(ValueError):
        TruncatedSeries({0: 2}).inverse()


def test_shift_moves_window():
    x = TruncatedSeries({0: 1}, 10)
    assert x.shift(5).precision == 15
    assert x.shift(5)[5] == 1


def test_min_exponent_and_json():
    x = TruncatedSeries({-3: 2, 4: -1})
    assert x.min_exponent == -3
    assert x.to_json() == [[-3, 2], [4, -1]]
    assert TruncatedSeries.zero().min_exponent is None
