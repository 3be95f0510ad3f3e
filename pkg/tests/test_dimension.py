"""Group structure and rendering of dimension exponent vectors."""

from hypothesis import given, settings
from hypothesis import strategies as st

from dimcheck.dimension import (
    BASE_DIMENSIONS,
    DIMENSIONLESS,
    BaseDimension,
    Dimension,
    base_by_name,
    base_dimension_name,
    parse_dimension,
)

exponents = st.tuples(*[st.integers(-8, 8)] * 7)
dims = exponents.map(Dimension)


@given(a=dims, b=dims, c=dims)
@settings(max_examples=500)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(a=dims, b=dims)
@settings(max_examples=500)
def test_commutativity(a, b):
    assert a * b == b * a


@given(a=dims)
@settings(max_examples=500)
def test_identity(a):
    assert a * DIMENSIONLESS == a
    assert DIMENSIONLESS * a == a


@given(a=dims)
@settings(max_examples=500)
def test_inverse(a):
    assert a * a.reciprocal() == DIMENSIONLESS
    assert a / a == DIMENSIONLESS


@given(a=dims, b=dims)
@settings(max_examples=500)
def test_division_is_inverse_multiplication(a, b):
    assert a / b == a * b.reciprocal()
    assert (a / b) * b == a


@given(a=dims, n=st.integers(0, 6))
@settings(max_examples=500)
def test_power_is_repeated_multiplication(a, n):
    acc = DIMENSIONLESS
    for _ in range(n):
        acc = acc * a
    assert a**n == acc


@given(a=dims, n=st.integers(-6, -1))
@settings(max_examples=200)
def test_negative_power(a, n):
    assert a**n == (a ** (-n)).reciprocal()


def test_base_vectors_are_unit_vectors():
    for b in BASE_DIMENSIONS:
        d = Dimension.base(b)
        assert d.exponent(b) == 1
        assert sum(abs(e) for e in d.exponents) == 1


def test_render_acceleration():
    d = Dimension.base(BaseDimension.LENGTH) / Dimension.base(BaseDimension.TIME) ** 2
    assert d.render() == "L^1·T^-2"


def test_render_dimensionless():
    assert DIMENSIONLESS.render() == "1"


def test_render_fixed_order():
    d = Dimension.of(matter=1, mass=2, temperature=-1)
    assert d.render() == "M^2·Θ^-1·N^1"


def test_of_kwargs():
    assert Dimension.of(length=1, time=-2) == Dimension((0, 1, -2, 0, 0, 0, 0))


def test_name_lookup_roundtrip():
    for b in BaseDimension:
        assert base_by_name(base_dimension_name(b)) is b
    assert base_by_name("Banana") is None


def test_parse_dimension_syntax():
    assert parse_dimension("Length/Time^2") == Dimension.of(length=1, time=-2)
    assert parse_dimension("Mass * Length^2 / Time^2") == Dimension.of(
        mass=1, length=2, time=-2
    )
    assert parse_dimension("1") == DIMENSIONLESS


def test_hashable_and_usable_as_keys():
    table = {Dimension.base(b): b for b in BaseDimension}
    assert table[Dimension.of(time=1)] is BaseDimension.TIME
