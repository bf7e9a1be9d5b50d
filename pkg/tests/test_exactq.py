from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gerstenhaber.exactq import (
    ComplexError,
    FiniteComplex,
    RationalMatrix,
    exact,
    format_rational,
    homology_dims,
    nullity,
    parse_rational,
    pivot_columns,
    rank,
)

rationals = st.one_of(st.just(Fraction(0)), st.fractions(min_value=-20, max_value=20, max_denominator=7))


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(rationals, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_rank_examples():
    assert rank(RationalMatrix.from_rows([[1, 0], [0, 1]])) == 2
    assert rank(RationalMatrix.zero(2, 2)) == 0
    assert rank(RationalMatrix.from_rows([[1, 2], [2, 4]])) == 1


def test_parse_and_format():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational(" +4 ") == 4
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(5) == "5"
    assert isinstance(exact(Fraction(4, 2)), int)
    for bad in ["1/0", "1.5", "", "a/b", True, 1.0]:
        with pytest.raises(ValueError):
            parse_rational(bad)


@given(rationals)
def test_format_parse_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    m = RationalMatrix.from_rows(rows)
    assert rank(m) == sympy.Matrix(rows).rank()
    assert rank(m) == rank(m.T)
    assert nullity(m) == len(rows[0]) - rank(m)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_pivot_columns_restrict_injectively(rows):
    piv = pivot_columns(RationalMatrix.from_rows(rows))
    assert len(piv) == rank(RationalMatrix.from_rows(rows))
    sub = [[r[c] for c in piv] for r in rows]
    assert sympy.Matrix(sub).rank() == len(piv) if piv else True


def test_homology_examples():
    single = FiniteComplex(0, (1,), ())
    assert homology_dims(single) == (1,)
    iso = FiniteComplex.from_matrices(0, (1, 1), [[[1]]])
    assert homology_dims(iso) == (0, 0)
    c = FiniteComplex.from_matrices(0, (2, 1), [[[1, -1]]])
    assert homology_dims(c) == (1, 0)


def test_complex_errors():
    with pytest.raises(ComplexError):
        FiniteComplex.from_matrices(0, (2, 2), [[[1, 0]]])
    bad = FiniteComplex.from_matrices(0, (1, 1, 1), [[[1]], [[1]]])
    with pytest.raises(ComplexError) as err:
        homology_dims(bad)
    assert err.value.degree == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
def test_euler_characteristic_equals_homology_alternating_sum(a, b, c, data):
    # build d1 d0 = 0 by taking d1 with rows in the left kernel of d0's image
    d0 = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=a, max_size=a), min_size=b, max_size=b))
    ker = sympy.Matrix(d0).T.nullspace()
    coeffs = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=len(ker), max_size=len(ker)),
                                min_size=c, max_size=c))
    d1 = [[sum((co[k] * ker[k][j] for k in range(len(ker))), sympy.Integer(0)) for j in range(b)] for co in coeffs]
    d1 = [[Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in row] for row in d1]
    cx = FiniteComplex.from_matrices(0, (a, b, c), [d0, d1])
    h = homology_dims(cx)
    assert all(x >= 0 for x in h)
    assert sum((-1) ** i * x for i, x in enumerate(h)) == cx.euler_characteristic()
