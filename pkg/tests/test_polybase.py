from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from defcoh import BaseSpec, Poly, PolyDerivation, PolynomialSyntaxError, monomial_basis, parse_family_poly, parse_poly

B = BaseSpec(("x", "y"), (1, 2))


@st.composite
def polys(draw, base=B, max_weight=4):
    terms = {}
    for w in range(max_weight + 1):
        for e in monomial_basis(base, w):
            c = draw(st.integers(-4, 4))
            if c:
                terms[e] = Fraction(c, draw(st.integers(1, 3)))
    return Poly(base, terms)


@st.composite
def fields(draw, base=B):
    return PolyDerivation(base, [draw(polys(base, 3)) for _ in range(base.n)])


def test_parse_example():
    p = parse_poly("3/2*x^2*y - y", B)
    assert p.coefficient((2, 1)) == Fraction(3, 2)
    assert p.coefficient((0, 1)) == -1
    assert str(p) == "3/2*x^2*y - y"


@pytest.mark.parametrize("text,pos", [("x^", 2), ("2x", 1), ("x + * y", 4), ("z", 0)])
def test_parse_errors_are_positioned(text, pos):
    with pytest.raises(PolynomialSyntaxError) as err:
        parse_poly(text, B)
    assert err.value.position == pos


@given(polys())
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), B) == p
    assert oracles.to_sympy(p, B).expand() == oracles.to_sympy(parse_poly(str(p), B), B).expand()


def test_family_split():
    split = parse_family_poly("x + t*y - 2*t^2", B)
    assert split[0] == B.var(0) and split[1] == B.var(1) and split[2] == B.const(-2)
    with pytest.raises(ValueError):
        parse_family_poly("t", BaseSpec(("t",), (1,)))


def test_monomial_basis_examples():
    assert monomial_basis(B, 0) == ((0, 0),)
    assert set(monomial_basis(B, 3)) == {(3, 0), (1, 1)}
    assert monomial_basis(B, -1) == ()


@given(st.integers(0, 8))
def test_monomial_basis_weights(w):
    basis = monomial_basis(B, w)
    assert all(B.monomial_weight(e) == w for e in basis)
    assert len(set(basis)) == len(basis)


def test_weights_validated():
    with pytest.raises(ValueError):
        BaseSpec(("x",), (0,))
    with pytest.raises(ValueError):
        BaseSpec(("x", "x"), (1, 1))


@given(fields(), polys(), polys())
def test_leibniz(X, f, g):
    assert X.apply(f * g) == X.apply(f) * g + f * X.apply(g)


@given(fields(), fields(), fields())
def test_jacobi(X, Y, Z):
    total = X.bracket(Y.bracket(Z)) + Y.bracket(Z.bracket(X)) + Z.bracket(X.bracket(Y))
    assert total.is_zero()


@given(polys())
def test_derivative_matches_sympy(p):
    x, y = oracles.symbols_of(B)
    assert oracles.to_sympy(p.diff(0), B) - oracles.sympy_diff(oracles.to_sympy(p, B), x) == 0


def test_coordinate_field_weight():
    d = PolyDerivation.coordinate(B, 1)
    assert d.weight() == -2
    f = parse_poly("x^2*y", B)
    assert f.weight() == 4 and d.apply(f).weight() == 2


def test_field_action_and_bracket_examples():
    P = BaseSpec(("x", "y"), (1, 1))
    x, y = P.vars()
    X = PolyDerivation(P, [y, x])
    assert X.apply(x * y) == x * x + y * y
    dx = PolyDerivation.coordinate(P, 0)
    xdx = PolyDerivation(P, [x, P.zero()])
    assert dx.bracket(xdx) == dx
