import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from helpers import random_cochain, random_mvf, random_poly, sign
from defcoh import (
    BaseSpec,
    MultiVectorField,
    PolyDerivation,
    PolyOneForm,
    catalog,
    contract,
    d_x_formula,
    d_x_map,
    dual_base,
    embed_poisson,
    gerstenhaber_bracket,
    is_poisson,
    linear_mvf_correspondence,
    poisson_betti,
    poisson_complex,
    poisson_embedding_map,
    schouten_bracket,
    sharp,
)

seeds = st.integers(0, 2**32 - 1)
B3 = BaseSpec.standard(3)


@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_schouten_matches_grassmann_oracle(seed, p, q):
    assume(p + q >= 1)
    rng = random.Random(seed)
    P, Q = random_mvf(rng, B3, p), random_mvf(rng, B3, q)
    syms = oracles.symbols_of(B3)
    expect = oracles.schouten(oracles.mvf_to_sympy(P), p, oracles.mvf_to_sympy(Q), q, syms)
    assert oracles.mvf_equal(oracles.mvf_to_sympy(schouten_bracket(P, Q)), expect)


@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_schouten_graded_antisymmetry(seed, p, q):
    assume(p + q >= 1)
    rng = random.Random(seed)
    P, Q = random_mvf(rng, B3, p), random_mvf(rng, B3, q)
    assert schouten_bracket(P, Q) == -schouten_bracket(Q, P).scale(sign((p - 1) * (q - 1)))


@given(seeds)
def test_poisson_test_agrees_with_oracle(seed):
    rng = random.Random(seed)
    P = random_mvf(rng, B3, 2, 1)
    syms = oracles.symbols_of(B3)
    S = oracles.mvf_to_sympy(P)
    assert is_poisson(P) == (not oracles.schouten(S, 2, S, 2, syms))


def test_so3_is_poisson():
    assert is_poisson(catalog.so3_bivector())
    assert not is_poisson(random_mvf(random.Random(0), B3, 3))


def test_sharp_of_so3():
    pi = catalog.so3_bivector()
    x1, x2, x3 = B3.vars()
    z = B3.zero()
    assert sharp(pi, [PolyOneForm.coordinate(B3, 0)]) == PolyDerivation(B3, [z, x3, -x2])
    with pytest.raises(ValueError):
        sharp(pi, [])


def test_contractions():
    pi = catalog.so3_bivector()
    dx = [PolyOneForm.coordinate(B3, a) for a in range(3)]
    assert contract(pi, [dx[0], dx[1]]) == B3.vars()[2]
    assert contract(pi, [dx[1], dx[0]]) == -B3.vars()[2]
    assert contract(pi, [dx[0]]).degree == 1
    with pytest.raises(ValueError):
        contract(pi, dx)


def _random_form(rng):
    return PolyOneForm(B3, [random_poly(rng, B3, rng.randint(0, 1)) for _ in range(3)])


@given(seeds, st.integers(0, 3))
def test_d_x_map_matches_the_invariant_formula(seed, k):
    rng = random.Random(seed)
    pi = catalog.so3_bivector()
    X = random_mvf(rng, B3, k)
    D = d_x_map(X, pi)
    forms = [_random_form(rng) for _ in range(k)]
    value = D(*[tuple(w.coeffs) for w in forms])
    assert PolyOneForm(B3, list(value)) == d_x_formula(X, forms)


@given(seeds, st.integers(0, 3))
def test_embedding_is_a_chain_map(seed, k):
    rng = random.Random(seed)
    A = catalog.so3_cotangent()
    X = random_mvf(rng, B3, k)
    cert = embed_poisson(X, catalog.so3_bivector(), A)
    assert cert.chain_map


def test_bivector_gives_the_structure_cochain():
    A = catalog.so3_cotangent()
    assert d_x_map(catalog.so3_bivector(), A) == A.m


def test_so3_poisson_cohomology():
    b = poisson_betti(catalog.so3_bivector(), [0])
    assert [b[(k, 0)] for k in range(4)] == [1, 0, 0, 1]


def test_zero_bivector_cohomology_is_everything():
    B = BaseSpec.standard(2)
    pi = MultiVectorField(B, 2)
    for w in range(-1, 2):
        C, slices = poisson_complex(pi, w)
        b = poisson_betti(pi, [w])
        assert all(b[(k, w)] == len(slices[k]) for k in range(3))


def test_non_poisson_complex_is_rejected():
    x1, x2, x3 = B3.vars()
    pi = MultiVectorField(B3, 2, {(0, 1): B3.const(1), (1, 2): x2})
    S = oracles.mvf_to_sympy(pi)
    assert oracles.schouten(S, 2, S, 2, oracles.symbols_of(B3))
    assert not is_poisson(pi)
    with pytest.raises(ValueError):
        poisson_complex(pi, 0)


def test_slice_embedding_has_no_defects():
    pi = catalog.so3_bivector()
    for w in range(-1, 2):
        f, defects = poisson_embedding_map(pi, w)
        assert defects == []


def test_linear_correspondence_round_trip():
    A = catalog.sl2()
    rng = random.Random(9)
    for k in range(4):
        c = random_cochain(rng, A.bundle, k, 0, 0.8)
        X = linear_mvf_correspondence("to_mvf", c, A)
        assert linear_mvf_correspondence("to_cochain", X, A) == c
        ys = oracles.symbols_of(dual_base(A))
        tensor = {I: [v.constant_term() for v in val] for I, val in c.tensor.items()}
        assert oracles.mvf_equal(oracles.mvf_to_sympy(X), oracles.linear_field_of_cochain(tensor, ys))


@given(seeds, st.integers(0, 3), st.integers(1, 3))
def test_linear_correspondence_is_a_bracket_map(seed, p, q):
    rng = random.Random(seed)
    A = catalog.heisenberg()
    c1 = random_cochain(rng, A.bundle, p, 0, 0.6)
    c2 = random_cochain(rng, A.bundle, q, 0, 0.6)
    X1 = linear_mvf_correspondence("to_mvf", c1, A)
    X2 = linear_mvf_correspondence("to_mvf", c2, A)
    lhs = linear_mvf_correspondence("to_mvf", gerstenhaber_bracket(c1, c2), A)
    assert lhs == schouten_bracket(X1, X2)


def test_lie_algebra_structure_is_a_linear_poisson_bivector():
    A = catalog.sl2()
    assert is_poisson(linear_mvf_correspondence("to_mvf", A.m, A))


def test_correspondence_rejects_nonlinear_and_based():
    A = catalog.sl2()
    D = dual_base(A)
    y = D.vars()
    with pytest.raises(ValueError):
        linear_mvf_correspondence("to_cochain", MultiVectorField(D, 1, {(0,): y[0] * y[1]}), A)
    with pytest.raises(ValueError):
        linear_mvf_correspondence("sideways", A.m, A)
    T = catalog.tangent(1)
    with pytest.raises(ValueError):
        linear_mvf_correspondence("to_mvf", T.m, T)


def test_bracket_of_two_functions_is_undefined():
    f = MultiVectorField.function(B3.vars()[0])
    with pytest.raises(ValueError):
        schouten_bracket(f, f)


@given(seeds, st.integers(0, 3), st.integers(1, 3))
def test_d_x_intertwines_brackets(seed, p, q):
    rng = random.Random(seed)
    A = catalog.so3_cotangent()
    X, Y = random_mvf(rng, B3, p), random_mvf(rng, B3, q)
    assert d_x_map(schouten_bracket(X, Y), A) == gerstenhaber_bracket(d_x_map(X, A), d_x_map(Y, A))


@given(seeds, st.integers(1, 2), st.integers(0, 2), st.integers(0, 2))
def test_schouten_leibniz_rule(seed, p, q, r):
    from defcoh import wedge

    rng = random.Random(seed)
    X, Y, Z = random_mvf(rng, B3, p, 1), random_mvf(rng, B3, q, 1), random_mvf(rng, B3, r, 1)
    assume(q + r <= 3)
    lhs = schouten_bracket(X, wedge(Y, Z))
    rhs = wedge(schouten_bracket(X, Y), Z) + wedge(Y, schouten_bracket(X, Z)).scale(sign((p - 1) * q))
    assert lhs == rhs


@given(seeds, st.integers(1, 2), st.integers(1, 2), st.integers(1, 2))
def test_schouten_graded_jacobi(seed, p, q, r):
    rng = random.Random(seed)
    X, Y, Z = random_mvf(rng, B3, p, 1), random_mvf(rng, B3, q, 1), random_mvf(rng, B3, r, 1)
    lhs = schouten_bracket(X, schouten_bracket(Y, Z))
    rhs = schouten_bracket(schouten_bracket(X, Y), Z) + schouten_bracket(Y, schouten_bracket(X, Z)).scale(
        sign((p - 1) * (q - 1))
    )
    assert lhs == rhs


def test_sharp_convention_on_the_plane():
    B = BaseSpec.standard(2)
    pi = MultiVectorField(B, 2, {(0, 1): B.const(1)})
    dx = [PolyOneForm.coordinate(B, a) for a in range(2)]
    assert sharp(pi, [dx[0]]) == PolyDerivation.coordinate(B, 1)
    assert contract(pi, dx) == B.const(1)


def test_symplectic_plane_matches_de_rham_model():
    from defcoh import Representation, derham_betti, derham_complex

    B = BaseSpec.standard(2)
    pi = MultiVectorField(B, 2, {(0, 1): B.const(1)})
    T = catalog.tangent(2)
    E = Representation.trivial(T)
    for w in range(-1, 4):
        P, _ = poisson_complex(pi, w)
        D, _ = derham_complex(T, E, w)
        assert [P.dim(k) for k in range(3)] == [D.dim(k) for k in range(3)]
        pb, db = poisson_betti(pi, [w]), derham_betti(T, E, [w])
        assert [pb[(k, w)] for k in range(3)] == [db[(k, w)] for k in range(3)]


def test_so3_lie_algebra_maps_to_the_so3_bivector():
    from defcoh import build_lie_algebra

    g = build_lie_algebra({(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)})
    X = linear_mvf_correspondence("to_mvf", g.m, g, dual=B3)
    assert X == catalog.so3_bivector()


def test_poisson_family_embeds_as_the_deformation_cocycle():
    from defcoh import BracketFamily, build_cotangent_algebroid, family_cocycle, validate_family

    pi = catalog.so3_bivector()
    x1 = B3.vars()[0]
    dpi = MultiVectorField(B3, 2, {(1, 2): x1})
    assert is_poisson(pi + dpi) and is_poisson(pi + dpi.scale(5))
    A = catalog.so3_cotangent()
    F = BracketFamily(A.bundle, [A.m, d_x_map(dpi, A)])
    assert validate_family(F).passed
    assert F.specialize(1).m == build_cotangent_algebroid(pi + dpi).m
    cls = family_cocycle(F, 0)
    assert cls.cocycle == embed_poisson(dpi, pi, A).cochain
