import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from defcoh import (
    PolyDerivation,
    RegularData,
    TMSlice,
    betti,
    build_action_ses,
    build_regular_ses,
    c2_complex,
    catalog,
    deformation_complex,
    tm_differential,
)


def _oracle_betti(C):
    dims = {k: C.dim(k) for k in C.degrees()}
    ranks = {k: oracles.rank(C.d(k)) for k in C.degrees()}
    return oracles.betti_by_rank(dims, ranks)


@pytest.mark.parametrize("w", [-1, 0, 1, 2])
def test_action_sequence_is_short_exact(w):
    A = catalog.sl2_on_plane()
    S = build_action_ses(A, w)
    assert S.violations() == []
    for k in S.degrees():
        assert S.mid.dim(k) == S.sub.dim(k) + S.quot.dim(k)


@pytest.mark.parametrize("w", [0, 1, 2])
def test_action_long_exact_sequence(w):
    from defcoh import les_from_ses

    A = catalog.sl2_on_plane()
    les = les_from_ses(build_action_ses(A, w))
    assert les.exact
    S = build_action_ses(A, w)
    assert les.h_mid == _oracle_betti(S.mid)
    chi = sum((-1) ** k * S.mid.dim(k) for k in S.degrees())
    assert chi == sum((-1) ** k * b for k, b in les.h_mid.items())


def test_action_sequence_needs_an_action_algebroid():
    with pytest.raises(TypeError):
        build_action_ses(catalog.sl2(), 0)


@pytest.mark.parametrize("w", [-1, 0, 1])
def test_deformation_betti_matches_rank_oracle(w):
    for A in (catalog.sl2_on_plane(), catalog.tangent(1), catalog.bundle_sl2()):
        C, _ = deformation_complex(A, w)
        assert betti(C) == _oracle_betti(C)


def test_regular_data_validation():
    A = catalog.tangent(1)
    x = A.base.vars()[0]
    with pytest.raises(ValueError):
        RegularData(A, [], [], [])
    with pytest.raises(ValueError):
        RegularData(A, [], [(x,)], [])
    with pytest.raises(ValueError):
        RegularData(A, [A.bundle.frame(0)], [], [PolyDerivation.coordinate(A.base, 0)])
    B = catalog.bundle_sl2()
    with pytest.raises(ValueError):
        RegularData(B, [B.bundle.frame(i) for i in range(3)], [], [PolyDerivation(B.base, [x])])


def test_regular_data_coordinates():
    A = catalog.bundle_sl2()
    R = catalog.bundle_sl2_regular_data(A)
    s = tuple(A.base.vars()[0] * c for c in A.bundle.frame(1))
    assert R.section_coords(s) == s
    assert R.g_rep.rank == 3 and R.nu_rep.rank == 1


@pytest.mark.parametrize("make", ["tangent", "bundle"])
@pytest.mark.parametrize("w", [-1, 0, 1])
def test_regular_sequences(make, w):
    if make == "tangent":
        A = catalog.tangent(2)
        R = catalog.tangent_regular_data(A)
    else:
        A = catalog.bundle_sl2()
        R = catalog.bundle_sl2_regular_data(A)
    res = build_regular_ses(R, w)
    assert res.c2_acyclic
    assert res.exact
    C2, _ = c2_complex(A, w)
    assert not any(_oracle_betti(C2).values())
    for row in res.composite:
        assert row["DH"] == res.les1.h_mid.get(row["degree"], 0)


def test_tangent_model_is_rigid():
    A = catalog.tangent(2)
    res = build_regular_ses(catalog.tangent_regular_data(A), 0)
    assert not any(row["DH"] for row in res.composite)


def test_tm_slice_round_trip():
    A = catalog.sl2_on_plane()
    S = TMSlice(A, 2, 0)
    for i, c in enumerate(S):
        v = S.vector(c)
        assert v[i] == 1
        assert S.cochain(v) == c


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2))
def test_c2_differential_matches_slice_matrix(seed, n):
    rng = random.Random(seed)
    A = catalog.sl2_on_plane()
    C, slices = c2_complex(A, 0)
    vec = [rng.randint(-2, 2) for _ in range(len(slices[n]))]
    c = slices[n].cochain(vec)
    assert slices[n + 1].vector(tm_differential(c)) == tuple(C.d(n) @ vec)


@pytest.mark.parametrize("w", [0, 1])
def test_zero_action_sequence_is_exact(w):
    from defcoh import BaseSpec, build_action_algebroid, les_from_ses

    B = BaseSpec.standard(1)
    A = build_action_algebroid(catalog.SL2_BRACKETS, [PolyDerivation(B)] * 3, B, names=("h", "e", "f"))
    les = les_from_ses(build_action_ses(A, w))
    assert les.exact
    assert les.connecting
