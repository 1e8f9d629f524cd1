"""Acceptance criteria, exact throughout.

Each test records its outcome in ``conftest.ACCEPTANCE``; the terminal
summary prints one PASS/FAIL line per criterion.  Run alone with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

import oracles
from conftest import ACCEPTANCE
from helpers import random_cochain, random_form, random_mvf, random_poly, sign

from defcoh import (
    Representation,
    betti_def,
    build_action_ses,
    build_cotangent_algebroid,
    build_regular_ses,
    conjugate_family,
    d_x_map,
    deformation_complex,
    derham_betti,
    derham_complex,
    derham_differential,
    differential,
    dual_base,
    embed_poisson,
    explicit_coboundary,
    family_cocycle,
    gerstenhaber_bracket,
    is_poisson,
    les_from_ses,
    lie_derivative_action,
    linear_mvf_correspondence,
    MultiVectorField,
    poisson_embedding_map,
    rank_kernel,
    RegularData,
    schouten_bracket,
    tangent_homotopy,
    top_degree,
    triviality_solve,
    variation_map,
    adjoint_representation,
    BaseSpec,
)
from defcoh import catalog
from defcoh.algebroid import _constants_array
from defcoh.cli import parse_document, render, run_command

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(n, title):
    ACCEPTANCE[n] = (title, False)
    yield
    ACCEPTANCE[n] = (title, True)


def dgla_examples():
    return {
        "sl2": catalog.sl2(),
        "h3": catalog.heisenberg(),
        "abelian3": catalog.abelian(3),
        "tangent1": catalog.tangent(1),
        "tangent2": catalog.tangent(2),
        "sl2 x Q2": catalog.sl2_on_plane(),
        "so3 cotangent": catalog.so3_cotangent(),
    }


# -- 1 --------------------------------------------------------------------------------


def test_c01_dgla_axioms():
    with criterion(1, "dgla axioms of the bracket and delta^2 = 0"):
        start = time.perf_counter()
        rng = random.Random(101)
        for name, A in dgla_examples().items():
            pairs = triples = 0
            while triples < 100:
                ks = [rng.randint(0, 3) for _ in range(3)]
                if ks.count(0) > 1:
                    continue
                ws = [rng.randint(-1, 1) for _ in range(3)]
                X, Y, Z = (random_cochain(rng, A.bundle, k, w) for k, w in zip(ks, ws))
                p, q = ks[0] - 1, ks[1] - 1
                assert gerstenhaber_bracket(X, Y) == -gerstenhaber_bracket(Y, X).scale(sign(p * q)), name
                pairs += 1
                lhs = gerstenhaber_bracket(X, gerstenhaber_bracket(Y, Z))
                rhs = gerstenhaber_bracket(gerstenhaber_bracket(X, Y), Z) + gerstenhaber_bracket(
                    Y, gerstenhaber_bracket(X, Z)
                ).scale(sign(p * q))
                assert lhs == rhs, name
                triples += 1
            assert pairs >= 100
            for w in range(-2, 3):
                _, slices = deformation_complex(A, w)
                for k in range(top_degree(A) + 1):
                    for D in slices[k]:
                        assert not differential(differential(D, A), A), (name, w, k)
        assert time.perf_counter() - start < 120


# -- 2 --------------------------------------------------------------------------------


def test_c02_dual_path_differential():
    with criterion(2, "dual-path differential and symbol identity"):
        rng = random.Random(202)
        for name, A in dgla_examples().items():
            base = A.base
            for _ in range(40):
                k, w = rng.randint(0, 3), rng.randint(-1, 1)
                D = random_cochain(rng, A.bundle, k, w)
                dD = differential(D, A)
                assert dD == differential(D, A, path="bracket"), name
                # the symbol of delta D is the Leibniz defect of the formula in the last slot
                secs = [
                    tuple(random_poly(rng, base, rng.randint(0, 1)) for _ in range(A.rank))
                    for _ in range(k)
                ]
                f = random_poly(rng, base, rng.randint(1, 2)) if base.n else base.const(rng.randint(-3, 3))
                b = rng.randrange(A.rank)
                defect = oracles.leibniz_defect(
                    lambda s: explicit_coboundary(A, D, s), A.bundle, secs, f, b
                )
                assert defect == dD.symbol_at(*secs).apply(f), name


# -- 3 --------------------------------------------------------------------------------


def test_c03_lie_algebra_collapse():
    with criterion(3, "Lie algebra collapse: sl2 matrices equal CE adjoint; Betti values"):
        A = catalog.sl2()
        c = _constants_array(catalog.SL2_BRACKETS, 3)
        C, slices = deformation_complex(A, 0)
        for k in range(0, 3):
            ref = oracles.ce_adjoint_differential(c, k)
            M = C.d(k)
            for col, (_, I, b, _) in enumerate(slices[k].keys):
                for row, (_, J, l, _) in enumerate(slices[k + 1].keys):
                    assert M[row, col] == ref[(I, b)].get((J, l), 0)
        got = betti_def(A, [0])
        assert [got[(k, 0)] for k in range(4)] == [0, 0, 0, 0]
        ranks = {k: oracles.rank(C.d(k)) for k in range(0, 3)}
        assert oracles.betti_by_rank({k: C.dim(k) for k in range(4)}, ranks) == {k: 0 for k in range(4)}
        ab = catalog.abelian(2)
        got = betti_def(ab, [0])
        assert [got[(k, 0)] for k in range(3)] == [2, 4, 2]


# -- 4 --------------------------------------------------------------------------------


def test_c04_tangent_acyclicity():
    with criterion(4, "tangent acyclicity and homotopy reconstruction"):
        for n in (1, 2):
            A = catalog.tangent(n)
            for w in range(-2, 4):
                b = betti_def(A, [w])
                assert not any(b.values()), (n, w, b)
                C, slices = deformation_complex(A, w)
                for k in C.degrees():
                    _, cycles = rank_kernel(C.d(k))
                    for z in cycles:
                        D = slices[k].cochain(z)
                        assert k >= 1
                        assert tangent_homotopy(A, D) == D


# -- 5 --------------------------------------------------------------------------------


def test_c05_action_les():
    with criterion(5, "action LES for sl2 acting on Q^2, weights 0..2"):
        A = catalog.sl2_on_plane()
        for w in range(0, 3):
            S = build_action_ses(A, w)
            assert S.violations() == []
            L = les_from_ses(S)
            assert all(L.exact_at) and L.exact


# -- 6 --------------------------------------------------------------------------------


def test_c06_regular_machinery():
    with criterion(6, "regular case: C2 acyclicity and point-case collapse"):
        for n in (1, 2):
            T = catalog.tangent(n)
            R = catalog.tangent_regular_data(T)
            for w in range(-2, 3):
                RS = build_regular_ses(R, w)
                assert RS.c2_acyclic and RS.exact, (n, w)
        Bn = catalog.bundle_sl2()
        R = catalog.bundle_sl2_regular_data(Bn)
        for w in range(-1, 3):
            RS = build_regular_ses(R, w)
            assert RS.c2_acyclic and RS.exact, w
        g = catalog.sl2()
        R = RegularData(g, [g.bundle.frame(i) for i in range(3)], [], [])
        RS = build_regular_ses(R, 0)
        assert RS.c2_acyclic and RS.exact
        adj = derham_betti(g, adjoint_representation(g), [0])
        dh = betti_def(g, [0])
        for row in RS.composite:
            k = row["degree"]
            assert row["DH"] == row["H(A;g)"] == adj.get((k, 0), 0) == dh.get((k, 0), 0)
            assert row["H(A;nu) shifted"] == 0


# -- 7 --------------------------------------------------------------------------------


def _poisson_examples():
    out = []
    B1 = BaseSpec.standard(1)
    out.append(MultiVectorField(B1, 2, {}))
    B2 = BaseSpec.standard(2)
    out.append(MultiVectorField(B2, 2, {(0, 1): B2.one()}))
    out.append(MultiVectorField(B2, 2, {(0, 1): B2.var(0)}))
    out.append(catalog.so3_bivector())
    return out


def test_c07_poisson_bridge():
    with criterion(7, "Poisson bridge: D_X is a bracket map and a chain map"):
        pi = catalog.so3_bivector()
        assert is_poisson(pi)
        syms = oracles.symbols_of(pi.base)
        P = oracles.mvf_to_sympy(pi)
        assert oracles.schouten(P, 2, P, 2, syms) == {}
        A = build_cotangent_algebroid(pi)
        D = d_x_map(pi, A)
        assert D.tensor == A.m.tensor and D.symbol == A.m.symbol
        rng = random.Random(707)
        count = 0
        for p in _poisson_examples():
            Ap = build_cotangent_algebroid(p)
            base = p.base
            for _ in range(15):
                X = random_mvf(rng, base, rng.randint(0, base.n), 2)
                Y = random_mvf(rng, base, rng.randint(0, base.n), 2)
                if X.degree == 0 and Y.degree == 0:
                    Y = random_mvf(rng, base, 1, 2)
                assert d_x_map(schouten_bracket(X, Y), Ap) == gerstenhaber_bracket(
                    d_x_map(X, Ap), d_x_map(Y, Ap)
                )
                assert embed_poisson(X, p, Ap).chain_map
                count += 1
            for w in range(-1, 3):
                _, defects = poisson_embedding_map(p, w, Ap)
                assert defects == []
        assert count >= 50


# -- 8 --------------------------------------------------------------------------------


def test_c08_linear_correspondence():
    with criterion(8, "linear correspondence: round trip and bracket morphism"):
        rng = random.Random(808)
        algebras = [
            catalog.aff1_scaling().specialize(0),
            catalog.abelian(2),
            catalog.sl2(),
            catalog.heisenberg(),
        ]
        for g in algebras:
            dual = dual_base(g)
            ys = oracles.symbols_of(dual)
            for _ in range(50):
                k1, k2 = rng.randint(0, g.rank), rng.randint(0, g.rank)
                if k1 == 0 and k2 == 0:
                    k2 = 1
                c1 = random_cochain(rng, g.bundle, k1, 0, 0.7)
                c2 = random_cochain(rng, g.bundle, k2, 0, 0.7)
                X1 = linear_mvf_correspondence("to_mvf", c1, g, dual)
                X2 = linear_mvf_correspondence("to_mvf", c2, g, dual)
                assert linear_mvf_correspondence("to_cochain", X1, g, dual) == c1
                assert oracles.mvf_equal(
                    oracles.mvf_to_sympy(X1),
                    oracles.linear_field_of_cochain(
                        {I: [p.constant_term() for p in v] for I, v in c1.tensor.items()}, ys
                    ),
                )
                br = linear_mvf_correspondence("to_mvf", gerstenhaber_bracket(c1, c2), g, dual)
                ref = oracles.schouten(oracles.mvf_to_sympy(X1), k1, oracles.mvf_to_sympy(X2), k2, ys)
                assert oracles.mvf_equal(oracles.mvf_to_sympy(br), ref)
                assert br == schouten_bracket(X1, X2)


# -- 9 --------------------------------------------------------------------------------


def test_c09_deformation_classes():
    with criterion(9, "deformation classes of the example families"):
        F = catalog.abelian_family()
        cls = family_cocycle(F, 0)
        assert cls.is_cocycle and not cls.is_zero and cls.primitive is None
        A0 = F.specialize(0)
        C, slices = deformation_complex(A0, 0)
        vec = slices[2].vector(cls.cocycle)
        assert not oracles.in_column_span(C.d(1), vec)
        G = catalog.aff1_scaling()
        for t, sol in zip((0, 1, Fraction(-1, 2)), triviality_solve(G, samples=[0, 1, Fraction(-1, 2)])):
            assert sol.solved and not any(sol.class_coords)
            assert differential(sol.primitive, G.specialize(t)) == G.derivative_cochain(t)
        for A in (catalog.sl2(), catalog.heisenberg(), catalog.tangent(2), catalog.so3_cotangent()):
            H = catalog.constant_family(A)
            for t in (0, 1, Fraction(2, 3)):
                c = family_cocycle(H, t)
                assert c.cocycle.is_zero() and c.is_zero
        rng = random.Random(909)
        for fam in (F, G):
            A0 = fam.specialize(0)
            for _ in range(5):
                Dc = random_cochain(rng, fam.bundle, 1, 0, 0.8)
                H = conjugate_family(fam, Dc)
                assert fam.derivative_cochain(0) - H.derivative_cochain(0) == differential(Dc, A0)


# -- 10 -------------------------------------------------------------------------------


def test_c10_lie_derivative_action():
    with criterion(10, "L_D action and the variation map"):
        for A in (catalog.sl2_on_plane(), catalog.tangent(2), catalog.so3_cotangent(), catalog.sl2()):
            E = Representation.trivial(A)
            for w in range(-1, 2):
                C, slices = derham_complex(A, E, w)
                for p in C.degrees():
                    for c in slices[p]:
                        assert lie_derivative_action(A.m, c) == derham_differential(c)
        rng = random.Random(1010)
        for A in (catalog.sl2_on_plane(), catalog.tangent(2)):
            E = Representation.trivial(A)
            done = 0
            while done < 30:
                k1, k2, p = rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2)
                if (k1 - 1) + (k2 - 1) + p > A.rank or (k1 - 1) + (k2 - 1) + p < 0:
                    continue
                D1 = random_cochain(rng, A.bundle, k1, rng.randint(-1, 1))
                D2 = random_cochain(rng, A.bundle, k2, rng.randint(-1, 1))
                c = random_form(rng, A, E, p, rng.randint(0, 1))
                lhs = lie_derivative_action(gerstenhaber_bracket(D1, D2), c)
                rhs = lie_derivative_action(D1, lie_derivative_action(D2, c)) - lie_derivative_action(
                    D2, lie_derivative_action(D1, c)
                ).scale(sign((k1 - 1) * (k2 - 1)))
                assert lhs == rhs
                done += 1
        for F in (catalog.abelian_family(), catalog.aff1_scaling()):
            for t0 in (0, 1):
                A = F.specialize(t0)
                E = Representation.trivial(A)
                C, slices = derham_complex(A, E, 0)
                checked = 0
                for p in C.degrees():
                    _, cycles = rank_kernel(C.d(p))
                    for z in cycles:
                        r = variation_map(F, slices[p].cochain(z), t0)
                        assert r.certified
                        checked += 1
                assert checked


# -- 11 -------------------------------------------------------------------------------


def corpus_commands():
    out = []
    for path in sorted(CORPUS.glob("*.json")):
        doc = parse_document(path.read_bytes())
        f = str(path)
        out.append(["validate", f])
        if doc.kind in ("algebroid", "family"):
            out.append(["betti", f, "--weights=-1..1"])
        if doc.kind == "family":
            out.append(["defclass", f, "--t=0,1,-1/2"])
            out.append(["defclass", f, "--ansatz-degree", "2"])
        if doc.kind == "poisson":
            out.append(["poisson", f, "--weights=-1..1"])
        if doc.regular is not None:
            out.append(["les", f, "--kind", "regular", "--weights=-1..1"])
        if doc.kind == "algebroid" and doc.base.n and not any(doc.algebroid.weights) and doc.constant_brackets:
            out.append(["les", f, "--kind", "action", "--weights", "0..2"])
    return out


def test_c11_cli_determinism():
    with criterion(11, "CLI determinism on the corpus; all corpus documents validate"):
        docs = sorted(CORPUS.glob("*.json"))
        assert len(docs) >= 10
        for path in docs:
            out = run_command(["validate", str(path)])
            assert out.code == 0, path
        for argv in corpus_commands():
            for fmt in ("json", "text"):
                first = run_command(argv + ["--format", fmt])
                second = run_command(argv + ["--format", fmt])
                assert first.code == 0, argv
                assert render(first.report, fmt).encode() == render(second.report, fmt).encode()
        for path in sorted((CORPUS / "invalid").glob("*.json")):
            assert run_command(["validate", str(path)]).code == 1


if __name__ == "__main__":
    # hypothesis is already imported here, so pytest cannot rewrite it
    sys.exit(pytest.main([__file__, "-v", "-W", "ignore::pytest.PytestAssertRewriteWarning"]))
