"""Random generators shared by the tests."""

from itertools import combinations

from defcoh import CochainSlice, DeRhamSlice, MultiVectorField, Poly, monomial_basis


def random_vector(rng, n, density=0.4, lo=-3, hi=3):
    return [rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(n)]


def random_cochain(rng, bundle, k, w, density=0.4):
    """A random element of the weight-``w`` slice in degree ``k``."""
    S = CochainSlice(bundle, k, w)
    return S.cochain(random_vector(rng, len(S), density))


def random_form(rng, A, E, p, w, density=0.5):
    S = DeRhamSlice(A, E, p, w)
    return S.cochain(random_vector(rng, len(S), density))


def random_poly(rng, base, deg, density=0.6):
    terms = {e: rng.randint(-3, 3) for e in monomial_basis(base, deg) if rng.random() < density}
    return Poly(base, terms)


def random_mvf(rng, base, k, max_deg=2):
    vals = {I: random_poly(rng, base, rng.randint(0, max_deg)) for I in combinations(range(base.n), k)}
    return MultiVectorField(base, k, vals)


def sign(n):
    return -1 if n % 2 else 1
