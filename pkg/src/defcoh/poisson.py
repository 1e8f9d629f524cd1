"""Polynomial multivector fields on affine space.

Includes the Schouten bracket (expanded into decomposables), contractions
with one-forms, the multiderivation ``D_X`` of the cotangent bundle
attached to a multivector ``X``, Poisson cohomology slices with their
embedding into the deformation complex, and the correspondence between
cochains of a Lie algebra and linear multivector fields on its dual.

Weights: ``d/dx_a`` has weight ``-w(x_a)``, so ``f d/dx_I`` has weight
``w(f) - sum_{a in I} w(x_a)``.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from ._exterior import increasing_tuples, perm_sign, sort_with_sign
from .defcomplex import (
    DefCochain,
    FrameBundle,
    deformation_complex,
    differential,
)
from .polybase import BaseSpec, Poly, PolyDerivation, monomial_basis
from .ratlin import ComplexMap, FiniteComplex, RatMatrix, betti

__all__ = [
    "MultiVectorField",
    "PolyOneForm",
    "schouten_bracket",
    "wedge",
    "contract",
    "sharp",
    "is_poisson",
    "d_x_map",
    "d_x_formula",
    "cotangent_bundle",
    "poisson_complex",
    "poisson_betti",
    "embed_poisson",
    "poisson_embedding_map",
    "linear_mvf_correspondence",
    "dual_base",
]


def _sign(n):
    return -1 if n % 2 else 1


class MultiVectorField:
    """``sum_I f_I d/dx_I`` over increasing index tuples ``I`` of length ``degree``."""

    __slots__ = ("base", "degree", "values")

    def __init__(self, base, degree, values=None):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.base, self.degree = base, degree
        vals = {}
        for key, f in (values or {}).items():
            sign, key2 = sort_with_sign(key)
            if len(key) != degree or any(not 0 <= a < base.n for a in key):
                raise ValueError(f"bad index tuple {key} for degree {degree}")
            if not sign:
                continue
            f = f if isinstance(f, Poly) else base.const(f)
            if sign < 0:
                f = -f
            vals[key2] = vals[key2] + f if key2 in vals else f
        self.values = {k: v for k, v in vals.items() if v}

    @classmethod
    def function(cls, f):
        return cls(f.base, 0, {(): f})

    @classmethod
    def from_field(cls, X):
        return cls(X.base, 1, {(a,): p for a, p in enumerate(X.coeffs) if p})

    def coefficient(self, idx):
        sign, key = sort_with_sign(idx)
        if not sign:
            return Poly(self.base)
        f = self.values.get(key)
        if f is None:
            return Poly(self.base)
        return f if sign > 0 else -f

    def is_zero(self):
        return not self.values

    def __bool__(self):
        return bool(self.values)

    def weights(self):
        out = set()
        for I, f in self.values.items():
            s = sum(self.base.weights[a] for a in I)
            out |= {w - s for w in f.weights()}
        return out

    def weight(self):
        ws = self.weights()
        return ws.pop() if len(ws) == 1 else None

    def is_homogeneous(self, w=None):
        ws = self.weights()
        return not ws or (len(ws) == 1 and (w is None or w in ws))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if other.base != self.base or other.degree != self.degree:
            raise ValueError("multivectors of different type")
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals[k] + v if k in vals else v
        return MultiVectorField(self.base, self.degree, vals)

    __radd__ = __add__

    def scale(self, c):
        return MultiVectorField(self.base, self.degree, {k: v.scale(c) for k, v in self.values.items()})

    def times(self, f):
        return MultiVectorField(self.base, self.degree, {k: f * v for k, v in self.values.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, MultiVectorField):
            return NotImplemented
        return self.base == other.base and self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.degree, frozenset(self.values.items())))

    def __repr__(self):
        names = self.base.names
        parts = [
            f"({f})*" + "^".join(f"d{names[a]}" for a in I) if I else f"({f})"
            for I, f in sorted(self.values.items())
        ]
        return f"MultiVectorField(degree={self.degree}: " + (" + ".join(parts) or "0") + ")"


class PolyOneForm:
    """``sum_a w_a dx_a`` with polynomial coefficients."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base, coeffs):
        coeffs = tuple(c if isinstance(c, Poly) else base.const(c) for c in coeffs)
        if len(coeffs) != base.n:
            raise ValueError(f"one-form needs {base.n} coefficients")
        self.base, self.coeffs = base, coeffs

    @classmethod
    def d(cls, f):
        return cls(f.base, [f.diff(a) for a in range(f.base.n)])

    @classmethod
    def coordinate(cls, base, a):
        return cls(base, [base.one() if b == a else Poly(base) for b in range(base.n)])

    def __call__(self, X):
        out = Poly(self.base)
        for w, p in zip(self.coeffs, X.coeffs):
            if w and p:
                out = out + w * p
        return out

    def lie_derivative(self, X):
        """``L_X w``: components ``X(w_a) + sum_b w_b d_a X^b``."""
        n = self.base.n
        out = []
        for a in range(n):
            v = X.apply(self.coeffs[a])
            for b in range(n):
                if self.coeffs[b]:
                    v = v + self.coeffs[b] * X.coeffs[b].diff(a)
            out.append(v)
        return PolyOneForm(self.base, out)

    def __add__(self, other):
        return PolyOneForm(self.base, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return PolyOneForm(self.base, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c):
        return PolyOneForm(self.base, [a.scale(c) for a in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, PolyOneForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyOneForm({[str(c) for c in self.coeffs]})"


# -- exterior algebra -----------------------------------------------------------


def wedge(X, Y):
    if X.base != Y.base:
        raise ValueError("base mismatch")
    vals = {}
    for I, f in X.values.items():
        for J, g in Y.values.items():
            sign, key = sort_with_sign(I + J)
            if not sign:
                continue
            term = f * g if sign > 0 else -(f * g)
            vals[key] = vals[key] + term if key in vals else term
    return MultiVectorField(X.base, X.degree + Y.degree, vals)


def _wedge_fields(fields, base):
    out = MultiVectorField(base, 0, {(): base.one()})
    for V in fields:
        out = wedge(out, MultiVectorField.from_field(V))
    return out


def _decompose(I, f, base):
    """``f d/dx_I`` as a list of vector fields whose wedge product it is."""
    fields = [PolyDerivation.coordinate(base, a) for a in I]
    fields[0] = fields[0].times(f)
    return fields


def _bracket_decomposables(Xs, Ys, base):
    p, q = len(Xs), len(Ys)
    total = MultiVectorField(base, p + q - 1)
    for i in range(p):
        for j in range(q):
            br = Xs[i].bracket(Ys[j])
            if not br:
                continue
            rest = Xs[:i] + Xs[i + 1:] + Ys[:j] + Ys[j + 1:]
            term = _wedge_fields([br] + rest, base)
            total = total + (term if (i + j) % 2 == 0 else -term)
    return total


def _bracket_with_function(Xs, f, base):
    """``[X_1 ^ ... ^ X_p, f] = sum_i (-1)^(p-i) X_i(f) X_1 ^ ..^ ..X_p`` (1-indexed)."""
    p = len(Xs)
    total = MultiVectorField(base, p - 1)
    for i in range(p):
        g = Xs[i].apply(f)
        if not g:
            continue
        term = _wedge_fields(Xs[:i] + Xs[i + 1:], base).times(g)
        total = total + (term if (p - 1 - i) % 2 == 0 else -term)
    return total


def schouten_bracket(X, Y):
    """Schouten bracket of degree ``deg X + deg Y - 1``."""
    if X.base != Y.base:
        raise ValueError("base mismatch")
    base = X.base
    p, q = X.degree, Y.degree
    if p == 0 and q == 0:
        raise ValueError("the bracket of two functions is not defined (degree -1)")
    if q == 0:
        f = Y.coefficient(())
        total = MultiVectorField(base, p - 1)
        for I, g in X.values.items():
            total = total + _bracket_with_function(_decompose(I, g, base), f, base)
        return total
    if p == 0:
        # graded antisymmetry with Lie degrees -1 and q - 1
        back = schouten_bracket(Y, X)
        return back if q % 2 == 0 else -back
    total = MultiVectorField(base, p + q - 1)
    for I, f in X.values.items():
        Xs = _decompose(I, f, base)
        for J, g in Y.values.items():
            total = total + _bracket_decomposables(Xs, _decompose(J, g, base), base)
    return total


def is_poisson(pi):
    return pi.degree == 2 and schouten_bracket(pi, pi).is_zero()


def contract(X, forms):
    """Insert one-forms into the first slots of ``X``.

    A full contraction returns a polynomial, a partial one a multivector
    of degree ``deg X - len(forms)``.
    """
    forms = list(forms)
    m = len(forms)
    k = X.degree
    if m > k:
        raise ValueError(f"cannot insert {m} forms into a {k}-vector")
    base = X.base
    vals = {}
    for I, f in X.values.items():
        for chosen in permutations(range(k), m):
            c = f
            for form, pos in zip(forms, chosen):
                w = form.coeffs[I[pos]]
                if not w:
                    c = None
                    break
                c = c * w
            if c is None or not c:
                continue
            rest = tuple(i for i in range(k) if i not in chosen)
            sign = perm_sign(chosen + rest)
            key = tuple(I[i] for i in rest)
            term = c if sign > 0 else -c
            vals[key] = vals[key] + term if key in vals else term
    out = MultiVectorField(base, k - m, vals)
    if m == k:
        return out.coefficient(())
    return out


def sharp(X, forms):
    """``X^sharp(w_1, ..., w_{k-1})``: the field with ``b(X^sharp) = X(w_1, .., w_{k-1}, b)``."""
    forms = list(forms)
    if len(forms) != X.degree - 1:
        raise ValueError(f"sharp of a {X.degree}-vector takes {X.degree - 1} forms")
    Y = contract(X, forms)
    return PolyDerivation(X.base, [Y.coefficient((a,)) for a in range(X.base.n)])


# -- D_X and the cotangent algebroid --------------------------------------------


def _pi_weight(pi, weight=None):
    W = pi.weight()
    if W is None:
        if not pi.is_zero():
            raise ValueError("Poisson bivector must be homogeneous")
        return -1 if weight is None else weight
    return W


def cotangent_bundle(base, pi_weight):
    """The frame bundle of one-forms ``dx_a`` with weights ``pi_weight + w(x_a)``."""
    names = tuple(f"d{x}" for x in base.names)
    return FrameBundle(base, names, tuple(pi_weight + w for w in base.weights))


def _form_of_section(s, base):
    return PolyOneForm(base, s)


def d_x_map(X, target):
    """The multiderivation ``D_X`` of the cotangent bundle.

    ``target`` is the cotangent algebroid, a Poisson bivector (its algebroid
    is built) or a cotangent :class:`FrameBundle`.  On frames
    ``D_X(dx_I) = d(X_I)``; the symbol is ``X^sharp``.
    """
    bundle = _target_bundle(target)
    base = bundle.base
    if X.base != base:
        raise ValueError("base mismatch")
    n = base.n
    k = X.degree
    tensor = {}
    for I in increasing_tuples(n, k):
        f = X.coefficient(I)
        if f:
            tensor[I] = [f.diff(c) for c in range(n)]
    symbol = {}
    if k >= 1:
        coords = [PolyOneForm.coordinate(base, a) for a in range(n)]
        for J in increasing_tuples(n, k - 1):
            V = sharp(X, [coords[j] for j in J])
            if V:
                symbol[J] = V
    return DefCochain(bundle, k, tensor, symbol)


def _target_bundle(target):
    if isinstance(target, FrameBundle):
        return target
    if isinstance(target, MultiVectorField):
        return cotangent_bundle(target.base, _pi_weight(target))
    return target.bundle


def d_x_formula(X, forms):
    """``D_X(w_1..w_k) = sum_i (-1)^(k-i) L_{X^sharp(..^w_i..)} w_i - (k-1) d X(w_1..w_k)``.

    An independent evaluation path for :func:`d_x_map` on arbitrary one-forms.
    """
    forms = list(forms)
    k = X.degree
    if len(forms) != k:
        raise ValueError(f"takes {k} forms")
    base = X.base
    if k == 0:
        return PolyOneForm.d(X.coefficient(()))
    total = PolyOneForm(base, [Poly(base)] * base.n)
    for i in range(k):
        V = sharp(X, forms[:i] + forms[i + 1:])
        term = forms[i].lie_derivative(V)
        total = total + term if (k - 1 - i) % 2 == 0 else total - term
    full = contract(X, forms)
    return total - PolyOneForm.d(full).scale(k - 1)


# -- Poisson cohomology ---------------------------------------------------------


class MultivectorSlice:
    """Monomial basis of ``k``-vectors whose de Rham weight ``W(X) - k W(pi)`` is ``weight``."""

    def __init__(self, base, degree, weight, pi_weight):
        self.base, self.degree, self.weight, self.pi_weight = base, degree, weight, pi_weight
        keys = []
        for I in increasing_tuples(base.n, degree):
            w = weight + degree * pi_weight + sum(base.weights[a] for a in I)
            keys.extend((I, e) for e in monomial_basis(base, w))
        self.keys = tuple(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        for I, e in self.keys:
            yield MultiVectorField(self.base, self.degree, {I: Poly(self.base, {e: 1})})

    def vector(self, X):
        vec = [Fraction(0)] * len(self.keys)
        for I, f in X.values.items():
            for e, c in f.terms.items():
                i = self.index.get((I, e))
                if i is None:
                    raise ValueError(f"component {(I, e)} is outside the slice")
                vec[i] = c
        return tuple(vec)


def poisson_complex(pi, w, pi_weight=None):
    """Weight-``w`` slice of ``(X^*, [pi, .])``; returns ``(complex, slices)``."""
    if not is_poisson(pi):
        raise ValueError("[pi, pi] != 0: not a Poisson bivector")
    W = _pi_weight(pi, pi_weight)
    base = pi.base
    n = base.n
    slices = {k: MultivectorSlice(base, k, w, W) for k in range(0, n + 2)}
    maps = {}
    for k in range(0, n + 1):
        cols = [slices[k + 1].vector(schouten_bracket(pi, X)) for X in slices[k]]
        maps[k] = RatMatrix.from_columns(len(slices[k + 1]), cols)
    C = FiniteComplex(0, n, {k: len(slices[k]) for k in range(0, n + 1)}, maps)
    return C, slices


def poisson_betti(pi, weights, pi_weight=None):
    out = {}
    for w in weights:
        C, _ = poisson_complex(pi, w, pi_weight)
        for k, b in betti(C).items():
            out[(k, w)] = b
    return out


@dataclass
class EmbeddingCertificate:
    """``i(X) = D_X`` and whether ``D_{[pi, X]} = delta(D_X)``."""

    cochain: DefCochain
    chain_map: bool


def embed_poisson(X, pi, A=None):
    """Embed ``X`` into the deformation complex of the cotangent algebroid."""
    from .algebroid import build_cotangent_algebroid

    if A is None:
        A = build_cotangent_algebroid(pi)
    D = d_x_map(X, A)
    ok = d_x_map(schouten_bracket(pi, X), A) == differential(D, A)
    return EmbeddingCertificate(D, ok)


def poisson_embedding_map(pi, w, A=None):
    """The slice chain map ``X -> D_X`` from the Poisson complex in weight ``w``
    to the deformation complex of the cotangent algebroid in weight ``w + W(pi)``.

    Returns ``(ComplexMap, defects)``; ``defects`` lists degrees where the
    square fails to commute (empty for a chain map).
    """
    from .algebroid import build_cotangent_algebroid

    if A is None:
        A = build_cotangent_algebroid(pi)
    W = A.weights[0] - A.base.weights[0] if A.rank else 0
    P, pslices = poisson_complex(pi, w, W)
    Dc, dslices = deformation_complex(A, w + W)
    mats = {}
    for k in P.degrees():
        cols = [dslices[k].vector(d_x_map(X, A)) for X in pslices[k]]
        mats[k] = RatMatrix.from_columns(Dc.dim(k), cols)
    f = ComplexMap(P, Dc, mats)
    return f, f.chain_map_defects()


# -- linear multivector fields --------------------------------------------------


def dual_base(A, prefix="y"):
    """Coordinates on the dual of a Lie algebra, one per frame element, weight 1."""
    return BaseSpec(tuple(f"{prefix}{i + 1}" for i in range(A.rank)), (1,) * A.rank)


def linear_mvf_correspondence(direction, obj, A, dual=None):
    """Cochains on a Lie algebra ``A`` versus multivectors on its dual.

    ``direction="to_mvf"`` sends a cochain ``c`` of degree ``k`` to
    ``X_c = sum_I sum_l c_I^l y_l d/dy_I``; ``direction="to_cochain"`` is the
    inverse and rejects multivectors whose coefficients are not linear.
    """
    if A.base.n:
        raise ValueError("the correspondence is implemented for Lie algebras (point base)")
    if dual is None:
        dual = dual_base(A)
    ys = dual.vars()
    if direction == "to_mvf":
        c = obj
        if c.symbol:
            raise ValueError("cochains over a point carry no symbol")
        vals = {}
        for I, val in c.tensor.items():
            f = Poly(dual)
            for l, p in enumerate(val):
                const = p.constant_term()
                if const:
                    f = f + ys[l].scale(const)
            vals[I] = f
        return MultiVectorField(dual, c.degree, vals)
    if direction == "to_cochain":
        X = obj
        r = A.rank
        tensor = {}
        base = A.base
        for I, f in X.values.items():
            val = []
            for e in f.terms:
                if sum(e) != 1:
                    raise ValueError(f"coefficient {f} of d/dy{I} is not linear")
            for l in range(r):
                e = tuple(1 if i == l else 0 for i in range(r))
                val.append(base.const(f.coefficient(e)))
            tensor[I] = val
        return DefCochain(A.bundle, X.degree, tensor)
    raise ValueError(f"unknown direction {direction!r}")
