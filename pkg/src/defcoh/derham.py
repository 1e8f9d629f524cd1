"""Cochains of an algebroid with values in a representation, the
Chevalley-Eilenberg differential, and the action of multiderivations.

The action of a multiderivation ``D`` with symbol ``sigma_D`` on an
E-valued cochain ``c`` is

    L_D(c) = (-1)^(pq) sigma_D o c - c o D,

with ``p = deg D - 1`` and ``q = deg c``.  Vector fields act on E-valued
functions through the frame of E (componentwise), so for a representation
whose connection kills the frame, ``L_m`` is the differential.
"""

from dataclasses import dataclass
from fractions import Fraction

from ._exterior import det, increasing_tuples, shuffles, sort_with_sign
from .polybase import Poly, monomial_basis
from .ratlin import FiniteComplex, RatMatrix, betti, solve_or_none

__all__ = [
    "DeRhamCochain",
    "DeRhamSlice",
    "derham_differential",
    "derham_complex",
    "derham_betti",
    "lie_derivative_action",
    "cohomology_action",
    "variation_map",
]


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vscale(f, v):
    if isinstance(f, Poly):
        return tuple(f * x for x in v)
    return tuple(x.scale(f) for x in v)


class DeRhamCochain:
    """An R-multilinear skew ``degree``-cochain of ``owner`` with values in ``rep``.

    ``values`` maps increasing frame tuples to value vectors (one polynomial
    per frame element of ``rep``).
    """

    __slots__ = ("owner", "rep", "degree", "values")

    def __init__(self, owner, rep, degree, values=None):
        if rep.owner is not owner:
            raise ValueError("representation belongs to a different algebroid")
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.owner, self.rep, self.degree = owner, rep, degree
        r, s, base = owner.rank, rep.rank, owner.base
        vals = {}
        for key, v in (values or {}).items():
            key = tuple(key)
            if len(key) != degree or any(not 0 <= i < r for i in key) or any(
                a >= b for a, b in zip(key, key[1:])
            ):
                raise ValueError(f"bad index tuple {key} for degree {degree}")
            v = tuple(x if isinstance(x, Poly) else base.const(x) for x in v)
            if len(v) != s:
                raise ValueError(f"values need {s} components")
            if any(v):
                vals[key] = v
        self.values = vals

    def is_zero(self):
        return not self.values

    def __bool__(self):
        return bool(self.values)

    def weights(self):
        b = self.owner.bundle
        ws = set()
        for I, v in self.values.items():
            ws |= {w - b.sum_weights(I) for w in self.rep.value_weights(v)}
        return ws

    def weight(self):
        ws = self.weights()
        return ws.pop() if len(ws) == 1 else None

    def on_frames(self, idx):
        sign, key = sort_with_sign(idx)
        zero = self.rep.zero_value()
        if not sign:
            return zero
        v = self.values.get(key)
        if v is None:
            return zero
        return v if sign > 0 else tuple(-x for x in v)

    def __call__(self, *sections):
        if len(sections) != self.degree:
            raise ValueError(f"takes {self.degree} arguments, got {len(sections)}")
        one = self.owner.base.one()
        out = self.rep.zero_value()
        for I, v in self.values.items():
            d = det([[s[i] for i in I] for s in sections], one)
            if d:
                out = _vadd(out, _vscale(d, v))
        return out

    def transport(self, owner, rep):
        """The same values viewed on another algebroid with the same frame."""
        return DeRhamCochain(owner, rep, self.degree, self.values)

    def _check(self, other):
        if not isinstance(other, DeRhamCochain):
            raise TypeError("expected a DeRhamCochain")
        if other.rep is not self.rep or other.degree != self.degree:
            raise ValueError("cochains live in different spaces")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = _vadd(vals[k], v) if k in vals else v
        return DeRhamCochain(self.owner, self.rep, self.degree, vals)

    __radd__ = __add__

    def scale(self, c):
        c = Fraction(c)
        return DeRhamCochain(
            self.owner, self.rep, self.degree, {k: _vscale(c, v) for k, v in self.values.items()}
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, DeRhamCochain):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.degree, frozenset(self.values.items())))

    def __repr__(self):
        return f"DeRhamCochain(degree={self.degree}, values={self.values})"


def derham_differential(c):
    """Chevalley-Eilenberg differential, evaluated on frame tuples."""
    A, E = c.owner, c.rep
    q = c.degree
    frames = [A.bundle.frame(i) for i in range(A.rank)]
    vals = {}
    for I in increasing_tuples(A.rank, q + 1):
        secs = [frames[i] for i in I]
        out = E.zero_value()
        for i in range(q + 1):
            inner = c(*(secs[:i] + secs[i + 1:]))
            if any(inner):
                term = E.connection(secs[i], inner)
                out = _vadd(out, term) if i % 2 == 0 else _vsub(out, term)
        for i in range(q + 1):
            for j in range(i + 1, q + 1):
                br = A.bracket(secs[i], secs[j])
                if not any(br):
                    continue
                term = c(br, *(secs[:i] + secs[i + 1:j] + secs[j + 1:]))
                out = _vadd(out, term) if (i + j) % 2 == 0 else _vsub(out, term)
        vals[I] = out
    return DeRhamCochain(A, E, q + 1, vals)


class DeRhamSlice:
    """Monomial basis of the weight-``weight`` part of ``C^degree(A; E)``.

    Keys ``(I, b, exp)`` stand for ``x^exp eps_b`` as the value on ``e_I``;
    lexicographic in ``(I, b)``, monomials in descending lexicographic order.
    """

    def __init__(self, owner, rep, degree, weight):
        self.owner, self.rep, self.degree, self.weight = owner, rep, degree, weight
        base, bundle = owner.base, owner.bundle
        keys = []
        for I in increasing_tuples(owner.rank, degree):
            for b in range(rep.rank):
                w = bundle.sum_weights(I) + weight - rep.weights[b]
                keys.extend((I, b, e) for e in monomial_basis(base, w))
        self.keys = tuple(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return (self.element(i) for i in range(len(self.keys)))

    def element(self, i):
        I, b, e = self.keys[i]
        base = self.owner.base
        v = [Poly(base)] * self.rep.rank
        v[b] = Poly(base, {e: 1})
        return DeRhamCochain(self.owner, self.rep, self.degree, {I: v})

    def vector(self, c):
        if c.degree != self.degree:
            raise ValueError("degree mismatch")
        vec = [Fraction(0)] * len(self.keys)
        for I, v in c.values.items():
            for b, p in enumerate(v):
                for e, x in p.terms.items():
                    i = self.index.get((I, b, e))
                    if i is None:
                        raise ValueError(
                            f"component {(I, b, e)} is outside the weight-{self.weight} slice"
                        )
                    vec[i] = x
        return tuple(vec)

    def cochain(self, vec):
        if len(vec) != len(self.keys):
            raise ValueError("coordinate vector has the wrong length")
        base = self.owner.base
        acc = {}
        for x, (I, b, e) in zip(vec, self.keys):
            if x:
                acc.setdefault(I, {}).setdefault(b, {})[e] = x
        vals = {I: [Poly(base, d.get(b)) for b in range(self.rep.rank)] for I, d in acc.items()}
        return DeRhamCochain(self.owner, self.rep, self.degree, vals)


def derham_complex(A, E, w):
    """Weight-``w`` slice of ``C^*(A; E)`` in degrees ``0..rank``; returns ``(complex, slices)``."""
    key = ("derham", id(E), w)
    cache = A._cache
    if key not in cache:
        r = A.rank
        slices = {p: DeRhamSlice(A, E, p, w) for p in range(0, r + 2)}
        maps = {}
        for p in range(0, r + 1):
            cols = [slices[p + 1].vector(derham_differential(x)) for x in slices[p]]
            maps[p] = RatMatrix.from_columns(len(slices[p + 1]), cols)
        C = FiniteComplex(0, r, {p: len(slices[p]) for p in range(0, r + 1)}, maps)
        cache[key] = (C, slices, E)
    C, slices, _ = cache[key]
    return C, slices


def derham_betti(A, E, weights):
    out = {}
    for w in weights:
        C, _ = derham_complex(A, E, w)
        for p, b in betti(C).items():
            out[(p, w)] = b
    return out


# -- the action of multiderivations ---------------------------------------------


def _field_on_values(X, v):
    return tuple(X.apply(f) for f in v)


def _sigma_compose(D, c, secs):
    """``sigma_D o c``: (q, p)-shuffles, ``c`` on the first block."""
    E = c.rep
    out = E.zero_value()
    if D.degree == 0 or not D.symbol:
        return out
    p, q = D.degree - 1, c.degree
    for order, sgn in shuffles(q, p):
        X = D.symbol_at(*[secs[i] for i in order[q:]])
        if not X:
            continue
        val = c(*[secs[i] for i in order[:q]])
        if not any(val):
            continue
        term = _field_on_values(X, val)
        out = _vadd(out, term) if sgn > 0 else _vsub(out, term)
    return out


def _c_compose(c, D, secs):
    """``c o D``: insert ``D`` into the first slot of ``c``."""
    out = c.rep.zero_value()
    if c.degree == 0:
        return out
    k = D.degree
    for order, sgn in shuffles(k, c.degree - 1):
        inner = D(*[secs[i] for i in order[:k]])
        if not any(inner):
            continue
        term = c(inner, *[secs[i] for i in order[k:]])
        out = _vadd(out, term) if sgn > 0 else _vsub(out, term)
    return out


def lie_derivative_action(D, c):
    """``L_D(c) = (-1)^(pq) sigma_D o c - c o D`` of degree ``p + q``."""
    A = c.owner
    if D.bundle != A.bundle:
        raise ValueError("multiderivation and cochain live on different bundles")
    p, q = D.degree - 1, c.degree
    deg = p + q
    if deg < 0:
        raise ValueError("a section acting on a function has negative degree")
    e = -1 if (p * q) % 2 else 1
    frames = [A.bundle.frame(i) for i in range(A.rank)]
    vals = {}
    for I in increasing_tuples(A.rank, deg):
        secs = [frames[i] for i in I]
        a = _sigma_compose(D, c, secs)
        b = _c_compose(c, D, secs)
        vals[I] = _vsub(a, b) if e > 0 else _vsub(tuple(-x for x in a), b)
    return DeRhamCochain(A, c.rep, deg, vals)


@dataclass
class ActionClass:
    """Result of acting with a deformation cocycle on a de Rham cocycle.

    ``exact_witness`` lists ``(label, target, preimage)``; a zero target
    needs no preimage.
    """

    cochain: object
    is_cocycle: bool
    exact_witness: object = None


def _homogeneous_weight(x, what):
    w = x.weight()
    if w is None and x:
        raise ValueError(f"{what} must be homogeneous")
    return w


def _coboundary_solution(target, E, w):
    """Solve ``delta(b) = target`` in ``C(A; E)``; returns the preimage or ``None``
    (also ``None`` for a zero target in degree 0, which has no preimage space)."""
    A = target.owner
    p = target.degree
    if not target:
        return DeRhamCochain(A, E, p - 1) if p >= 1 else None
    if p == 0:
        return None
    C, slices = derham_complex(A, E, w)
    x = solve_or_none(C.d(p - 1), slices[p].vector(target))
    return None if x is None else slices[p - 1].cochain(x)


def cohomology_action(D, c, check_classes=True, samples=None):
    """Act with a deformation cocycle ``D`` on a cocycle ``c`` of ``C(A; E)``.

    Verifies that ``L_D(c)`` is closed.  With ``check_classes`` it also
    certifies that the class is well defined on the given representatives:
    ``L_{delta K}(c)`` and ``L_D(delta b)`` are coboundaries for the
    ``(K, b)`` pairs in ``samples`` (default: the slice bases one degree
    lower).
    """
    from .defcomplex import basis_slice, differential

    A, E = c.owner, c.rep
    if not E.is_frame_trivial():
        raise ValueError("the action is defined for representations whose connection kills the frame")
    if differential(D, A):
        raise ValueError("D is not a cocycle")
    if derham_differential(c):
        raise ValueError("c is not a cocycle")
    L = lie_derivative_action(D, c)
    closed = not derham_differential(L)
    witnesses = []
    if check_classes:
        wD = _homogeneous_weight(D, "D") or 0
        wc = _homogeneous_weight(c, "c") or 0
        if samples is None:
            Ks = list(basis_slice(A, D.degree - 1, wD)) if D.degree >= 1 else []
            bs = list(DeRhamSlice(A, E, c.degree - 1, wc)) if c.degree >= 1 else []
        else:
            Ks, bs = samples
        for K in Ks:
            t = lie_derivative_action(differential(K, A), c)
            witnesses.append(("delta K", t, _coboundary_solution(t, E, wD + wc)))
        for b in bs:
            t = lie_derivative_action(D, derham_differential(b))
            witnesses.append(("delta b", t, _coboundary_solution(t, E, wD + wc)))
    ok = all(not t or s is not None for _, t, s in witnesses)
    return ActionClass(L, closed and ok, witnesses)


def _derivative_weights(ts, t0):
    """Weights ``l_j`` with ``P'(t0) = sum_j l_j P(ts[j])`` for polynomials of
    degree below ``len(ts)`` (derivatives of the Lagrange basis at ``t0``)."""
    out = []
    for j, tj in enumerate(ts):
        denom = Fraction(1)
        for m, tm in enumerate(ts):
            if m != j:
                denom *= tj - tm
        total = Fraction(0)
        for skip, ts_ in enumerate(ts):
            if skip == j:
                continue
            prod = Fraction(1)
            for m, tm in enumerate(ts):
                if m != j and m != skip:
                    prod *= t0 - tm
            total += prod
        out.append(total / denom)
    return out


@dataclass
class VariationResult:
    """The variation of a cocycle along a family and its comparison with ``L_{c0}``."""

    variation: object
    action: object
    difference_primitive: object

    @property
    def is_cocycle(self):
        return not derham_differential(self.variation)

    @property
    def certified(self):
        return self.is_cocycle and self.difference_primitive is not None


def variation_map(F, c, t0=0):
    """``d/dt delta_{A_t}(c)`` at ``t0`` for the constant extension of ``c``.

    The derivative is exact: ``delta_{A_t}(c)`` is polynomial in ``t`` of
    degree at most the family's, so it is interpolated from specialisations.
    The connection coefficients of ``c``'s representation are kept fixed
    along the family.  The result is compared with ``L_{c0}(c)`` and the
    difference is certified exact by a linear solve.
    """
    from .algebroid import Representation

    t0 = Fraction(t0)
    A0, E0 = c.owner, c.rep
    ts = [t0 + j for j in range(F.t_degree + 1)]
    lw = _derivative_weights(ts, t0)
    total = None
    for tj, l in zip(ts, lw):
        At = F.specialize(tj)
        Et = Representation(At, E0.names, E0.weights, E0.gamma, label=E0.label)
        dc = derham_differential(c.transport(At, Et)).scale(l)
        dc = dc.transport(A0, E0)
        total = dc if total is None else total + dc
    c0 = F.derivative_cochain(t0)
    L = lie_derivative_action(c0, c)
    diff = total - L
    w = total.weight() if total else (L.weight() or 0)
    prim = _coboundary_solution(diff, E0, w if w is not None else 0)
    return VariationResult(total, L, prim)
