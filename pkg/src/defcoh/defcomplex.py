"""Multiderivations on a free module and the deformation complex of an algebroid.

A cochain of complex degree ``k`` is a skew map of ``k`` sections that is a
derivation in each slot.  It is stored in the splitting induced by the
constant frame: a *tensor* part giving its values on increasing frame
tuples, and a *symbol* part, an R-multilinear skew map of ``k - 1``
sections into vector fields.  Evaluation on arbitrary sections expands
each argument in the frame and applies the Leibniz rule

    D(s_0, ..., f s_n) = f D(s_0, ..., s_n) + sigma_D(s_0, ..., s_{n-1})(f) s_n.

Degrees follow the complex: degree 0 holds sections, degree 1 derivations,
and the structure cochain ``m`` of an algebroid sits in degree 2.

Weights: a section ``f e_b`` has weight ``w(f) + w(e_b)``; a cochain has
weight ``w`` when it raises the total weight of its arguments by ``w``.
"""

from dataclasses import dataclass
from fractions import Fraction

from ._exterior import det, increasing_tuples, shuffles, sort_with_sign
from .polybase import BaseSpec, Poly, PolyDerivation, monomial_basis
from .ratlin import FiniteComplex, RatMatrix, betti, cohomology

__all__ = [
    "FrameBundle",
    "DefCochain",
    "TMValuedCochain",
    "CochainSlice",
    "gerstenhaber_bracket",
    "differential",
    "tm_differential",
    "eval_cochain",
    "explicit_coboundary",
    "connection_split",
    "connection_join",
    "basis_slice",
    "slice_matrix",
    "deformation_complex",
    "betti_def",
    "center_and_outder",
    "tangent_homotopy",
    "top_degree",
]


def _sign(n):
    return -1 if n % 2 else 1


class FrameBundle:
    """Free module over the base ring with a homogeneous frame."""

    def __init__(self, base, names, weights):
        if not isinstance(base, BaseSpec):
            raise TypeError("base must be a BaseSpec")
        names, weights = tuple(names), tuple(int(w) for w in weights)
        if len(names) != len(weights):
            raise ValueError("one weight per frame element required")
        if len(set(names)) != len(names):
            raise ValueError(f"frame names must be distinct: {names}")
        self.base, self.names, self.weights = base, names, weights

    @property
    def rank(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, FrameBundle)
            and self.base == other.base
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.base, self.names, self.weights))

    def __repr__(self):
        return f"FrameBundle({list(self.names)}, weights={list(self.weights)})"

    # -- sections -------------------------------------------------------------
    def zero_section(self):
        z = Poly(self.base)
        return (z,) * self.rank

    def frame(self, i):
        z, one = Poly(self.base), self.base.one()
        return tuple(one if j == i else z for j in range(self.rank))

    def section(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != self.rank:
            raise ValueError(f"section needs {self.rank} coefficients")
        return tuple(c if isinstance(c, Poly) else self.base.const(c) for c in coeffs)

    def section_weights(self, s):
        out = set()
        for p, wb in zip(s, self.weights):
            out |= {w + wb for w in p.weights()}
        return out

    def section_weight(self, s):
        ws = self.section_weights(s)
        return ws.pop() if len(ws) == 1 else None

    def sum_weights(self, idx):
        return sum(self.weights[i] for i in idx)


def sec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def sec_scale(f, s):
    """Multiply a section by a polynomial or a rational."""
    if isinstance(f, Poly):
        return tuple(f * x for x in s)
    return tuple(x.scale(f) for x in s)


def sec_is_zero(s):
    return not any(s)


def _minor(sections, idx, one):
    return det([[s[i] for i in idx] for s in sections], one)


def _field_zero(base):
    return PolyDerivation(base)


class DefCochain:
    """A multiderivation of complex degree ``degree`` on a :class:`FrameBundle`.

    ``tensor`` maps increasing ``degree``-tuples of frame indices to
    sections; ``symbol`` maps increasing ``(degree - 1)``-tuples to vector
    fields.  Zero values are dropped on construction.
    """

    __slots__ = ("bundle", "degree", "tensor", "symbol")

    def __init__(self, bundle, degree, tensor=None, symbol=None):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.bundle, self.degree = bundle, degree
        r = bundle.rank
        t = {}
        for key, val in (tensor or {}).items():
            key = tuple(key)
            _check_key(key, degree, r)
            val = bundle.section(val)
            if not sec_is_zero(val):
                t[key] = val
        s = {}
        for key, val in (symbol or {}).items():
            key = tuple(key)
            if degree == 0:
                raise ValueError("degree-0 cochains carry no symbol")
            _check_key(key, degree - 1, r)
            if not isinstance(val, PolyDerivation) or val.base != bundle.base:
                raise TypeError("symbol values must be PolyDerivations on the base")
            if val:
                s[key] = val
        self.tensor, self.symbol = t, s

    @classmethod
    def zero(cls, bundle, degree):
        return cls(bundle, degree)

    @classmethod
    def from_section(cls, bundle, s):
        return cls(bundle, 0, {(): s})

    @classmethod
    def identity(cls, bundle):
        return cls(bundle, 1, {(i,): bundle.frame(i) for i in range(bundle.rank)})

    # -- structure ------------------------------------------------------------
    def is_zero(self):
        return not self.tensor and not self.symbol

    def __bool__(self):
        return not self.is_zero()

    def weights(self):
        b = self.bundle
        ws = set()
        for I, val in self.tensor.items():
            ws |= {w - b.sum_weights(I) for w in b.section_weights(val)}
        for J, X in self.symbol.items():
            for p, wa in zip(X.coeffs, b.base.weights):
                ws |= {w - wa - b.sum_weights(J) for w in p.weights()}
        return ws

    def weight(self):
        """The weight of a nonzero homogeneous cochain, else ``None``."""
        ws = self.weights()
        return ws.pop() if len(ws) == 1 else None

    def is_homogeneous(self, w=None):
        ws = self.weights()
        return not ws or (len(ws) == 1 and (w is None or w in ws))

    def homogeneous_component(self, w):
        return DefCochain(self.bundle, self.degree, *_components(self, w))

    def as_section(self):
        if self.degree != 0:
            raise ValueError("only degree-0 cochains are sections")
        return self.tensor.get((), self.bundle.zero_section())

    # -- evaluation -----------------------------------------------------------
    def on_frames(self, idx):
        """Value on the frame tuple ``idx`` (any order)."""
        sign, key = sort_with_sign(idx)
        if not sign:
            return self.bundle.zero_section()
        val = self.tensor.get(key)
        if val is None:
            return self.bundle.zero_section()
        return val if sign > 0 else tuple(-x for x in val)

    def symbol_on_frames(self, idx):
        sign, key = sort_with_sign(idx)
        base = self.bundle.base
        if not sign:
            return _field_zero(base)
        X = self.symbol.get(key)
        if X is None:
            return _field_zero(base)
        return X if sign > 0 else -X

    def symbol_at(self, *sections):
        """The R-multilinear symbol evaluated on ``degree - 1`` sections."""
        if self.degree == 0:
            raise ValueError("degree-0 cochains carry no symbol")
        if len(sections) != self.degree - 1:
            raise ValueError(f"symbol takes {self.degree - 1} arguments, got {len(sections)}")
        base = self.bundle.base
        out = _field_zero(base)
        one = base.one()
        for J, X in self.symbol.items():
            d = _minor(sections, J, one)
            if d:
                out = out + X.times(d)
        return out

    def __call__(self, *sections):
        return eval_cochain(self, sections)

    # -- vector space ---------------------------------------------------------
    def _check_same(self, other):
        if not isinstance(other, DefCochain):
            raise TypeError("expected a DefCochain")
        if other.bundle != self.bundle:
            raise ValueError("cochains live on different bundles")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check_same(other)
        t = dict(self.tensor)
        for k, v in other.tensor.items():
            t[k] = sec_add(t[k], v) if k in t else v
        s = dict(self.symbol)
        for k, v in other.symbol.items():
            s[k] = s[k] + v if k in s else v
        return DefCochain(self.bundle, self.degree, t, s)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return DefCochain(
            self.bundle,
            self.degree,
            {k: sec_scale(c, v) for k, v in self.tensor.items()},
            {k: v.scale(c) for k, v in self.symbol.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, DefCochain):
            return NotImplemented
        return (
            self.bundle == other.bundle
            and self.degree == other.degree
            and self.tensor == other.tensor
            and self.symbol == other.symbol
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.tensor.items()), frozenset(self.symbol.items())))

    def __repr__(self):
        names = self.bundle.names
        parts = []
        for I, val in sorted(self.tensor.items()):
            arg = ",".join(names[i] for i in I)
            vals = " + ".join(f"({p})*{names[b]}" for b, p in enumerate(val) if p)
            parts.append(f"({arg}) -> {vals}")
        for J, X in sorted(self.symbol.items()):
            arg = ",".join(names[i] for i in J)
            parts.append(f"sigma({arg}) = {X!r}")
        return f"DefCochain(degree={self.degree}; " + "; ".join(parts) + ")"


def _check_key(key, length, r):
    if len(key) != length:
        raise ValueError(f"index tuple {key} must have length {length}")
    if any(not 0 <= i < r for i in key):
        raise ValueError(f"index tuple {key} out of range for rank {r}")
    if any(a >= b for a, b in zip(key, key[1:])):
        raise ValueError(f"index tuple {key} must be strictly increasing")


def _components(D, w):
    b = D.bundle
    t, s = {}, {}
    for I, val in D.tensor.items():
        shift = w + b.sum_weights(I)
        t[I] = tuple(p.homogeneous_part(shift - wb) for p, wb in zip(val, b.weights))
    for J, X in D.symbol.items():
        shift = w + b.sum_weights(J)
        s[J] = PolyDerivation(
            b.base, [p.homogeneous_part(shift + wa) for p, wa in zip(X.coeffs, b.base.weights)]
        )
    return t, s


def _nabla0(X, s):
    """Covariant derivative along ``X`` for the connection killing the frame."""
    return tuple(X.apply(f) for f in s)


def eval_cochain(D, sections):
    """Evaluate ``D`` on arbitrary sections via the Leibniz expansion."""
    sections = tuple(sections)
    k = D.degree
    if len(sections) != k:
        raise ValueError(f"cochain of degree {k} takes {k} arguments, got {len(sections)}")
    bundle = D.bundle
    if k == 0:
        return D.as_section()
    one = bundle.base.one()
    out = bundle.zero_section()
    for I, val in D.tensor.items():
        d = _minor(sections, I, one)
        if d:
            out = sec_add(out, sec_scale(d, val))
    if D.symbol:
        n = k - 1
        for i in range(k):
            X = D.symbol_at(*(sections[:i] + sections[i + 1:]))
            if X:
                term = _nabla0(X, sections[i])
                out = sec_add(out, term) if _sign(n + i) > 0 else sec_sub(out, term)
    return out


# -- Gerstenhaber bracket -------------------------------------------------------


def _compose(X, Y, secs):
    """``X o Y``: insert ``Y`` into the first slot of ``X`` summing over shuffles."""
    bundle = X.bundle
    out = bundle.zero_section()
    if X.degree == 0:
        return out
    aY = Y.degree
    for order, sgn in shuffles(aY, X.degree - 1):
        inner = Y(*[secs[i] for i in order[:aY]])
        if sec_is_zero(inner):
            continue
        val = X(inner, *[secs[i] for i in order[aY:]])
        out = sec_add(out, val) if sgn > 0 else sec_sub(out, val)
    return out


def _symbol_compose(X, Y, secs):
    """``sigma_X o Y`` on ``X.degree + Y.degree - 2`` sections."""
    out = _field_zero(X.bundle.base)
    if X.degree < 2 or not X.symbol:
        return out
    aY = Y.degree
    for order, sgn in shuffles(aY, X.degree - 2):
        inner = Y(*[secs[i] for i in order[:aY]])
        if sec_is_zero(inner):
            continue
        val = X.symbol_at(inner, *[secs[i] for i in order[aY:]])
        out = out + val if sgn > 0 else out - val
    return out


def _symbol_commutator(X, Y, secs):
    out = _field_zero(X.bundle.base)
    if X.degree == 0 or Y.degree == 0 or not X.symbol or not Y.symbol:
        return out
    p, q = X.degree - 1, Y.degree - 1
    for order, sgn in shuffles(p, q):
        a = X.symbol_at(*[secs[i] for i in order[:p]])
        if not a:
            continue
        b = Y.symbol_at(*[secs[i] for i in order[p:]])
        if not b:
            continue
        val = a.bracket(b)
        out = out + val if sgn > 0 else out - val
    return out


def gerstenhaber_bracket(D1, D2):
    """The graded bracket ``[D1, D2]`` of complex degree ``k1 + k2 - 1``.

    With ``p = k1 - 1`` and ``q = k2 - 1``:
    ``[D1, D2] = (-1)^{pq} D1 o D2 - D2 o D1`` and
    ``sigma = (-1)^{pq} sigma_1 o D2 - sigma_2 o D1 + [sigma_1, sigma_2]``.
    """
    if D1.bundle != D2.bundle:
        raise ValueError("cochains live on different bundles")
    bundle = D1.bundle
    k = D1.degree + D2.degree - 1
    if k < 0:
        raise ValueError("the bracket of two sections is not defined (degree -1)")
    p, q = D1.degree - 1, D2.degree - 1
    e = _sign(p * q)
    frames = [bundle.frame(i) for i in range(bundle.rank)]
    tensor = {}
    for I in increasing_tuples(bundle.rank, k):
        secs = [frames[i] for i in I]
        a = _compose(D1, D2, secs)
        b = _compose(D2, D1, secs)
        tensor[I] = sec_sub(a, b) if e > 0 else sec_sub(tuple(-x for x in a), b)
    symbol = {}
    if k >= 1:
        for J in increasing_tuples(bundle.rank, k - 1):
            secs = [frames[i] for i in J]
            a = _symbol_compose(D1, D2, secs)
            b = _symbol_compose(D2, D1, secs)
            c = _symbol_commutator(D1, D2, secs)
            symbol[J] = (a if e > 0 else -a) - b + c
    return DefCochain(bundle, k, tensor, symbol)


# -- differential ---------------------------------------------------------------


def _tm_coboundary(A, sigma_at, n, secs):
    """Bott-type coboundary of an R-multilinear Der(R)-valued form of arity ``n``.

    ``sigma_at`` evaluates the form; ``secs`` has ``n + 1`` entries.
    """
    out = _field_zero(A.base)
    for i in range(n + 1):
        rest = secs[:i] + secs[i + 1:]
        val = sigma_at(*rest)
        if val:
            term = A.rho(secs[i]).bracket(val)
            out = out + term if i % 2 == 0 else out - term
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            br = A.bracket(secs[i], secs[j])
            if sec_is_zero(br):
                continue
            rest = secs[:i] + secs[i + 1:j] + secs[j + 1:]
            val = sigma_at(br, *rest)
            out = out + val if (i + j) % 2 == 0 else out - val
    return out


def explicit_coboundary(A, D, secs):
    """The coboundary formula for ``delta(D)`` evaluated on arbitrary sections."""
    out = A.bundle.zero_section()
    k = D.degree
    for i in range(k + 1):
        rest = secs[:i] + secs[i + 1:]
        inner = D(*rest)
        if sec_is_zero(inner):
            continue
        term = A.bracket(secs[i], inner)
        out = sec_add(out, term) if i % 2 == 0 else sec_sub(out, term)
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            br = A.bracket(secs[i], secs[j])
            if sec_is_zero(br):
                continue
            rest = secs[:i] + secs[i + 1:j] + secs[j + 1:]
            term = D(br, *rest)
            out = sec_add(out, term) if (i + j) % 2 == 0 else sec_sub(out, term)
    return out


def differential(D, A, path="explicit"):
    """The deformation differential ``delta(D)`` on the algebroid ``A``.

    ``path="bracket"`` computes ``[m, D]``; ``path="explicit"`` evaluates the
    coboundary formula on frame tuples and builds the symbol as
    ``delta(sigma_D) + (-1)^(k-1) rho o D``.
    """
    if D.bundle != A.bundle:
        raise ValueError("cochain does not live on the algebroid's bundle")
    if path == "bracket":
        return gerstenhaber_bracket(A.m, D)
    if path != "explicit":
        raise ValueError(f"unknown path {path!r}")
    bundle = A.bundle
    k = D.degree
    frames = [bundle.frame(i) for i in range(bundle.rank)]
    tensor = {}
    for I in increasing_tuples(bundle.rank, k + 1):
        tensor[I] = explicit_coboundary(A, D, [frames[i] for i in I])
    symbol = {}
    sg = _sign(k - 1)
    for J in increasing_tuples(bundle.rank, k):
        secs = [frames[i] for i in J]
        val = A.rho(D(*secs))
        val = val if sg > 0 else -val
        if k >= 1 and D.symbol:
            val = val + _tm_coboundary(A, D.symbol_at, k - 1, secs)
        symbol[J] = val
    return DefCochain(bundle, k + 1, tensor, symbol)


# -- Der(R)-valued cochains -----------------------------------------------------


class TMValuedCochain:
    """A skew cochain of sections with values in vector fields.

    Without ``symbol`` it is R-multilinear (a form with values in Der(R)).
    With a symbol it obeys the anchored Leibniz rule

        D(..., f s_n) = f D(..., s_n) + sigma(...)(f) rho(s_n),

    which is the auxiliary complex used for regular algebroids.
    """

    __slots__ = ("algebroid", "degree", "tensor", "symbol")

    def __init__(self, algebroid, degree, tensor=None, symbol=None):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.algebroid, self.degree = algebroid, degree
        base, r = algebroid.base, algebroid.rank
        t, s = {}, {}
        for key, X in (tensor or {}).items():
            key = tuple(key)
            _check_key(key, degree, r)
            if X.base != base:
                raise ValueError("base mismatch")
            if X:
                t[key] = X
        for key, X in (symbol or {}).items():
            key = tuple(key)
            if degree == 0:
                raise ValueError("degree-0 cochains carry no symbol")
            _check_key(key, degree - 1, r)
            if X:
                s[key] = X
        self.tensor, self.symbol = t, s

    @property
    def base(self):
        return self.algebroid.base

    def is_zero(self):
        return not self.tensor and not self.symbol

    def __bool__(self):
        return not self.is_zero()

    def weights(self):
        b = self.algebroid.bundle
        ws = set()
        for store in (self.tensor, self.symbol):
            for I, X in store.items():
                for p, wa in zip(X.coeffs, b.base.weights):
                    ws |= {w - wa - b.sum_weights(I) for w in p.weights()}
        return ws

    def weight(self):
        ws = self.weights()
        return ws.pop() if len(ws) == 1 else None

    def symbol_cochain(self):
        """The symbol as a symbol-free cochain of one degree lower."""
        return TMValuedCochain(self.algebroid, self.degree - 1, self.symbol)

    def _form_at(self, store, sections):
        out = _field_zero(self.base)
        one = self.base.one()
        for I, X in store.items():
            d = _minor(sections, I, one)
            if d:
                out = out + X.times(d)
        return out

    def symbol_at(self, *sections):
        return self._form_at(self.symbol, sections)

    def __call__(self, *sections):
        if len(sections) != self.degree:
            raise ValueError(f"takes {self.degree} arguments, got {len(sections)}")
        out = self._form_at(self.tensor, sections)
        if self.symbol:
            A = self.algebroid
            n = self.degree - 1
            for i in range(self.degree):
                X = self.symbol_at(*(sections[:i] + sections[i + 1:]))
                if not X:
                    continue
                for a, f in enumerate(sections[i]):
                    g = X.apply(f)
                    if g:
                        term = A.anchor[a].times(g)
                        out = out + term if _sign(n + i) > 0 else out - term
        return out

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if other.algebroid is not self.algebroid and other.algebroid != self.algebroid:
            raise ValueError("different algebroids")
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        t = dict(self.tensor)
        for k, v in other.tensor.items():
            t[k] = t[k] + v if k in t else v
        s = dict(self.symbol)
        for k, v in other.symbol.items():
            s[k] = s[k] + v if k in s else v
        return TMValuedCochain(self.algebroid, self.degree, t, s)

    __radd__ = __add__

    def scale(self, c):
        return TMValuedCochain(
            self.algebroid,
            self.degree,
            {k: v.scale(c) for k, v in self.tensor.items()},
            {k: v.scale(c) for k, v in self.symbol.items()},
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, TMValuedCochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.tensor == other.tensor
            and self.symbol == other.symbol
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.tensor.items()), frozenset(self.symbol.items())))

    def __repr__(self):
        return f"TMValuedCochain(degree={self.degree}, tensor={self.tensor}, symbol={self.symbol})"


def tm_coboundary_operator(c, secs):
    """The coboundary formula for a Der(R)-valued cochain on arbitrary sections."""
    A = c.algebroid
    k = c.degree
    out = _field_zero(A.base)
    for i in range(k + 1):
        rest = secs[:i] + secs[i + 1:]
        val = c(*rest)
        if val:
            term = A.rho(secs[i]).bracket(val)
            out = out + term if i % 2 == 0 else out - term
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            br = A.bracket(secs[i], secs[j])
            if sec_is_zero(br):
                continue
            rest = secs[:i] + secs[i + 1:j] + secs[j + 1:]
            val = c(br, *rest)
            out = out + val if (i + j) % 2 == 0 else out - val
    return out


def tm_differential(c):
    """Differential of a Der(R)-valued cochain.

    The result is stored on frames; its symbol is ``delta(sigma) +
    (-1)^(k-1) c`` (zero symbol in, pure ``(-1)^(k-1) c`` symbol out), since
    the coboundary formula is not R-multilinear in the last slot.
    """
    A = c.algebroid
    bundle = A.bundle
    k = c.degree
    frames = [bundle.frame(i) for i in range(bundle.rank)]
    tensor = {}
    for I in increasing_tuples(bundle.rank, k + 1):
        tensor[I] = tm_coboundary_operator(c, [frames[i] for i in I])
    symbol = {}
    sg = _sign(k - 1)
    for J in increasing_tuples(bundle.rank, k):
        secs = [frames[i] for i in J]
        val = c(*secs)
        val = val if sg > 0 else -val
        if c.symbol:
            val = val + _tm_coboundary(A, c.symbol_at, k - 1, secs)
        symbol[J] = val
    return TMValuedCochain(A, k + 1, tensor, symbol)


# -- connection splitting -------------------------------------------------------


def _christoffel_term(gamma, X, s, bundle):
    """The part of ``nabla_X s`` beyond the frame-trivial connection."""
    r = bundle.rank
    out = [Poly(bundle.base) for _ in range(r)]
    for a, pa in enumerate(X.coeffs):
        if not pa:
            continue
        G = gamma[a]
        for j, fj in enumerate(s):
            if not fj:
                continue
            coeff = pa * fj
            for kk in range(r):
                g = G[kk][j]
                if g:
                    out[kk] = out[kk] + coeff * _as_poly(g, bundle.base)
    return tuple(out)


def _as_poly(g, base):
    return g if isinstance(g, Poly) else base.const(g)


def _nabla(gamma, X, s, bundle):
    return sec_add(_nabla0(X, s), _christoffel_term(gamma, X, s, bundle))


def _check_gamma(gamma, bundle):
    n, r = bundle.base.n, bundle.rank
    if len(gamma) != n or any(len(G) != r or any(len(row) != r for row in G) for G in gamma):
        raise ValueError(f"connection needs {n} matrices of size {r}x{r}")


@dataclass
class ConnectionSplit:
    """``L_D`` on frame tuples, the symbol, and the multilinearity check result."""

    degree: int
    tensor: dict
    symbol: dict
    multilinear: bool


def _split_operator(D, gamma, secs):
    """``L_D(s) = D(s) + (-1)^n sum_i (-1)^(i+1) nabla_{sigma(..s_i^..)} s_i``."""
    bundle = D.bundle
    out = D(*secs)
    if D.degree == 0:
        return out
    n = D.degree - 1
    for i in range(D.degree):
        X = D.symbol_at(*(secs[:i] + secs[i + 1:]))
        if not X:
            continue
        term = _nabla(gamma, X, secs[i], bundle)
        out = sec_add(out, term) if _sign(n + i + 1) > 0 else sec_sub(out, term)
    return out


def connection_split(D, gamma):
    """Split ``D`` along the connection with coefficients ``gamma``.

    ``gamma[a][k][j]`` is the ``e_k`` component of ``nabla_{d/dx_a} e_j``.
    Returns ``L_D`` on frame tuples (which is R-multilinear, checked on the
    sections ``x_a e_b`` in the last slot) together with ``sigma_D``.
    """
    bundle = D.bundle
    _check_gamma(gamma, bundle)
    frames = [bundle.frame(i) for i in range(bundle.rank)]
    tensor = {}
    for I in increasing_tuples(bundle.rank, D.degree):
        val = _split_operator(D, gamma, [frames[i] for i in I])
        if not sec_is_zero(val):
            tensor[I] = val
    ok = True
    if D.degree >= 1:
        xs = bundle.base.vars()
        for J in increasing_tuples(bundle.rank, D.degree - 1):
            head = [frames[i] for i in J]
            for b in range(bundle.rank):
                plain = _split_operator(D, gamma, head + [frames[b]])
                for x in xs:
                    lhs = _split_operator(D, gamma, head + [sec_scale(x, frames[b])])
                    if lhs != sec_scale(x, plain):
                        ok = False
    return ConnectionSplit(D.degree, tensor, dict(D.symbol), ok)


def connection_join(bundle, degree, tensor, symbol, gamma):
    """Inverse of :func:`connection_split`."""
    _check_gamma(gamma, bundle)
    sym = DefCochain(bundle, degree, {}, symbol) if degree >= 1 else None
    out = {}
    n = degree - 1
    frames = [bundle.frame(i) for i in range(bundle.rank)]
    for I in increasing_tuples(bundle.rank, degree):
        val = tensor.get(I, bundle.zero_section())
        if sym is not None and sym.symbol:
            for i in range(degree):
                rest = [frames[j] for j in I[:i] + I[i + 1:]]
                X = sym.symbol_at(*rest)
                if not X:
                    continue
                term = _christoffel_term(gamma, X, frames[I[i]], bundle)
                # undo the sign used by the split
                val = sec_sub(val, term) if _sign(n + i + 1) > 0 else sec_add(val, term)
        out[I] = val
    return DefCochain(bundle, degree, out, symbol if degree >= 1 else None)


# -- weight slices --------------------------------------------------------------


class CochainSlice:
    """Ordered monomial basis of the weight-``weight`` part of degree ``degree``.

    Keys are ``("T", I, b, exp)`` for the monomial ``x^exp e_b`` as the value
    on ``e_I``, then ``("S", J, a, exp)`` for ``x^exp d/dx_a`` as the symbol
    on ``e_J``.  Order: tensor block first, lexicographic in ``(I, b)`` or
    ``(J, a)``, monomials in descending lexicographic order.
    """

    def __init__(self, bundle, degree, weight):
        self.bundle, self.degree, self.weight = bundle, degree, weight
        base = bundle.base
        keys = []
        for I in increasing_tuples(bundle.rank, degree):
            for b in range(bundle.rank):
                w = bundle.sum_weights(I) + weight - bundle.weights[b]
                keys.extend(("T", I, b, e) for e in monomial_basis(base, w))
        if degree >= 1:
            for J in increasing_tuples(bundle.rank, degree - 1):
                for a in range(base.n):
                    w = bundle.sum_weights(J) + weight + base.weights[a]
                    keys.extend(("S", J, a, e) for e in monomial_basis(base, w))
        self.keys = tuple(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return (self.element(i) for i in range(len(self.keys)))

    def element(self, i):
        kind, idx, c, exp = self.keys[i]
        base = self.bundle.base
        mono = Poly(base, {exp: 1})
        if kind == "T":
            val = [Poly(base)] * self.bundle.rank
            val[c] = mono
            return DefCochain(self.bundle, self.degree, {idx: val})
        coeffs = [Poly(base)] * base.n
        coeffs[c] = mono
        return DefCochain(self.bundle, self.degree, {}, {idx: PolyDerivation(base, coeffs)})

    def vector(self, D):
        """Coordinates of ``D``; raises ``ValueError`` if ``D`` leaves the slice."""
        if D.degree != self.degree:
            raise ValueError("degree mismatch")
        vec = [Fraction(0)] * len(self.keys)
        for I, val in D.tensor.items():
            for b, p in enumerate(val):
                for e, c in p.terms.items():
                    vec[self._pos(("T", I, b, e))] = c
        for J, X in D.symbol.items():
            for a, p in enumerate(X.coeffs):
                for e, c in p.terms.items():
                    vec[self._pos(("S", J, a, e))] = c
        return tuple(vec)

    def _pos(self, key):
        i = self.index.get(key)
        if i is None:
            raise ValueError(f"cochain component {key} is outside the weight-{self.weight} slice")
        return i

    def cochain(self, vec):
        if len(vec) != len(self.keys):
            raise ValueError("coordinate vector has the wrong length")
        base, bundle = self.bundle.base, self.bundle
        t, s = {}, {}
        for c, key in zip(vec, self.keys):
            if not c:
                continue
            kind, idx, j, e = key
            if kind == "T":
                t.setdefault(idx, {}).setdefault(j, {})[e] = c
            else:
                s.setdefault(idx, {}).setdefault(j, {})[e] = c
        tensor = {
            I: [Poly(base, d.get(b)) for b in range(bundle.rank)] for I, d in t.items()
        }
        symbol = {
            J: PolyDerivation(base, [Poly(base, d.get(a)) for a in range(base.n)])
            for J, d in s.items()
        }
        return DefCochain(bundle, self.degree, tensor, symbol)


def basis_slice(A, k, w):
    """The :class:`CochainSlice` of ``DC^k(A)`` in weight ``w``."""
    bundle = getattr(A, "bundle", A)
    return CochainSlice(bundle, k, w)


def slice_matrix(source, target, op):
    """Matrix of a linear operator between two slices, column by column."""
    cols = [target.vector(op(x)) for x in source]
    return RatMatrix.from_columns(len(target), cols)


def top_degree(A):
    """Highest degree with nonzero cochains: ``r + 1`` (a symbol on ``r``
    sections), or ``r`` over a point where symbols vanish."""
    return A.rank + 1 if A.base.n else A.rank


def deformation_complex(A, w, path="explicit"):
    """The weight-``w`` slice of the deformation complex.

    Degrees run over ``0..top_degree(A)``.  Returns ``(complex, slices)``
    with ``slices[k]`` the basis in degree ``k``.
    """
    cache = A._cache
    key = ("defcomplex", w, path)
    if key not in cache:
        hi = top_degree(A)
        slices = {k: CochainSlice(A.bundle, k, w) for k in range(0, hi + 2)}
        maps = {
            k: slice_matrix(slices[k], slices[k + 1], lambda D: differential(D, A, path))
            for k in range(0, hi + 1)
        }
        C = FiniteComplex(0, hi, {k: len(slices[k]) for k in range(0, hi + 1)}, maps)
        cache[key] = (C, slices)
    return cache[key]


def betti_def(A, weights):
    """Betti numbers ``{(k, w): dim}`` of the deformation complex."""
    out = {}
    for w in weights:
        C, _ = deformation_complex(A, w)
        for k, b in betti(C).items():
            out[(k, w)] = b
    return out


@dataclass
class LowDegreeClasses:
    """Center (degree 0) and outer derivations (degree 1) in one weight."""

    weight: int
    center: list
    outer_derivations: list

    @property
    def center_dim(self):
        return len(self.center)

    @property
    def outder_dim(self):
        return len(self.outer_derivations)


def center_and_outder(A, weights):
    """Representatives of ``DH^0`` (central sections) and ``DH^1`` per weight.

    The dimensions are cross-checked against :func:`betti_def`.
    """
    out = {}
    for w in weights:
        C, slices = deformation_complex(A, w)
        h0, h1 = cohomology(C, 0), cohomology(C, 1)
        b = betti(C)
        if (h0.dim, h1.dim) != (b[0], b[1]):
            raise AssertionError("cohomology representatives disagree with Betti numbers")
        out[w] = LowDegreeClasses(
            w,
            [slices[0].cochain(v).as_section() for v in h0.reps],
            [slices[1].cochain(v) for v in h1.reps],
        )
    return out


def tangent_homotopy(A, D):
    """For an algebroid whose anchor sends the frame to the coordinate fields,
    return ``(-1)^k delta(rho^-1 sigma_D)``; it equals ``D`` when ``D`` is closed."""
    base = A.base
    n = base.n
    if A.rank != n or any(A.anchor[a] != PolyDerivation.coordinate(base, a) for a in range(n)):
        raise ValueError("anchor must send e_a to d/dx_a")
    if D.degree == 0:
        raise ValueError("degree-0 cochains have no symbol")
    lifted = DefCochain(
        A.bundle, D.degree - 1, {J: X.coeffs for J, X in D.symbol.items()}
    )
    d = differential(lifted, A)
    return d if D.degree % 2 == 0 else -d
