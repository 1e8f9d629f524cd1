"""Graded Lie-Rinehart algebroids on free modules, their representations,
validation and the standard constructors.

An algebroid is a :class:`~defcoh.defcomplex.FrameBundle` together with
structure functions ``[e_i, e_j] = sum_k c_ij^k e_k`` and an anchor
``rho(e_i)``.  Both are packaged in the structure cochain ``m`` of degree 2
(tensor part: the brackets, symbol: the anchor), which must have weight 0.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .defcomplex import (
    DefCochain,
    FrameBundle,
    gerstenhaber_bracket,
    sec_add,
    sec_is_zero,
)
from .polybase import BaseSpec, Poly, PolyDerivation

__all__ = [
    "Algebroid",
    "ActionAlgebroid",
    "Representation",
    "ValidationReport",
    "Check",
    "validate_algebroid",
    "validate_representation",
    "build_lie_algebra",
    "build_tangent_model",
    "build_action_algebroid",
    "build_cotangent_algebroid",
    "adjoint_representation",
    "tangent_representation",
]


class Algebroid:
    """A Lie-Rinehart algebroid with a global homogeneous frame.

    ``brackets`` maps pairs ``(i, j)`` with ``i < j`` to sections (tuples of
    ``rank`` polynomials); missing pairs bracket to zero.  ``anchor`` is one
    :class:`PolyDerivation` per frame element.  Nothing is validated here;
    see :func:`validate_algebroid`.
    """

    def __init__(self, bundle, brackets, anchor, label=None):
        self.bundle = bundle
        anchor = tuple(anchor)
        if len(anchor) != bundle.rank:
            raise ValueError(f"anchor needs {bundle.rank} vector fields, got {len(anchor)}")
        for X in anchor:
            if not isinstance(X, PolyDerivation) or X.base != bundle.base:
                raise TypeError("anchor values must be PolyDerivations on the base")
        br = {}
        for (i, j), val in brackets.items():
            if not (0 <= i < j < bundle.rank):
                raise ValueError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < rank")
            val = bundle.section(val)
            if not sec_is_zero(val):
                br[(i, j)] = val
        self.brackets = br
        self.anchor = anchor
        self.label = label
        self.m = DefCochain(bundle, 2, br, {(i,): X for i, X in enumerate(anchor)})
        self._cache = {}

    @classmethod
    def from_structure_cochain(cls, m, label=None):
        """The algebroid whose structure cochain is the degree-2 cochain ``m``."""
        if m.degree != 2:
            raise ValueError("structure cochains have degree 2")
        bundle = m.bundle
        anchor = [m.symbol_on_frames((i,)) for i in range(bundle.rank)]
        return cls(bundle, m.tensor, anchor, label=label)

    @property
    def base(self):
        return self.bundle.base

    @property
    def rank(self):
        return self.bundle.rank

    @property
    def names(self):
        return self.bundle.names

    @property
    def weights(self):
        return self.bundle.weights

    def structure(self, i, j):
        """``[e_i, e_j]`` as a section, for any ``i, j``."""
        return self.m.on_frames((i, j))

    def bracket(self, s, t):
        return self.m(s, t)

    def rho(self, s):
        out = PolyDerivation(self.base)
        for f, X in zip(s, self.anchor):
            if f and X:
                out = out + X.times(f)
        return out

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<Algebroid{tag} rank={self.rank} base={list(self.base.names)}>"


class ActionAlgebroid(Algebroid):
    """Action algebroid of a Lie algebra acting on affine space.

    Remembers the structure constants and the action so that the two
    canonical representations can be rebuilt.
    """

    def __init__(self, bundle, brackets, anchor, constants, label=None):
        super().__init__(bundle, brackets, anchor, label)
        self.constants = constants

    def g_rep(self):
        """The trivial bundle with fibre g and ``nabla_v w = [v, w]``."""
        r = self.rank
        base = self.base
        gamma = [
            [[base.const(self.constants[i][j][k]) for j in range(r)] for k in range(r)]
            for i in range(r)
        ]
        return Representation(self, self.names, (0,) * r, gamma, label="g_M")

    def tm_rep(self):
        """Vector fields with frame ``d/dx_a`` and ``nabla_v X = [rho(v), X]``."""
        return tangent_representation(self)


def tangent_representation(A):
    """Der(R) with frame ``d/dx_a`` (weight ``-w(x_a)``) and ``nabla_a X = [rho a, X]``."""
    base = A.base
    n = base.n
    gamma = []
    for i in range(A.rank):
        rho = A.anchor[i]
        gamma.append([[-rho.coeffs[b].diff(a) for a in range(n)] for b in range(n)])
    names = tuple(f"d_{x}" for x in base.names)
    return Representation(A, names, tuple(-w for w in base.weights), gamma, label="TM")


class Representation:
    """A free module with frame ``eps_j`` and an A-connection.

    ``gamma[i][k][j]`` is the ``eps_k`` component of ``nabla_{e_i} eps_j``;
    entries may be polynomials or rationals.  Flatness is checked by
    :func:`validate_representation`.
    """

    def __init__(self, owner, names, weights, gamma, label=None):
        self.owner = owner
        self.names = tuple(names)
        self.weights = tuple(int(w) for w in weights)
        s, r = len(self.names), owner.rank
        if len(self.weights) != s:
            raise ValueError("one weight per frame element required")
        if len(gamma) != r:
            raise ValueError(f"need one connection matrix per algebroid frame element ({r})")
        base = owner.base
        mats = []
        for G in gamma:
            if len(G) != s or any(len(row) != s for row in G):
                raise ValueError(f"connection matrices must be {s}x{s}")
            mats.append(tuple(tuple(_poly(g, base) for g in row) for row in G))
        self.gamma = tuple(mats)
        self.label = label

    @classmethod
    def trivial(cls, owner, weight=0):
        """The trivial line bundle, ``nabla_a f = rho(a) f``."""
        zero = Poly(owner.base)
        return cls(owner, ("1",), (weight,), [[[zero]] for _ in range(owner.rank)], label="trivial")

    @property
    def rank(self):
        return len(self.names)

    @property
    def base(self):
        return self.owner.base

    def is_frame_trivial(self):
        return not any(g for G in self.gamma for row in G for g in row)

    def zero_value(self):
        return (Poly(self.base),) * self.rank

    def frame(self, j):
        z, one = Poly(self.base), self.base.one()
        return tuple(one if i == j else z for i in range(self.rank))

    def value_weights(self, v):
        out = set()
        for p, wb in zip(v, self.weights):
            out |= {w + wb for w in p.weights()}
        return out

    def connection(self, alpha, v):
        """``nabla_alpha v`` for a section ``alpha`` of A and ``v`` of E."""
        A = self.owner
        out = list(self.zero_value())
        X = A.rho(alpha)
        if X:
            out = [o + X.apply(g) for o, g in zip(out, v)]
        for i, f in enumerate(alpha):
            if not f:
                continue
            G = self.gamma[i]
            for j, g in enumerate(v):
                if not g:
                    continue
                fg = f * g
                for k in range(self.rank):
                    if G[k][j]:
                        out[k] = out[k] + fg * G[k][j]
        return tuple(out)

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<Representation{tag} rank={self.rank} over {self.owner!r}>"


def _poly(g, base):
    if isinstance(g, Poly):
        if g.base != base:
            raise ValueError("base mismatch")
        return g
    return base.const(Fraction(g))


# -- validation -----------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    witness: tuple = None
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def validate_algebroid(A):
    """Check homogeneity of ``m`` (weight 0), Jacobi ``[m, m] = 0`` and that
    the anchor is a bracket morphism on frame pairs."""
    report = ValidationReport()
    names = A.names
    bundle = A.bundle
    # homogeneity
    bad = None
    for (i, j), val in sorted(A.brackets.items()):
        target = bundle.weights[i] + bundle.weights[j]
        for k, p in enumerate(val):
            if p and not p.is_homogeneous(target - bundle.weights[k]):
                bad = (names[i], names[j], names[k])
                detail = (
                    f"[{names[i]},{names[j]}] has {names[k]}-coefficient {p}, "
                    f"expected weight {target - bundle.weights[k]}"
                )
                break
        if bad:
            break
    if not bad:
        for i, X in enumerate(A.anchor):
            if not X.is_homogeneous(bundle.weights[i]):
                bad = (names[i],)
                detail = f"rho({names[i]}) = {X!r} is not homogeneous of weight {bundle.weights[i]}"
                break
    report.checks.append(Check("homogeneity", bad is None, bad, "" if bad is None else detail))
    # Jacobi via [m, m]
    mm = gerstenhaber_bracket(A.m, A.m)
    if mm.tensor:
        I = min(mm.tensor)
        report.checks.append(
            Check(
                "jacobi",
                False,
                tuple(names[i] for i in I),
                "Jacobiator of ("
                + ", ".join(names[i] for i in I)
                + ") is nonzero: "
                + _fmt_section(A, _jacobiator(A, I)),
            )
        )
    elif mm.symbol:
        J = min(mm.symbol)
        report.checks.append(
            Check("jacobi", False, tuple(names[i] for i in J), "symbol of [m,m] is nonzero")
        )
    else:
        report.checks.append(Check("jacobi", True))
    # anchor morphism
    bad = None
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            lhs = A.rho(A.structure(i, j))
            rhs = A.anchor[i].bracket(A.anchor[j])
            if lhs != rhs:
                bad = (names[i], names[j])
                detail = f"rho([{names[i]},{names[j]}]) = {lhs!r} but [rho,rho] = {rhs!r}"
                break
        if bad:
            break
    report.checks.append(Check("anchor_morphism", bad is None, bad, "" if bad is None else detail))
    return report


def _jacobiator(A, I):
    a, b, c = (A.bundle.frame(i) for i in I)
    br = A.bracket
    return sec_add(sec_add(br(a, br(b, c)), br(b, br(c, a))), br(c, br(a, b)))


def _fmt_section(A, s):
    parts = [f"({p})*{n}" for p, n in zip(s, A.names) if p]
    return " + ".join(parts) or "0"


def validate_representation(E):
    """Flatness on all frame pairs and frame elements, plus homogeneity."""
    A = E.owner
    report = ValidationReport()
    bad = None
    for i in range(A.rank):
        for j in range(E.rank):
            for k in range(E.rank):
                g = E.gamma[i][k][j]
                want = A.weights[i] + E.weights[j] - E.weights[k]
                if g and not g.is_homogeneous(want):
                    bad = (A.names[i], E.names[j], E.names[k])
                    break
            if bad:
                break
        if bad:
            break
    report.checks.append(Check("homogeneity", bad is None, bad))
    bad = None
    frames = [A.bundle.frame(i) for i in range(A.rank)]
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            for l in range(E.rank):
                eps = E.frame(l)
                lhs = E.connection(A.structure(i, j), eps)
                a = E.connection(frames[i], E.connection(frames[j], eps))
                b = E.connection(frames[j], E.connection(frames[i], eps))
                if lhs != tuple(x - y for x, y in zip(a, b)):
                    bad = (A.names[i], A.names[j], E.names[l])
                    break
            if bad:
                break
        if bad:
            break
    report.checks.append(
        Check("flatness", bad is None, bad, "" if bad is None else f"curvature nonzero on {bad}")
    )
    return report


# -- constructors ---------------------------------------------------------------


def _constants_array(constants, r=None):
    """Normalise structure constants to a dense ``r x r x r`` nested list."""
    if isinstance(constants, dict):
        if r is None:
            lengths = {len(v) for v in constants.values()}
            if len(lengths) != 1:
                raise ValueError("give names (the rank) or nonempty value vectors of one length")
            r = lengths.pop()
        c = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
        for (i, j), vec in constants.items():
            for k, v in enumerate(vec):
                c[i][j][k] = Fraction(v)
                c[j][i][k] = -Fraction(v)
        return c
    c = [[[Fraction(v) for v in row] for row in plane] for plane in constants]
    r = len(c)
    if any(len(plane) != r or any(len(row) != r for row in plane) for plane in c):
        raise ValueError("structure constants must be an r x r x r array")
    for i in range(r):
        for j in range(r):
            for k in range(r):
                if c[i][j][k] != -c[j][i][k]:
                    raise ValueError(
                        f"structure constants not antisymmetric at ({i}, {j}, {k})"
                    )
    return c


def _default_names(r, prefix="e"):
    return tuple(f"{prefix}{i + 1}" for i in range(r))


def build_lie_algebra(constants, names=None, label=None):
    """A Lie algebra as an algebroid over the point (no variables, weights 0).

    ``constants[i][j][k]`` is ``c_ij^k``; a dict ``{(i, j): [c_ij^1, ...]}``
    with ``names`` is accepted too.
    """
    r = len(names) if names is not None else None
    c = _constants_array(constants, r)
    r = len(c)
    names = tuple(names) if names is not None else _default_names(r)
    base = BaseSpec((), ())
    bundle = FrameBundle(base, names, (0,) * r)
    brackets = {
        (i, j): [base.const(c[i][j][k]) for k in range(r)] for i in range(r) for j in range(i + 1, r)
    }
    return Algebroid(bundle, brackets, [PolyDerivation(base)] * r, label=label)


def adjoint_representation(A):
    """Adjoint representation ``nabla_a b = [a, b]`` of a Lie algebra (point base)."""
    if A.base.n:
        raise ValueError("adjoint representation is only constant-coefficient over a point")
    r = A.rank
    gamma = [[[A.structure(i, j)[k] for j in range(r)] for k in range(r)] for i in range(r)]
    return Representation(A, A.names, A.weights, gamma, label="adjoint")


def build_tangent_model(base, label=None):
    """Vector fields on affine space: frame ``e_a`` of weight ``-w(x_a)``,
    anchor ``e_a -> d/dx_a``, zero structure functions."""
    n = base.n
    names = tuple(f"d{x}" for x in base.names)
    bundle = FrameBundle(base, names, tuple(-w for w in base.weights))
    anchor = [PolyDerivation.coordinate(base, a) for a in range(n)]
    return Algebroid(bundle, {}, anchor, label=label or "tangent")


def build_action_algebroid(constants, action, base, names=None, label=None):
    """The action algebroid of a Lie algebra acting by polynomial vector fields.

    Frame weights are 0, so every action field must be homogeneous of weight
    0 (linear for unit variable weights), and the action must be a Lie
    algebra morphism.
    """
    r = len(names) if names is not None else None
    c = _constants_array(constants, r)
    r = len(c)
    names = tuple(names) if names is not None else _default_names(r)
    action = tuple(action)
    if len(action) != r:
        raise ValueError(f"need one action vector field per generator ({r})")
    for i, X in enumerate(action):
        if not X.is_homogeneous(0):
            raise ValueError(
                f"action of {names[i]} must be homogeneous of weight 0; got weight(s) "
                f"{sorted(_field_weights(X))}"
            )
    for i in range(r):
        for j in range(i + 1, r):
            lhs = action[i].bracket(action[j])
            rhs = PolyDerivation(base)
            for k in range(r):
                if c[i][j][k]:
                    rhs = rhs + action[k].scale(c[i][j][k])
            if lhs != rhs:
                raise ValueError(
                    f"action is not a Lie algebra morphism on ({names[i]}, {names[j]})"
                )
    bundle = FrameBundle(base, names, (0,) * r)
    brackets = {
        (i, j): [base.const(c[i][j][k]) for k in range(r)] for i in range(r) for j in range(i + 1, r)
    }
    return ActionAlgebroid(bundle, brackets, action, c, label=label)


def _field_weights(X):
    ws = set()
    for p, wa in zip(X.coeffs, X.base.weights):
        ws |= {w - wa for w in p.weights()}
    return ws


def build_cotangent_algebroid(pi, label=None, weight=None):
    """The cotangent algebroid of a Poisson bivector ``pi``.

    Frame ``dx_a`` of weight ``W + w(x_a)`` where ``W`` is the multivector
    weight of ``pi``; anchor ``dx_a -> sum_b pi_ab d/dx_b``; brackets
    ``[dx_a, dx_b] = sum_c d(pi_ab)/dx_c dx_c``.  For ``pi = 0`` the weight
    ``W`` defaults to ``-1`` unless given.
    """
    from .poisson import is_poisson

    if pi.degree != 2:
        raise ValueError("a Poisson structure is a bivector")
    base = pi.base
    W = pi.weight()
    if W is None:
        if not pi.is_zero():
            raise ValueError("Poisson bivector must be homogeneous")
        W = -1 if weight is None else weight
    elif weight is not None and weight != W:
        raise ValueError(f"bivector has weight {W}, not {weight}")
    if not is_poisson(pi):
        raise ValueError("[pi, pi] != 0: not a Poisson bivector")
    n = base.n
    names = tuple(f"d{x}" for x in base.names)
    bundle = FrameBundle(base, names, tuple(W + w for w in base.weights))
    anchor = [
        PolyDerivation(base, [pi.coefficient((a, b)) for b in range(n)]) for a in range(n)
    ]
    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            p = pi.coefficient((a, b))
            brackets[(a, b)] = [p.diff(c) for c in range(n)]
    A = Algebroid(bundle, brackets, anchor, label=label or "cotangent")
    A.poisson = pi
    return A
