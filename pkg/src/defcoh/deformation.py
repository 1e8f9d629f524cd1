"""Polynomial one-parameter families of algebroid structures on a fixed
frame bundle, their deformation cocycles and triviality certificates.

A family is stored by its ``t``-coefficients: ``m_t = sum_j t^j m^(j)``
with each ``m^(j)`` a degree-2 cochain (brackets plus anchor) of weight 0.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebroid import Algebroid, Check, ValidationReport
from .defcomplex import (
    CochainSlice,
    DefCochain,
    deformation_complex,
    differential,
    gerstenhaber_bracket,
)
from .ratlin import RatMatrix, cohomology, solve_or_none

__all__ = [
    "BracketFamily",
    "DeformationClass",
    "TrivialitySolution",
    "PolynomialTriviality",
    "validate_family",
    "family_cocycle",
    "triviality_solve",
    "conjugate_family",
]


class BracketFamily:
    """``m_t = sum_j t^j coefficients[j]`` on a fixed :class:`FrameBundle`."""

    def __init__(self, bundle, coefficients, label=None):
        coefficients = list(coefficients)
        if not coefficients:
            raise ValueError("a family needs at least the t^0 coefficient")
        for j, m in enumerate(coefficients):
            if not isinstance(m, DefCochain) or m.degree != 2 or m.bundle != bundle:
                raise ValueError(f"t^{j} coefficient must be a degree-2 cochain on the bundle")
        while len(coefficients) > 1 and coefficients[-1].is_zero():
            coefficients.pop()
        self.bundle = bundle
        self.coefficients = coefficients
        self.label = label
        self._cache = {}

    @classmethod
    def from_algebroids(cls, algebroids, label=None):
        """Family whose ``t^j`` coefficient is the structure cochain of ``algebroids[j]``."""
        bundle = algebroids[0].bundle
        return cls(bundle, [A.m for A in algebroids], label=label)

    @property
    def t_degree(self):
        return len(self.coefficients) - 1

    def at(self, t):
        """The structure cochain ``m_t``."""
        t = Fraction(t)
        out = DefCochain.zero(self.bundle, 2)
        power = Fraction(1)
        for m in self.coefficients:
            if power:
                out = out + m.scale(power)
            power *= t
        return out

    def specialize(self, t):
        t = Fraction(t)
        if t not in self._cache:
            self._cache[t] = Algebroid.from_structure_cochain(
                self.at(t), label=f"{self.label or 'family'} at t={t}"
            )
        return self._cache[t]

    def derivative_cochain(self, t0=0):
        """``c_{t0} = d/dt m_t`` at ``t0``; its symbol is the anchor derivative."""
        t0 = Fraction(t0)
        out = DefCochain.zero(self.bundle, 2)
        for j in range(1, len(self.coefficients)):
            out = out + self.coefficients[j].scale(j * t0 ** (j - 1))
        return out

    def __repr__(self):
        return f"<BracketFamily {self.label or ''} t_degree={self.t_degree}>"


def validate_family(F):
    """Weight-0 homogeneity of every coefficient and ``[m_t, m_t] = 0`` in
    every power of ``t``; witnesses name the offending ``t``-power."""
    report = ValidationReport()
    names = F.bundle.names
    bad = None
    for j, m in enumerate(F.coefficients):
        if not m.is_homogeneous(0):
            bad = (j,)
            break
    report.checks.append(
        Check(
            "homogeneity",
            bad is None,
            bad,
            "" if bad is None else f"t^{bad[0]} coefficient is not homogeneous of weight 0",
        )
    )
    d = F.t_degree
    bad, detail = None, ""
    for s in range(0, 2 * d + 1):
        total = DefCochain.zero(F.bundle, 3)
        for j in range(max(0, s - d), min(s, d) + 1):
            total = total + gerstenhaber_bracket(F.coefficients[j], F.coefficients[s - j])
        if total.tensor:
            I = min(total.tensor)
            bad = (s,) + tuple(names[i] for i in I)
            detail = f"t^{s} coefficient of [m_t, m_t] is nonzero on ({', '.join(names[i] for i in I)})"
            break
        if total.symbol:
            J = min(total.symbol)
            bad = (s,) + tuple(names[i] for i in J)
            detail = f"t^{s} coefficient of the symbol of [m_t, m_t] is nonzero"
            break
    report.checks.append(Check("jacobi", bad is None, bad, detail))
    return report


@dataclass
class DeformationClass:
    """The cocycle ``c_{t0}`` of a family, its class and an exactness witness.

    ``coords`` are coordinates in the chosen basis of the weight-0 slice of
    ``DH^2(A_{t0})``; ``primitive`` is a ``D`` with ``delta(D) = c`` when the
    class vanishes.
    """

    t0: Fraction
    cocycle: DefCochain
    is_cocycle: bool
    coords: tuple
    primitive: object

    @property
    def is_zero(self):
        return not any(self.coords)


def _weight0_solve(A, c):
    C, slices = deformation_complex(A, 0)
    vec = slices[2].vector(c)
    x = solve_or_none(C.d(1), vec)
    return C, slices, vec, (None if x is None else slices[1].cochain(x))


def family_cocycle(F, t0=0):
    """The deformation cocycle at ``t0`` and its class in ``DH^2(A_{t0})``."""
    rep = validate_family(F)
    if not rep.passed:
        raise ValueError(f"invalid family: {rep.failures()[0].detail}")
    t0 = Fraction(t0)
    A = F.specialize(t0)
    c = F.derivative_cochain(t0)
    closed = not differential(c, A)
    if not closed:
        raise ArithmeticError("derivative of the family is not closed")
    C, slices, vec, prim = _weight0_solve(A, c)
    coords = cohomology(C, 2).coords(vec)
    return DeformationClass(t0, c, closed, coords, prim)


@dataclass
class TrivialitySolution:
    """Result of solving ``delta_t(D) = c_t`` at one parameter value."""

    t: Fraction
    primitive: object
    class_coords: tuple

    @property
    def solved(self):
        return self.primitive is not None


@dataclass
class PolynomialTriviality:
    """Coefficients ``D_i`` of ``D_t = sum_i t^i D_i`` or ``None`` if no solution."""

    ansatz_degree: int
    coefficients: object

    @property
    def solved(self):
        return self.coefficients is not None

    def at(self, t):
        t = Fraction(t)
        out = None
        for i, D in enumerate(self.coefficients):
            term = D.scale(t**i)
            out = term if out is None else out + term
        return out


def triviality_solve(F, samples=None, ansatz_degree=None):
    """Try to write ``c_t = delta_{A_t}(D_t)``.

    With ``samples`` (a list of rationals) solve at each value separately;
    with ``ansatz_degree`` solve the coefficient-wise system for a
    polynomial ``D_t`` of that ``t``-degree.
    """
    if (samples is None) == (ansatz_degree is None):
        raise ValueError("give exactly one of samples or ansatz_degree")
    if samples is not None:
        out = []
        for t in samples:
            cls = family_cocycle(F, t)
            out.append(TrivialitySolution(Fraction(t), cls.primitive, cls.coords))
        return out
    return _polynomial_solve(F, ansatz_degree)


def _polynomial_solve(F, N):
    bundle = F.bundle
    s1, s2 = CochainSlice(bundle, 1, 0), CochainSlice(bundle, 2, 0)
    d = F.t_degree
    blocks = {}
    for j, m in enumerate(F.coefficients):
        cols = [s2.vector(gerstenhaber_bracket(m, x)) for x in s1]
        blocks[j] = RatMatrix.from_columns(len(s2), cols)
    n1, n2 = len(s1), len(s2)
    rows = (d + N + 1) * n2
    entries = {}
    for s in range(d + N + 1):
        for i in range(N + 1):
            j = s - i
            if 0 <= j <= d:
                for (a, b), v in blocks[j].items():
                    entries[(s * n2 + a, i * n1 + b)] = v
    M = RatMatrix(rows, (N + 1) * n1, entries)
    rhs = [Fraction(0)] * rows
    for s in range(d):
        vec = s2.vector(F.coefficients[s + 1].scale(s + 1))
        for a, v in enumerate(vec):
            rhs[s * n2 + a] = v
    x = solve_or_none(M, rhs)
    if x is None:
        return PolynomialTriviality(N, None)
    coeffs = [s1.cochain(x[i * n1:(i + 1) * n1]) for i in range(N + 1)]
    return PolynomialTriviality(N, coeffs)


def conjugate_family(F, D, order=None):
    """The family ``exp(t ad_D) m_t`` truncated at ``t^order``.

    ``D`` is a weight-0 derivation (degree 1).  The truncation satisfies the
    Jacobi identity only up to terms of order ``t^(order+1)``, enough to
    compare deformation cocycles: ``c'_0 = c_0 - delta(D)``.
    """
    if D.degree != 1 or not D.is_homogeneous(0):
        raise ValueError("conjugating cochain must be a weight-0 derivation")
    if order is None:
        order = F.t_degree + 1
    powers = []
    for m in F.coefficients:
        chain = [m]
        for i in range(1, order + 1):
            chain.append(gerstenhaber_bracket(D, chain[-1]))
        powers.append(chain)
    coeffs = []
    for s in range(order + 1):
        total = DefCochain.zero(F.bundle, 2)
        for j, chain in enumerate(powers):
            i = s - j
            if 0 <= i <= order:
                total = total + chain[i].scale(Fraction(1, factorial(i)))
        coeffs.append(total)
    return BracketFamily(F.bundle, coeffs, label=f"{F.label or 'family'} conjugated")
