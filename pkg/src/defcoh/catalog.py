"""Built-in examples: small algebroids, Poisson structures and families."""

from .algebroid import (
    Algebroid,
    build_action_algebroid,
    build_cotangent_algebroid,
    build_lie_algebra,
    build_tangent_model,
)
from .defcomplex import DefCochain, FrameBundle
from .deformation import BracketFamily
from .poisson import MultiVectorField
from .polybase import BaseSpec, Poly, PolyDerivation
from .sequences import RegularData

__all__ = [
    "SL2_BRACKETS",
    "sl2",
    "heisenberg",
    "abelian",
    "tangent",
    "sl2_on_plane",
    "so3_bivector",
    "so3_cotangent",
    "bundle_sl2",
    "abelian_family",
    "aff1_scaling",
    "constant_family",
    "tangent_regular_data",
    "bundle_sl2_regular_data",
]

SL2_BRACKETS = {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}


def sl2():
    """``[h,e] = 2e``, ``[h,f] = -2f``, ``[e,f] = h``."""
    return build_lie_algebra(SL2_BRACKETS, names=("h", "e", "f"), label="sl2")


def heisenberg():
    return build_lie_algebra({(0, 1): (0, 0, 1)}, names=("e1", "e2", "e3"), label="h3")


def abelian(r):
    return build_lie_algebra({}, names=tuple(f"e{i + 1}" for i in range(r)), label=f"abelian{r}")


def tangent(n):
    return build_tangent_model(BaseSpec.standard(n), label=f"tangent{n}")


def sl2_on_plane():
    """sl(2) acting on the plane by ``h = x d/dx - y d/dy``, ``e = x d/dy``, ``f = y d/dx``."""
    B = BaseSpec(("x", "y"), (1, 1))
    x, y = B.vars()
    z = Poly(B)
    action = [PolyDerivation(B, [x, -y]), PolyDerivation(B, [z, x]), PolyDerivation(B, [y, z])]
    return build_action_algebroid(SL2_BRACKETS, action, B, names=("h", "e", "f"), label="sl2 x Q2")


def so3_bivector():
    B = BaseSpec.standard(3)
    x1, x2, x3 = B.vars()
    return MultiVectorField(B, 2, {(0, 1): x3, (1, 2): x1, (2, 0): x2})


def so3_cotangent():
    return build_cotangent_algebroid(so3_bivector(), label="so3 cotangent")


def bundle_sl2():
    """The trivial bundle of sl(2) over the line, zero anchor."""
    B = BaseSpec.standard(1)
    bundle = FrameBundle(B, ("h", "e", "f"), (0, 0, 0))
    brackets = {k: [B.const(c) for c in v] for k, v in SL2_BRACKETS.items()}
    return Algebroid(bundle, brackets, [PolyDerivation(B)] * 3, label="sl2 bundle")


def tangent_regular_data(A):
    """Adapted frames of a tangent model: the anchor is an isomorphism."""
    return RegularData(A, [], [A.bundle.frame(i) for i in range(A.rank)], [])


def bundle_sl2_regular_data(A):
    """Adapted frames of :func:`bundle_sl2`: everything is isotropy."""
    return RegularData(
        A, [A.bundle.frame(i) for i in range(A.rank)], [], [PolyDerivation.coordinate(A.base, 0)]
    )


def abelian_family():
    """Abelian ``Q^2`` deformed by ``t mu`` with ``mu = [e1, e2] = e2``."""
    A = abelian(2)
    B = A.base
    mu = DefCochain(A.bundle, 2, {(0, 1): [B.const(0), B.const(1)]})
    return BracketFamily(A.bundle, [A.m, mu], label="abelian + t mu")


def aff1_scaling():
    """``[e1, e2] = (1 + t) e2``: a rescaling of aff(1), trivial near ``t = 0``."""
    A = build_lie_algebra({(0, 1): (0, 1)}, names=("e1", "e2"), label="aff1")
    return BracketFamily(A.bundle, [A.m, A.m], label="aff1 scaling")


def constant_family(A):
    return BracketFamily(A.bundle, [A.m], label=f"{A.label or 'constant'} constant")
