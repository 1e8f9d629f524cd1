"""Short exact sequences of complexes around the deformation complex.

* Action algebroids: ``0 -> C^{n-1}(A; TM) -> DC^n(A) -> C^n(A; g_M) -> 0``,
  the inclusion sending a form to the pure-symbol cochain and the
  projection reading the tensor part in the constant frame.
* Regular algebroids, given adapted frames: the sequences
  ``0 -> C(A; g(A)) -> DC(A) -> C_1 -> 0`` and
  ``0 -> C_1 -> C_2 -> C(A; nu) -> 0`` where ``C_2`` consists of
  anchored-Leibniz cochains with values in vector fields and ``C_1`` is
  the image of ``D -> (rho o D, sigma_D)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ._exterior import det, increasing_tuples
from .algebroid import ActionAlgebroid, Representation, validate_representation
from .defcomplex import (
    DefCochain,
    TMValuedCochain,
    deformation_complex,
    tm_differential,
)
from .derham import DeRhamCochain, DeRhamSlice, derham_complex
from .polybase import Poly, PolyDerivation, monomial_basis
from .ratlin import (
    FiniteComplex,
    RatMatrix,
    SesOfComplexes,
    betti,
    les_from_ses,
    pivot_columns,
    rank_kernel,
    solve_or_none,
)

__all__ = [
    "build_action_ses",
    "RegularData",
    "TMSlice",
    "c2_complex",
    "build_regular_ses",
    "RegularSequences",
]


def _shift_up(C, hi):
    """The complex ``n -> C^{n-1}`` on degrees ``0..hi``."""
    dims = {n: C.dim(n - 1) for n in range(0, hi + 1)}
    maps = {n: C.d(n - 1) for n in range(0, hi + 1) if C.dim(n - 1)}
    return FiniteComplex(0, hi, dims, maps)


def _extend(C, hi):
    """``C`` viewed on degrees ``0..hi`` (zero above its top degree)."""
    dims = {n: C.dim(n) for n in range(0, hi + 1)}
    maps = {}
    for n in range(0, hi + 1):
        if C.dim(n) and C.dim(n + 1):
            maps[n] = C.d(n)
    return FiniteComplex(0, hi, dims, maps)


def _key_map(src_keys, tgt_index, translate, rows):
    entries = {}
    for j, key in enumerate(src_keys):
        tkey = translate(key)
        if tkey is None:
            continue
        i = tgt_index.get(tkey)
        if i is None:
            raise ValueError(f"basis element {key} has no image {tkey}")
        entries[(i, j)] = Fraction(1)
    return RatMatrix(rows, len(src_keys), entries)


def build_action_ses(A, w):
    """The action-algebroid sequence in weight ``w`` as a :class:`SesOfComplexes`."""
    if not isinstance(A, ActionAlgebroid):
        raise TypeError("build_action_ses needs an algebroid built by build_action_algebroid")
    hi = A.rank + 1
    mid, dslices = deformation_complex(A, w)
    tm, g = A._cache.setdefault("tm_rep", A.tm_rep()), A._cache.setdefault("g_rep", A.g_rep())
    Ctm, tslices = derham_complex(A, tm, w)
    Cg, gslices = derham_complex(A, g, w)
    sub = _shift_up(Ctm, hi)
    quot = _extend(Cg, hi)
    inc, proj = {}, {}
    for n in range(0, hi + 1):
        dkeys = dslices[n]
        if n >= 1:
            inc[n] = _key_map(
                tslices[n - 1].keys, dkeys.index, lambda k: ("S", k[0], k[1], k[2]), len(dkeys)
            )
        else:
            inc[n] = RatMatrix.zeros(len(dkeys), 0)
        gkeys = gslices[n].keys if n <= A.rank else ()
        gindex = {k: i for i, k in enumerate(gkeys)}
        proj[n] = _key_map(
            dkeys.keys,
            gindex,
            lambda k: (k[1], k[2], k[3]) if k[0] == "T" else None,
            len(gkeys),
        )
    return SesOfComplexes(sub, mid, quot, inc, proj)


# -- regular algebroids ---------------------------------------------------------


def _adjugate_inverse(M, base, what):
    """Inverse of a square polynomial matrix whose determinant is a nonzero constant."""
    n = len(M)
    one = base.one()
    if n == 0:
        return []
    D = det(M, one)
    if not D or not D.is_constant():
        raise ValueError(f"{what} is not a basis: determinant {D} is not a nonzero constant")
    inv_d = 1 / D.constant_term()
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = det(minor, one)
            if (i + j) % 2:
                cof = -cof
            inv[i][j] = cof.scale(inv_d)
    return inv


def _apply(M, v, base):
    return tuple(
        sum((M[i][j] * v[j] for j in range(len(v)) if M[i][j] and v[j]), Poly(base))
        for i in range(len(M))
    )


class RegularData:
    """Adapted frames for a regular algebroid.

    ``kernel``: sections spanning ker(rho) (the isotropy ``g(A)``);
    ``complement``: sections completing them to a frame of A;
    ``normal``: vector fields completing ``rho(complement)`` to a frame of
    Der(R) (modelling ``nu``).  All are validated on construction and
    the induced representations on ``g(A)`` and ``nu`` are checked flat.
    """

    def __init__(self, A, kernel, complement, normal):
        base = A.base
        self.owner = A
        self.kernel = [A.bundle.section(s) for s in kernel]
        self.complement = [A.bundle.section(s) for s in complement]
        self.normal = list(normal)
        r, n = A.rank, base.n
        if len(self.kernel) + len(self.complement) != r:
            raise ValueError(f"kernel and complement must together have {r} sections")
        if len(self.complement) + len(self.normal) != n:
            raise ValueError(f"rho(complement) and normal must together have {n} fields")
        for i, s in enumerate(self.kernel):
            if A.rho(s):
                raise ValueError(f"kernel section {i} is not in the kernel of the anchor")
        for label, items, wf in (
            ("kernel", self.kernel, A.bundle.section_weight),
            ("complement", self.complement, A.bundle.section_weight),
            ("normal", self.normal, lambda X: X.weight()),
        ):
            for i, s in enumerate(items):
                if wf(s) is None:
                    raise ValueError(f"{label} element {i} is not homogeneous")
        frame_cols = self.kernel + self.complement
        M = [[frame_cols[j][i] for j in range(r)] for i in range(r)]
        self._a_inv = _adjugate_inverse(M, base, "kernel + complement")
        self.images = [A.rho(s) for s in self.complement]
        fields = self.images + self.normal
        T = [[fields[j].coeffs[a] for j in range(n)] for a in range(n)]
        self._t_inv = _adjugate_inverse(T, base, "rho(complement) + normal")
        self.g_rep = self._kernel_rep()
        self.nu_rep = self._bott_rep()
        for rep in (self.g_rep, self.nu_rep):
            report = validate_representation(rep)
            if not report.passed:
                raise ValueError(f"induced connection on {rep.label} fails: {report.failures()}")

    def section_coords(self, s):
        """Coordinates of a section in the adapted frame (kernel first)."""
        return _apply(self._a_inv, s, self.owner.base)

    def field_coords(self, X):
        """Coordinates of a vector field in ``rho(complement) + normal``."""
        return _apply(self._t_inv, X.coeffs, self.owner.base)

    def normal_part(self, X):
        return self.field_coords(X)[len(self.images):]

    def _kernel_rep(self):
        A = self.owner
        nk = len(self.kernel)
        frames = [A.bundle.frame(i) for i in range(A.rank)]
        gamma = []
        for i in range(A.rank):
            G = [[Poly(A.base)] * nk for _ in range(nk)]
            for j, kj in enumerate(self.kernel):
                coords = self.section_coords(A.bracket(frames[i], kj))
                if any(coords[nk:]):
                    raise ValueError("bracket with a kernel section leaves the kernel")
                for k in range(nk):
                    G[k][j] = coords[k]
            gamma.append(G)
        weights = [A.bundle.section_weight(s) for s in self.kernel]
        names = [f"k{j + 1}" for j in range(nk)]
        return Representation(A, names, weights, gamma, label="g(A)")

    def _bott_rep(self):
        A = self.owner
        nn = len(self.normal)
        gamma = []
        for i in range(A.rank):
            G = [[Poly(A.base)] * nn for _ in range(nn)]
            for b, N in enumerate(self.normal):
                coords = self.normal_part(A.anchor[i].bracket(N))
                for k in range(nn):
                    G[k][b] = coords[k]
            gamma.append(G)
        weights = [N.weight() for N in self.normal]
        names = [f"n{b + 1}" for b in range(nn)]
        return Representation(A, names, weights, gamma, label="nu")


class TMSlice:
    """Monomial basis of the weight-``weight`` part of ``C_2^degree``.

    Keys ``("T", I, a, exp)`` for ``x^exp d/dx_a`` as the value on ``e_I``
    and ``("S", J, a, exp)`` for the symbol on ``e_J``.
    """

    def __init__(self, A, degree, weight):
        self.owner, self.degree, self.weight = A, degree, weight
        base, bundle = A.base, A.bundle
        keys = []
        for kind, k in (("T", degree), ("S", degree - 1)):
            for I in increasing_tuples(A.rank, k):
                for a in range(base.n):
                    w = bundle.sum_weights(I) + weight + base.weights[a]
                    keys.extend((kind, I, a, e) for e in monomial_basis(base, w))
        self.keys = tuple(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def _field(self, a, e):
        base = self.owner.base
        coeffs = [Poly(base)] * base.n
        coeffs[a] = Poly(base, {e: 1})
        return PolyDerivation(base, coeffs)

    def __iter__(self):
        for kind, I, a, e in self.keys:
            X = self._field(a, e)
            if kind == "T":
                yield TMValuedCochain(self.owner, self.degree, {I: X})
            else:
                yield TMValuedCochain(self.owner, self.degree, {}, {I: X})

    def vector(self, c):
        vec = [Fraction(0)] * len(self.keys)
        for kind, store in (("T", c.tensor), ("S", c.symbol)):
            for I, X in store.items():
                for a, p in enumerate(X.coeffs):
                    for e, v in p.terms.items():
                        i = self.index.get((kind, I, a, e))
                        if i is None:
                            raise ValueError(f"component {(kind, I, a, e)} is outside the slice")
                        vec[i] = v
        return tuple(vec)

    def cochain(self, vec):
        base = self.owner.base
        acc = {"T": {}, "S": {}}
        for v, (kind, I, a, e) in zip(vec, self.keys):
            if v:
                acc[kind].setdefault(I, {}).setdefault(a, {})[e] = v

        def build(d):
            return {
                I: PolyDerivation(base, [Poly(base, m.get(a)) for a in range(base.n)])
                for I, m in d.items()
            }
        return TMValuedCochain(self.owner, self.degree, build(acc["T"]), build(acc["S"]))


def c2_complex(A, w):
    """Weight-``w`` slice of ``C_2`` in degrees ``0..rank+1``; returns ``(complex, slices)``."""
    key = ("c2", w)
    if key not in A._cache:
        hi = A.rank + 1
        slices = {n: TMSlice(A, n, w) for n in range(0, hi + 2)}
        maps = {}
        for n in range(0, hi + 1):
            cols = [slices[n + 1].vector(tm_differential(x)) for x in slices[n]]
            maps[n] = RatMatrix.from_columns(len(slices[n + 1]), cols)
        A._cache[key] = (FiniteComplex(0, hi, {n: len(slices[n]) for n in range(0, hi + 1)}, maps), slices)
    return A._cache[key]


def _anchor_map(D, A):
    """``D -> (rho o D, sigma_D)`` from the deformation complex into ``C_2``."""
    tensor = {I: A.rho(v) for I, v in D.tensor.items()}
    return TMValuedCochain(A, D.degree, tensor, dict(D.symbol))


def _image_complex(C_target, phi, hi):
    """Image of a chain map ``phi`` (degreewise matrices) as a complex.

    Returns ``(complex, bases, coordinate_maps)`` with ``bases[n]`` the
    pivot columns of ``phi[n]`` (as a matrix into the target) and
    ``coordinate_maps[n]`` expressing ``phi[n]`` in that basis.
    """
    bases, coords, dims = {}, {}, {}
    for n in range(0, hi + 1):
        P = phi[n]
        cols = P.columns()
        piv = pivot_columns(P)
        B = RatMatrix.from_columns(P.shape[0], [cols[j] for j in piv])
        bases[n] = B
        dims[n] = len(piv)
        coord_cols = []
        for col in cols:
            x = solve_or_none(B, col)
            coord_cols.append(x)
        coords[n] = RatMatrix.from_columns(len(piv), coord_cols)
    maps = {}
    for n in range(0, hi):
        dB = C_target.d(n) @ bases[n]
        cols = []
        for col in dB.columns():
            x = solve_or_none(bases[n + 1], col)
            if x is None:
                raise ArithmeticError("image is not a subcomplex")
            cols.append(x)
        maps[n] = RatMatrix.from_columns(dims[n + 1], cols)
    return FiniteComplex(0, hi, dims, maps), bases, coords


@dataclass
class RegularSequences:
    """Both sequences of the regular case in one weight, with certificates."""

    weight: int
    seq1: SesOfComplexes
    seq2: SesOfComplexes
    les1: object
    les2: object
    c2_betti: dict
    c2_homotopy: bool
    composite: list = field(default_factory=list)

    @property
    def c2_acyclic(self):
        return not any(self.c2_betti.values()) and self.c2_homotopy

    @property
    def exact(self):
        """Exactness of the long exact sequence relating ``H(A; g(A))``,
        ``DH(A)`` and ``H^{*-1}(A; nu)``."""
        isos = all(
            M.shape[0] == M.shape[1] and _full_rank(M) for M in self.les2.connecting.values()
        )
        return self.les1.exact and self.les2.exact and isos


def _full_rank(M):
    from .ratlin import rank

    return rank(M) == min(M.shape)


def _c2_homotopy_holds(A, C2, slices):
    """Every cocycle ``D`` of ``C_2^n`` equals ``(-1)^n delta(sigma_D)``."""
    for n in C2.degrees():
        _, cycles = rank_kernel(C2.d(n))
        for z in cycles:
            D = slices[n].cochain(z)
            if n == 0:
                if D:
                    return False
                continue
            sigma = D.symbol_cochain()
            d = tm_differential(sigma)
            if (d if n % 2 == 0 else -d) != D:
                return False
    return True


def build_regular_ses(R, w):
    """Build both sequences in weight ``w`` and certify ``C_2`` acyclicity."""
    A = R.owner
    hi = A.rank + 1
    mid, dslices = deformation_complex(A, w)
    Cg, gslices = derham_complex(A, R.g_rep, w)
    Cnu, nslices = derham_complex(A, R.nu_rep, w)
    C2, tslices = c2_complex(A, w)
    # seq1: C(A; g) -> DC -> C_1
    jmaps = {}
    for n in range(0, hi + 1):
        cols = []
        src = gslices[n] if n <= A.rank else DeRhamSlice(A, R.g_rep, n, w)
        for c in src:
            tensor = {}
            for I, v in c.values.items():
                s = A.bundle.zero_section()
                for j, g in enumerate(v):
                    if g:
                        s = tuple(a + g * b for a, b in zip(s, R.kernel[j]))
                tensor[I] = s
            cols.append(dslices[n].vector(DefCochain(A.bundle, n, tensor)))
        jmaps[n] = RatMatrix.from_columns(len(dslices[n]), cols)
    phi = {}
    for n in range(0, hi + 1):
        cols = [tslices[n].vector(_anchor_map(D, A)) for D in dslices[n]]
        phi[n] = RatMatrix.from_columns(len(tslices[n]), cols)
    C1, c1_bases, c1_coords = _image_complex(C2, phi, hi)
    sub1 = _extend(Cg, hi)
    seq1 = SesOfComplexes(sub1, mid, C1, jmaps, c1_coords)
    # seq2: C_1 -> C_2 -> C(A; nu)
    pmaps = {}
    for n in range(0, hi + 1):
        tgt = nslices[n] if n <= A.rank else DeRhamSlice(A, R.nu_rep, n, w)
        cols = []
        for c in tslices[n]:
            vals = {}
            for I, X in c.tensor.items():
                vals[I] = R.normal_part(X)
            cols.append(tgt.vector(DeRhamCochain(A, R.nu_rep, n, vals)))
        pmaps[n] = RatMatrix.from_columns(len(tgt), cols)
    quot2 = _extend(Cnu, hi)
    seq2 = SesOfComplexes(C1, C2, quot2, c1_bases, pmaps)
    les1 = les_from_ses(seq1)
    les2 = les_from_ses(seq2)
    c2b = betti(C2)
    homotopy = _c2_homotopy_holds(A, C2, tslices)
    composite = []
    for n in range(0, hi + 1):
        composite.append(
            {
                "degree": n,
                "H(A;g)": les1.h_sub.get(n, 0),
                "DH": les1.h_mid.get(n, 0),
                "H(A;nu) shifted": les2.h_quot.get(n - 1, 0) if n >= 1 else 0,
            }
        )
    return RegularSequences(w, seq1, seq2, les1, les2, c2b, homotopy, composite)
