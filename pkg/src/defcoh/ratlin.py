"""Exact linear algebra over the rationals and bounded cochain complexes.

Everything here works with :class:`fractions.Fraction` entries.  Rank and
kernel computations clear denominators row by row and run a fraction-free
(Bareiss) elimination on Python integers; back-substitution is the only
place where fractions reappear.

Pivoting is canonical: leftmost pivot column, first nonzero row below the
current position, no row scaling until back-substitution.  Identical
inputs therefore give identical kernel bases and solutions.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

__all__ = [
    "RatMatrix",
    "FiniteComplex",
    "ComplexMap",
    "SesOfComplexes",
    "Cohomology",
    "LongExactSequence",
    "ComplexError",
    "rank",
    "rank_kernel",
    "solve_or_none",
    "betti",
    "cohomology",
    "les_from_ses",
]


class ComplexError(ValueError):
    """Raised when a complex or a sequence of complexes violates its invariants."""


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class RatMatrix:
    """Sparse rational matrix; absent entries are zero.

    Instances are treated as immutable after construction.
    """

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be non-negative")
        self.rows = rows
        self.cols = cols
        data = {}
        if entries:
            for (i, j), v in dict(entries).items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
                v = _frac(v)
                if v:
                    data[i, j] = v
        self._entries = data

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, data, cols=None):
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    entries[i, j] = v
        return cls(len(data), cols, entries)

    @classmethod
    def from_columns(cls, rows, columns):
        """Build from column data; each column is a sequence or a {row: value} dict."""
        entries = {}
        for j, col in enumerate(columns):
            items = col.items() if isinstance(col, dict) else enumerate(col)
            for i, v in items:
                if v:
                    entries[i, j] = v
        return cls(rows, len(columns), entries)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        return self._entries.get(ij, Fraction(0))

    def items(self):
        return self._entries.items()

    def nnz(self):
        return len(self._entries)

    def is_zero(self):
        return not self._entries

    def dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def column(self, j):
        col = [Fraction(0)] * self.rows
        for (i, jj), v in self._entries.items():
            if jj == j:
                col[i] = v
        return tuple(col)

    def columns(self):
        cols = [[Fraction(0)] * self.rows for _ in range(self.cols)]
        for (i, j), v in self._entries.items():
            cols[j][i] = v
        return [tuple(c) for c in cols]

    def transpose(self):
        return RatMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.shape, frozenset(self._entries.items())))

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) + v
        return RatMatrix(self.rows, self.cols, out)

    def __neg__(self):
        return RatMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _frac(c)
        return RatMatrix(self.rows, self.cols, {k: c * v for k, v in self._entries.items()})

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            by_row = {}
            for (k, j), v in other._entries.items():
                by_row.setdefault(k, []).append((j, v))
            out = {}
            for (i, k), a in self._entries.items():
                for j, b in by_row.get(k, ()):
                    out[i, j] = out.get((i, j), 0) + a * b
            return RatMatrix(self.rows, other.cols, out)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for matrix with {self.cols} columns")
        res = [Fraction(0)] * self.rows
        for (i, j), a in self._entries.items():
            if vec[j]:
                res[i] += a * vec[j]
        return tuple(res)

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols}, nnz={len(self._entries)})"

    @staticmethod
    def hstack(*mats):
        rows = mats[0].rows
        entries, off = {}, 0
        for m in mats:
            if m.rows != rows:
                raise ValueError("row count mismatch in hstack")
            for (i, j), v in m._entries.items():
                entries[i, j + off] = v
            off += m.cols
        return RatMatrix(rows, off, entries)

    @staticmethod
    def vstack(*mats):
        cols = mats[0].cols
        entries, off = {}, 0
        for m in mats:
            if m.cols != cols:
                raise ValueError("column count mismatch in vstack")
            for (i, j), v in m._entries.items():
                entries[i + off, j] = v
            off += m.rows
        return RatMatrix(off, cols, entries)


# -- elimination -----------------------------------------------------------

def _integer_rows(rows, cols, entries):
    """Dense integer rows, each rational row multiplied by the lcm of its denominators."""
    dense = [[Fraction(0)] * cols for _ in range(rows)]
    for (i, j), v in entries:
        dense[i][j] = v
    out = []
    for row in dense:
        den = 1
        for v in row:
            if v.denominator != 1:
                den = lcm(den, v.denominator)
        out.append([v.numerator * (den // v.denominator) for v in row])
    return out


def _bareiss(m, ncols):
    """Fraction-free row echelon form, in place.

    Returns the list of pivot columns; rows past ``len(pivots)`` are zero.
    After k pivot steps every remaining entry is a (k+1)-minor of the
    input, so the division by the previous pivot is exact.
    """
    nrows = len(m)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = r
        while piv < nrows and m[piv][c] == 0:
            piv += 1
        if piv == nrows:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        p = prow[c]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[c]
            if a:
                for j in range(c, ncols):
                    row[j] = (p * row[j] - a * prow[j]) // prev
            elif p != prev:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (p * row[j]) // prev
        prev = p
        pivots.append(c)
        r += 1
    return pivots


def _reduced(m, pivots, ncols):
    """Reduced row echelon rows (Fractions) from the integer echelon form."""
    rank = len(pivots)
    red = [[Fraction(v) for v in m[i]] for i in range(rank)]
    for i in range(rank - 1, -1, -1):
        c = pivots[i]
        row = red[i]
        p = row[c]
        if p != 1:
            row[:] = [v / p for v in row]
        for k in range(i):
            above = red[k]
            f = above[c]
            if f:
                above[:] = [x - f * y for x, y in zip(above, row)]
    return red


def rank(M):
    """Exact rank of a :class:`RatMatrix`."""
    if M.is_zero():
        return 0
    m = _integer_rows(M.rows, M.cols, M.items())
    return len(_bareiss(m, M.cols))


def rank_kernel(M):
    """Return ``(rank, kernel_basis)`` of ``M``.

    The kernel basis has one vector per free column of the canonical
    echelon form: that free variable set to one, the others to zero.
    """
    cols = M.cols
    if M.is_zero():
        basis = [tuple(Fraction(int(i == j)) for i in range(cols)) for j in range(cols)]
        return 0, basis
    m = _integer_rows(M.rows, cols, M.items())
    pivots = _bareiss(m, cols)
    red = _reduced(m, pivots, cols)
    pivset = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(tuple(v))
    return len(pivots), basis


def solve_or_none(M, b):
    """Solve ``M x = b`` exactly; ``None`` when the system is inconsistent.

    Free variables of the canonical echelon parameterisation are set to zero.
    """
    b = [_frac(v) for v in b]
    if len(b) != M.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {M.rows} rows")
    cols = M.cols
    if not any(b):
        return tuple(Fraction(0) for _ in range(cols))
    entries = list(M.items()) + [((i, cols), v) for i, v in enumerate(b) if v]
    m = _integer_rows(M.rows, cols + 1, entries)
    pivots = _bareiss(m, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    red = _reduced(m, pivots, cols + 1)
    x = [Fraction(0)] * cols
    for row, c in zip(red, pivots):
        x[c] = row[cols]
    return tuple(x)


def pivot_columns(M):
    """Indices of the pivot columns of the canonical echelon form of ``M``."""
    if M.is_zero():
        return []
    m = _integer_rows(M.rows, M.cols, M.items())
    return _bareiss(m, M.cols)


# -- complexes -------------------------------------------------------------

class FiniteComplex:
    """Cochain complex concentrated in degrees ``lo..hi``.

    ``maps[k]`` is the differential ``d_k: C^k -> C^{k+1}`` as a
    ``dims[k+1] x dims[k]`` matrix; missing maps are zero.  ``d^2 = 0`` is
    checked exactly on construction.
    """

    def __init__(self, lo, hi, dims, maps=None, check=True):
        if hi < lo - 1:
            raise ComplexError("empty degree interval")
        self.lo, self.hi = lo, hi
        self.dims = {k: int(dims.get(k, 0)) for k in range(lo, hi + 1)}
        self.maps = {}
        for k in range(lo, hi + 1):
            d = (maps or {}).get(k)
            shape = (self.dim(k + 1), self.dim(k))
            if d is None:
                d = RatMatrix.zeros(*shape)
            elif d.shape != shape:
                raise ComplexError(f"d_{k} has shape {d.shape}, expected {shape}")
            self.maps[k] = d
        if check:
            for k in range(lo, hi):
                if not (self.maps[k + 1] @ self.maps[k]).is_zero():
                    raise ComplexError(f"d_{k + 1} d_{k} != 0")
        self._ranks = {}

    def dim(self, k):
        return self.dims.get(k, 0)

    def d(self, k):
        if k in self.maps:
            return self.maps[k]
        return RatMatrix.zeros(self.dim(k + 1), self.dim(k))

    def rank_d(self, k):
        if k not in self._ranks:
            self._ranks[k] = rank(self.d(k))
        return self._ranks[k]

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def euler_characteristic(self):
        return sum((-1) ** k * self.dim(k) for k in self.degrees())


def betti(C):
    """Per-degree cohomology dimensions ``{k: dim H^k}``."""
    out = {}
    for k in C.degrees():
        b = C.dim(k) - C.rank_d(k) - C.rank_d(k - 1)
        if b < 0:
            raise ComplexError(f"negative Betti number in degree {k}")
        out[k] = b
    return out


@dataclass
class Cohomology:
    """A chosen basis of ``H^k`` by cocycle representatives.

    ``boundary_basis`` spans the image of ``d_{k-1}``; together with
    ``reps`` it is a basis of the cocycles.
    """

    degree: int
    ambient_dim: int
    boundary_basis: list
    reps: list
    _frame: RatMatrix = field(default=None, repr=False)

    @property
    def dim(self):
        return len(self.reps)

    def coords(self, z):
        """Coordinates of the class of the cocycle ``z`` in the ``reps`` basis."""
        if self._frame is None:
            cols = list(self.boundary_basis) + list(self.reps)
            self._frame = RatMatrix.from_columns(self.ambient_dim, cols)
        x = solve_or_none(self._frame, z)
        if x is None:
            raise ComplexError("vector is not a cocycle")
        return tuple(x[len(self.boundary_basis):])

    def is_coboundary(self, z):
        return not any(self.coords(z))


def cohomology(C, k):
    """Representatives for ``H^k(C)``."""
    n = C.dim(k)
    _, cycles = rank_kernel(C.d(k))
    dprev = C.d(k - 1)
    bcols = dprev.columns()
    bpiv = pivot_columns(dprev)
    bound = [bcols[j] for j in bpiv]
    reps = []
    if cycles:
        stacked = RatMatrix.from_columns(n, bound + list(cycles))
        for j in pivot_columns(stacked):
            if j >= len(bound):
                reps.append(cycles[j - len(bound)])
    return Cohomology(k, n, bound, reps)


class ComplexMap:
    """Degreewise matrices ``f_k: C^k -> D^k``."""

    def __init__(self, source, target, mats):
        self.source, self.target = source, target
        self.mats = {}
        for k in set(source.degrees()) | set(target.degrees()):
            shape = (target.dim(k), source.dim(k))
            m = mats.get(k)
            if m is None:
                m = RatMatrix.zeros(*shape)
            elif m.shape != shape:
                raise ComplexError(f"map in degree {k} has shape {m.shape}, expected {shape}")
            self.mats[k] = m

    def __getitem__(self, k):
        if k in self.mats:
            return self.mats[k]
        return RatMatrix.zeros(self.target.dim(k), self.source.dim(k))

    def chain_map_defects(self):
        """Degrees where ``d f != f d``."""
        bad = []
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for k in range(lo, hi + 1):
            if self.target.d(k) @ self[k] != self[k + 1] @ self.source.d(k):
                bad.append(k)
        return bad


class SesOfComplexes:
    """Short exact sequence ``0 -> C' --i--> C --p--> C'' -> 0``."""

    def __init__(self, sub, mid, quot, inc, proj, check=True):
        self.sub, self.mid, self.quot = sub, mid, quot
        self.inc = inc if isinstance(inc, ComplexMap) else ComplexMap(sub, mid, inc)
        self.proj = proj if isinstance(proj, ComplexMap) else ComplexMap(mid, quot, proj)
        if check:
            problems = self.violations()
            if problems:
                raise ComplexError("; ".join(problems))

    def degrees(self):
        lo = min(self.sub.lo, self.mid.lo, self.quot.lo)
        hi = max(self.sub.hi, self.mid.hi, self.quot.hi)
        return range(lo, hi + 1)

    def violations(self):
        out = []
        for k in self.degrees():
            i, p = self.inc[k], self.proj[k]
            if not (p @ i).is_zero():
                out.append(f"p i != 0 in degree {k}")
            ri, rp = rank(i), rank(p)
            if ri != self.sub.dim(k):
                out.append(f"inclusion not injective in degree {k}")
            if rp != self.quot.dim(k):
                out.append(f"projection not surjective in degree {k}")
            if ri + rp != self.mid.dim(k):
                out.append(f"rank i + rank p != dim C in degree {k}")
        for name, f in (("inclusion", self.inc), ("projection", self.proj)):
            for k in f.chain_map_defects():
                out.append(f"{name} is not a chain map in degree {k}")
        return out


@dataclass
class LongExactSequence:
    """Cohomology long exact sequence of a short exact sequence.

    ``nodes`` lists ``(label, degree, dim)`` in sequence order and
    ``maps[n]`` is the matrix from node ``n`` to node ``n + 1`` in the
    chosen cohomology bases.  ``exact_at[n]`` records whether image equals
    kernel at node ``n``.
    """

    degrees: list
    h_sub: dict
    h_mid: dict
    h_quot: dict
    induced_inc: dict
    induced_proj: dict
    connecting: dict
    nodes: list
    maps: list
    exact_at: list

    @property
    def exact(self):
        return all(self.exact_at)


def _class_matrix(src, tgt, f):
    """Matrix of the map induced by ``f`` between chosen cohomology bases."""
    cols = [tgt.coords(f(z)) for z in src.reps]
    return RatMatrix.from_columns(tgt.dim, cols)


def les_from_ses(S):
    """Long exact cohomology sequence of ``S`` with an exactness certificate.

    The connecting map lifts a cocycle through ``p``, applies ``d`` and
    pulls the result back through ``i``.
    """
    problems = S.violations()
    if problems:
        raise ComplexError("; ".join(problems))
    degs = list(S.degrees())
    lo, hi = degs[0], degs[-1]
    hs = {k: cohomology(S.sub, k) for k in range(lo, hi + 2)}
    hm = {k: cohomology(S.mid, k) for k in degs}
    hq = {k: cohomology(S.quot, k) for k in degs}

    inc_star, proj_star, conn = {}, {}, {}
    for k in degs:
        i_k, p_k = S.inc[k], S.proj[k]
        inc_star[k] = _class_matrix(hs[k], hm[k], lambda z, m=i_k: m @ z)
        proj_star[k] = _class_matrix(hm[k], hq[k], lambda z, m=p_k: m @ z)

        def lift(z, k=k):
            x = solve_or_none(S.proj[k], z)
            y = S.mid.d(k) @ x
            w = solve_or_none(S.inc[k + 1], y)
            if w is None:
                raise ComplexError(f"zig-zag failed in degree {k}")
            return w

        conn[k] = _class_matrix(hq[k], hs[k + 1], lift)

    nodes, maps = [], []
    for k in degs:
        nodes += [("sub", k, hs[k].dim), ("mid", k, hm[k].dim), ("quot", k, hq[k].dim)]
        maps += [inc_star[k], proj_star[k], conn[k]]

    exact_at = []
    for n, (_, _, dim) in enumerate(nodes):
        incoming = maps[n - 1] if n > 0 else RatMatrix.zeros(dim, 0)
        outgoing = maps[n]
        ok = (outgoing @ incoming).is_zero() and rank(incoming) == dim - rank(outgoing)
        exact_at.append(ok)

    return LongExactSequence(
        degrees=degs,
        h_sub={k: hs[k].dim for k in degs},
        h_mid={k: hm[k].dim for k in degs},
        h_quot={k: hq[k].dim for k in degs},
        induced_inc=inc_star,
        induced_proj=proj_star,
        connecting=conn,
        nodes=nodes,
        maps=maps,
        exact_at=exact_at,
    )
