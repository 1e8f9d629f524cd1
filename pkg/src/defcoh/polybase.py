"""Graded polynomial ring Q[x_1..x_n] and its polynomial vector fields.

Each variable carries a positive integer weight, so every weight slice of
the ring (and of its derivation module) is finite dimensional.  The
coordinate field d/dx_a has weight -w(x_a), which makes applying a vector
field weight-additive.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "BaseSpec",
    "Poly",
    "PolyDerivation",
    "PolynomialSyntaxError",
    "monomial_basis",
    "parse_poly",
    "parse_family_poly",
]


@dataclass(frozen=True)
class BaseSpec:
    names: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise ValueError("one weight per variable required")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"variable names must be distinct: {self.names}")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"bad variable name {name!r}")
        for w in self.weights:
            if w < 1:
                raise ValueError(f"variable weights must be >= 1, got {self.weights}")

    @classmethod
    def standard(cls, n, prefix="x"):
        if n == 1:
            return cls((prefix,), (1,))
        return cls(tuple(f"{prefix}{a + 1}" for a in range(n)), (1,) * n)

    @property
    def n(self):
        return len(self.names)

    def monomial_weight(self, exp):
        return sum(e * w for e, w in zip(exp, self.weights))

    def zero(self):
        return Poly(self)

    def one(self):
        return Poly(self, {(0,) * self.n: 1})

    def const(self, c):
        return Poly(self, {(0,) * self.n: c})

    def var(self, a):
        if isinstance(a, str):
            a = self.names.index(a)
        exp = [0] * self.n
        exp[a] = 1
        return Poly(self, {tuple(exp): 1})

    def vars(self):
        return tuple(self.var(a) for a in range(self.n))


def _check_base(a, b):
    if a is not b and a != b:
        raise ValueError(f"base mismatch: {a} vs {b}")


class Poly:
    """Polynomial with rational coefficients; ``terms`` maps exponents to coefficients."""

    __slots__ = ("base", "terms")

    def __init__(self, base, terms=None):
        self.base = base
        clean = {}
        if terms:
            n = base.n
            for exp, c in terms.items():
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                if c:
                    clean[tuple(exp)] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean

    @classmethod
    def _raw(cls, base, terms):
        p = cls.__new__(cls)
        p.base = base
        p.terms = terms
        return p

    # -- structure ----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def weights(self):
        return {self.base.monomial_weight(e) for e in self.terms}

    def weight(self):
        """Weight of a nonzero homogeneous polynomial, else ``None``."""
        ws = self.weights()
        return ws.pop() if len(ws) == 1 else None

    def is_homogeneous(self, w=None):
        ws = self.weights()
        if not ws:
            return True
        return len(ws) == 1 and (w is None or w in ws)

    def homogeneous_part(self, w):
        mw = self.base.monomial_weight
        return Poly._raw(self.base, {e: c for e, c in self.terms.items() if mw(e) == w})

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self):
        return self.coefficient((0,) * self.base.n)

    def is_constant(self):
        zero = (0,) * self.base.n
        return all(e == zero for e in self.terms)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return self
            other = self.base.const(other)
        _check_base(self.base, other.base)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.base, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.base, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return self + (-Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return Poly._raw(self.base, {})
        if c == 1:
            return self
        return Poly._raw(self.base, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        _check_base(self.base, other.base)
        if not self.terms or not other.terms:
            return Poly._raw(self.base, {})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw(self.base, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.base.one()
        for _ in range(k):
            out = out * self
        return out

    def diff(self, a):
        """Partial derivative with respect to variable index ``a``."""
        out = {}
        for e, c in self.terms.items():
            k = e[a]
            if k:
                ee = e[:a] + (k - 1,) + e[a + 1:]
                out[ee] = c * k
        return Poly._raw(self.base, out)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.base == other.base and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == self.base.const(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.base.names, e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


class PolyDerivation:
    """Polynomial vector field sum_a p_a d/dx_a, i.e. a derivation of the base ring."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base, coeffs=None):
        self.base = base
        if coeffs is None:
            coeffs = [Poly(base)] * base.n
        coeffs = tuple(coeffs)
        if len(coeffs) != base.n:
            raise ValueError(f"vector field needs {base.n} coefficients, got {len(coeffs)}")
        for p in coeffs:
            _check_base(base, p.base)
        self.coeffs = coeffs

    @classmethod
    def coordinate(cls, base, a):
        zero = Poly(base)
        return cls(base, [base.one() if b == a else zero for b in range(base.n)])

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __call__(self, f):
        return self.apply(f)

    def apply(self, f):
        _check_base(self.base, f.base)
        out = Poly(self.base)
        for a, p in enumerate(self.coeffs):
            if p:
                d = f.diff(a)
                if d:
                    out = out + p * d
        return out

    def bracket(self, other):
        _check_base(self.base, other.base)
        return PolyDerivation(
            self.base,
            [self.apply(q) - other.apply(p) for p, q in zip(self.coeffs, other.coeffs)],
        )

    def __add__(self, other):
        if not isinstance(other, PolyDerivation):
            if other == 0:
                return self
            return NotImplemented
        _check_base(self.base, other.base)
        return PolyDerivation(self.base, [p + q for p, q in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return PolyDerivation(self.base, [-p for p in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return PolyDerivation(self.base, [p.scale(c) for p in self.coeffs])

    def times(self, f):
        """The vector field ``f * X`` for a polynomial ``f``."""
        return PolyDerivation(self.base, [f * p for p in self.coeffs])

    def weight(self):
        """Weight of a nonzero homogeneous field (p_a d/dx_a has weight w(p_a) - w(x_a))."""
        ws = set()
        for p, wa in zip(self.coeffs, self.base.weights):
            ws |= {w - wa for w in p.weights()}
        return ws.pop() if len(ws) == 1 else None

    def is_homogeneous(self, w=None):
        ws = set()
        for p, wa in zip(self.coeffs, self.base.weights):
            ws |= {v - wa for v in p.weights()}
        if not ws:
            return True
        return len(ws) == 1 and (w is None or w in ws)

    def __eq__(self, other):
        if isinstance(other, PolyDerivation):
            return self.base == other.base and self.coeffs == other.coeffs
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"({p})*d/d{n}" for p, n in zip(self.coeffs, self.base.names) if p]
        return "PolyDerivation(" + (" + ".join(terms) or "0") + ")"


@lru_cache(maxsize=None)
def monomial_basis(base, w):
    """Exponent tuples of total weight ``w``, in descending lexicographic order."""
    if w < 0:
        return ()
    n = base.n
    weights = base.weights
    out = []

    def rec(a, remaining, prefix):
        if a == n:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for k in range(remaining // weights[a], -1, -1):
            prefix.append(k)
            rec(a + 1, remaining - k * weights[a], prefix)
            prefix.pop()

    rec(0, w, [])
    return tuple(out)


# -- parsing --------------------------------------------------------------

class PolynomialSyntaxError(ValueError):
    """Malformed polynomial string; ``position`` is a 0-based character offset."""

    def __init__(self, message, text, position):
        self.message = message
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", text, start)
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    """Recursive descent over: expr := ['+'|'-'] term (('+'|'-') term)*,
    term := factor ('*' factor)*, factor := atom ['^' int],
    atom := int ['/' int] | name | '(' expr ')'."""

    def __init__(self, text, names):
        self.text = text
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolynomialSyntaxError(f"expected {kind}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def error(self, msg):
        raise PolynomialSyntaxError(msg, self.text, self.peek()[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        out = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = _scale(self.term(), sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = _add(acc, t if op == "+" else _scale(t, -1))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = _mul(acc, self.factor())
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            k = self.take("int")[1]
            out = {(0,) * len(self.names): Fraction(1)}
            for _ in range(k):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        kind, val, pos = self.peek()
        zero = (0,) * len(self.names)
        if kind == "int":
            self.take()
            num = Fraction(val)
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")[1]
                if den == 0:
                    raise PolynomialSyntaxError("division by zero", self.text, pos)
                num /= den
            return {zero: num} if num else {}
        if kind == "name":
            self.take()
            if val not in self.index:
                raise PolynomialSyntaxError(f"unknown variable {val!r}", self.text, pos)
            exp = [0] * len(self.names)
            exp[self.index[val]] = 1
            return {tuple(exp): Fraction(1)}
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {val!r}")


def _add(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _scale(p, s):
    return {e: c * s for e, c in p.items()}


def _mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def parse_poly(text, base):
    """Parse a polynomial string such as ``"3/2*x^2*y - y"`` exactly."""
    return Poly(base, _Parser(text, base.names).parse())


def parse_family_poly(text, base, param="t"):
    """Parse a polynomial that may also involve ``param``; returns ``{power: Poly}``."""
    if param in base.names:
        raise ValueError(f"parameter {param!r} clashes with a base variable")
    terms = _Parser(text, base.names + (param,)).parse()
    split = {}
    for e, c in terms.items():
        split.setdefault(e[-1], {})[e[:-1]] = c
    return {k: Poly(base, v) for k, v in sorted(split.items())}
