"""Exact coefficient field Q(q, s, alpha, ...).

A ``Scalar`` is a reduced fraction of integer-coefficient multivariate
polynomials in globally named commuting indeterminates.  Canonical form:
gcd(num, den) = 1 (integer content included), den has positive leading
coefficient, and monomials live in a fixed degree-lex order.  Negative
powers such as q^-1 are denominator factors.
"""

from __future__ import annotations

from fractions import Fraction

from . import polytools as pt
from ._kernel import poly_add, poly_mul, poly_neg, poly_scale
from .errors import DenominatorVanishes, DivisionByZero, ParseError

# global indeterminate registry; common names pre-registered so that the
# canonical monomial order does not depend on call order
_VAR_IDS: dict[str, int] = {}
_VAR_NAMES: list[str] = []


def var_id(name: str) -> int:
    vid = _VAR_IDS.get(name)
    if vid is None:
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise ParseError(f"bad indeterminate name: {name!r}")
        vid = len(_VAR_NAMES)
        _VAR_IDS[name] = vid
        _VAR_NAMES.append(name)
    return vid


def var_name(vid: int) -> str:
    return _VAR_NAMES[vid]


class Scalar:
    """Element of the fraction field, immutable and hashable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = dict(pt.POLY_ONE)
        if not _canonical:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------
    @staticmethod
    def from_int(n: int) -> "Scalar":
        return Scalar(pt.poly_const(n), dict(pt.POLY_ONE), _canonical=True)

    @staticmethod
    def from_fraction(f) -> "Scalar":
        f = Fraction(f)
        return Scalar(pt.poly_const(f.numerator), pt.poly_const(f.denominator))

    @staticmethod
    def var(name: str, exp: int = 1) -> "Scalar":
        vid = var_id(name)
        if exp >= 0:
            return Scalar(pt.poly_var(vid, exp), dict(pt.POLY_ONE), _canonical=True)
        return Scalar(dict(pt.POLY_ONE), pt.poly_var(vid, -exp), _canonical=True)

    # -- ring/field ops ----------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return Scalar(poly_add(self.num, other.num), dict(self.den))
        num = poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den))
        return Scalar(num, poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(poly_neg(self.num), dict(self.den), _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise DivisionByZero("scalar division by zero")
        return Scalar(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int):
        if n == 0:
            return ONE
        if n < 0:
            return (ONE / self) ** (-n)
        return Scalar(pt.poly_pow(self.num, n), pt.poly_pow(self.den, n))

    # -- predicates / equality ----------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == pt.POLY_ONE and self.den == pt.POLY_ONE

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (tuple(sorted(self.num.items())), tuple(sorted(self.den.items())))
            )
        return self._hash

    def __bool__(self):
        return bool(self.num)

    # -- evaluation ----------------------------------------------------
    def specialize(self, assignment) -> Fraction:
        """Exact evaluation at an Assignment (dict name -> rational)."""
        den = _poly_eval(self.den, assignment)
        if den == 0:
            raise DenominatorVanishes(f"denominator vanishes at {assignment}")
        return _poly_eval(self.num, assignment) / den

    def variables(self):
        return {var_name(v) for v in pt.vars_of(self.num) | pt.vars_of(self.den)}

    # -- printing -------------------------------------------------------
    def __str__(self):
        if self.den == pt.POLY_ONE:
            return poly_str(self.num)
        ns = poly_str(self.num)
        ds = poly_str(self.den)
        if len(self.num) > 1:
            ns = f"({ns})"
        if len(self.den) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"Scalar({self})"


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar.from_int(x)
    if isinstance(x, Fraction):
        return Scalar.from_fraction(x)
    return NotImplemented


def _reduce(num, den):
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return {}, dict(pt.POLY_ONE)
    g = pt.poly_gcd(num, den)
    if g != pt.POLY_ONE:
        num = pt.poly_divexact(num, g)
        den = pt.poly_divexact(den, g)
    _, lc = pt.leading(den)
    if lc < 0:
        num = poly_neg(num)
        den = poly_neg(den)
    return num, den


def _poly_eval(p, assignment) -> Fraction:
    total = Fraction(0)
    for m, c in p.items():
        term = Fraction(c)
        for vid, e in m:
            name = var_name(vid)
            if name not in assignment:
                raise KeyError(f"unassigned indeterminate {name}")
            term *= Fraction(assignment[name]) ** e
        total += term
    return total


ZERO = Scalar.from_int(0)
ONE = Scalar.from_int(1)

# pre-register the names every instance uses, in a fixed order
for _n in ("q", "s", "alpha"):
    var_id(_n)

Q = Scalar.var("q")


def q_int(n: int, base: Scalar = None) -> Scalar:
    """[n] = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise ValueError("q_int of negative integer")
    b = Q if base is None else base
    out = ZERO
    p = ONE
    for _ in range(n):
        out = out + p
        p = p * b
    return out


def q_factorial(n: int, base: Scalar = None) -> Scalar:
    """[n]! = [n][n-1]...[1], with [0]! = 1."""
    if n < 0:
        raise ValueError("q_factorial of negative integer")
    out = ONE
    for k in range(1, n + 1):
        out = out * q_int(k, base)
    return out


def q_binom(n: int, k: int, base: Scalar = None) -> Scalar:
    """[n k] = [n]!/([n-k]![k]!); zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("q_binom with negative n")
    if k < 0 or k > n:
        return ZERO
    b = Q if base is None else base
    key = (n, k, b)
    hit = _QBINOM_CACHE.get(key)
    if hit is not None:
        return hit
    val = q_factorial(n, b) / (q_factorial(n - k, b) * q_factorial(k, b))
    _QBINOM_CACHE[key] = val
    return val


_QBINOM_CACHE: dict = {}


class Assignment(dict):
    """Map indeterminate name -> exact rational, used by specialize."""

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        for k in list(self):
            self[k] = Fraction(self[k])


# ---------------------------------------------------------------------------
# canonical textual grammar (round-trips through parse_scalar)
# ---------------------------------------------------------------------------

def mono_str(m, coeff):
    parts = []
    if coeff == -1 and m:
        head = "-"
    elif coeff == 1 and m:
        head = ""
    else:
        head = str(coeff)
        if m:
            head += "*"
    for vid, e in sorted(m):
        parts.append(var_name(vid) if e == 1 else f"{var_name(vid)}^{e}")
    return head + "*".join(parts)


def poly_str(p) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda it: pt.mono_key(it[0]), reverse=True)
    out = mono_str(*terms[0])
    for m, c in terms[1:]:
        s = mono_str(m, abs(c))
        out += f" - {s}" if c < 0 else f" + {s}"
    return out


class _Tokens:
    def __init__(self, text):
        self.toks = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("num", int(text[i:j])))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j]))
                i = j
            elif ch in "+-*/^()":
                self.toks.append((ch, ch))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t


def _parse_expr(tk):
    node = _parse_term(tk)
    while tk.peek() in ("+", "-"):
        op, _ = tk.next()
        rhs = _parse_term(tk)
        node = node + rhs if op == "+" else node - rhs
    return node


def _parse_term(tk):
    node = _parse_factor(tk)
    while tk.peek() in ("*", "/"):
        op, _ = tk.next()
        rhs = _parse_factor(tk)
        node = node * rhs if op == "*" else node / rhs
    return node


def _parse_factor(tk):
    if tk.peek() == "-":
        tk.next()
        return -_parse_factor(tk)
    if tk.peek() == "+":
        tk.next()
        return _parse_factor(tk)
    return _parse_power(tk)


def _parse_power(tk):
    base = _parse_atom(tk)
    if tk.peek() == "^":
        tk.next()
        sign = 1
        if tk.peek() == "-":
            tk.next()
            sign = -1
        kind, val = tk.next()
        if kind != "num":
            raise ParseError("exponent must be an integer")
        return base ** (sign * val)
    return base


def _parse_atom(tk):
    kind = tk.peek()
    if kind == "(":
        tk.next()
        node = _parse_expr(tk)
        if tk.peek() != ")":
            raise ParseError("missing closing parenthesis")
        tk.next()
        return node
    if kind == "num":
        _, v = tk.next()
        return Scalar.from_int(v)
    if kind == "name":
        _, name = tk.next()
        return Scalar.var(name)
    raise ParseError(f"unexpected token {kind!r}")


def parse_scalar(text: str) -> Scalar:
    tk = _Tokens(text)
    node = _parse_expr(tk)
    if tk.peek() is not None:
        raise ParseError(f"trailing input at token {tk.peek()!r}")
    return node
