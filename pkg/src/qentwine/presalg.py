"""Presented noncommutative algebras with rewriting normal forms.

A presentation fixes an ordered generator list (with degree vectors over
named grading axes and an invertible flag) and rewrite rules from short
generator words to normal-ordered sums.  Normal monomials are exponent
tuples aligned with the generator order; exponents of invertible
generators may be negative.  Exact linear algebra over Scalar lives here
too, since coinvariant and quotient computations reduce to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import polytools as pt
from .errors import (
    DegreeOverflow,
    Inconsistent,
    ParseError,
    RewriteBudgetExceeded,
)
from .scalars import ONE, ZERO, Scalar, _Tokens


@dataclass(frozen=True)
class Generator:
    name: str
    degree: tuple
    invertible: bool = False


class Presentation:
    """Immutable once built; rewriting results are cached."""

    def __init__(self, axes, generators, rules, step_budget=200_000, name=""):
        self.axes = tuple(axes)
        self.generators = tuple(generators)
        self.name = name
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self.step_budget = step_budget
        self.rules = {}
        for lhs, rhs in rules:
            self.rules[self._word(lhs)] = rhs if isinstance(rhs, AlgebraElement) else rhs(self)
        self._add_inverse_rules()
        self._nf_cache = {}
        self._mul_cache = {}
        self._max_rule_len = max((len(w) for w in self.rules), default=0)
        self._check_homogeneous()

    # -- construction helpers -----------------------------------------
    def _word(self, spec):
        """Letters from e.g. ['y', 'x'] or [('x', -1), 'y']."""
        out = []
        for item in spec:
            if isinstance(item, str):
                out.append((self.index[item], 1))
            else:
                nm, sg = item
                out.append((self.index[nm], sg))
        return tuple(out)

    def _add_inverse_rules(self):
        derived = {}
        for i, g in enumerate(self.generators):
            if g.invertible:
                derived[((i, 1), (i, -1))] = self.one()
                derived[((i, -1), (i, 1))] = self.one()
        for lhs, rhs in list(self.rules.items()):
            if len(lhs) != 2 or len(rhs.terms) != 1:
                continue
            (ia, sa), (ib, sb) = lhs
            if sa != 1 or sb != 1 or ia == ib:
                continue
            (mono, coeff), = rhs.terms.items()
            exps = {j: e for j, e in enumerate(mono) if e}
            if exps != {ib: 1, ia: 1}:
                continue
            ga, gb = self.generators[ia], self.generators[ib]
            c_inv = ONE / coeff
            if gb.invertible:
                derived.setdefault(((ia, 1), (ib, -1)), self.monomial_elem({ib: -1, ia: 1}, c_inv))
            if ga.invertible:
                derived.setdefault(((ia, -1), (ib, 1)), self.monomial_elem({ib: 1, ia: -1}, c_inv))
            if ga.invertible and gb.invertible:
                derived.setdefault(((ia, -1), (ib, -1)), self.monomial_elem({ib: -1, ia: -1}, coeff))
        for lhs, rhs in derived.items():
            self.rules.setdefault(lhs, rhs)

    def _check_homogeneous(self):
        for lhs, rhs in self.rules.items():
            d = self.word_grading(lhs)
            for mono in rhs.terms:
                if self.grading(mono) != d:
                    raise ValueError(
                        f"rule {self.word_str(lhs)} is not degree-homogeneous"
                    )

    # -- basics ---------------------------------------------------------
    @property
    def ngens(self):
        return len(self.generators)

    def zero(self):
        return AlgebraElement(self, {})

    def one(self):
        return AlgebraElement(self, {(0,) * self.ngens: ONE})

    def gen(self, name, exp=1):
        i = self.index[name]
        if exp < 0 and not self.generators[i].invertible:
            raise ValueError(f"{name} is not invertible")
        mono = [0] * self.ngens
        mono[i] = exp
        return AlgebraElement(self, {tuple(mono): ONE})

    def monomial_elem(self, exps, coeff=ONE):
        mono = [0] * self.ngens
        for i, e in exps.items():
            mono[i] = e
        return AlgebraElement(self, {tuple(mono): coeff})

    def grading(self, mono):
        vec = [0] * len(self.axes)
        for i, e in enumerate(mono):
            if e:
                d = self.generators[i].degree
                for a in range(len(vec)):
                    vec[a] += e * d[a]
        return tuple(vec)

    def word_grading(self, word):
        vec = [0] * len(self.axes)
        for i, sg in word:
            d = self.generators[i].degree
            for a in range(len(vec)):
                vec[a] += sg * d[a]
        return tuple(vec)

    def word_of(self, mono):
        out = []
        for i, e in enumerate(mono):
            if e > 0:
                out.extend([(i, 1)] * e)
            elif e < 0:
                out.extend([(i, -1)] * (-e))
        return tuple(out)

    def word_str(self, word):
        return " ".join(
            self.generators[i].name + ("" if sg == 1 else "^-1") for i, sg in word
        )

    # -- rewriting --------------------------------------------------------
    def normal_form_word(self, word, budget=None):
        """Fixed point of leftmost longest-match rewriting, as term dict."""
        steps = [self.step_budget if budget is None else budget]
        return self._nf(tuple(word), steps)

    def _nf(self, word, steps):
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        n = len(word)
        redex = None
        for i in range(n):
            for ln in range(min(self._max_rule_len, n - i), 1, -1):
                rhs = self.rules.get(word[i:i + ln])
                if rhs is not None:
                    redex = (i, ln, rhs)
                    break
            if redex:
                break
        if redex is None:
            mono = [0] * self.ngens
            last = -1
            for i, sg in word:
                if i < last:
                    raise ValueError(
                        f"incomplete rule set: irreducible unordered word {self.word_str(word)}"
                    )
                last = i
                mono[i] += sg
            result = {tuple(mono): ONE}
        else:
            i, ln, rhs = redex
            steps[0] -= 1
            if steps[0] < 0:
                raise RewriteBudgetExceeded(f"while reducing {self.word_str(word)}")
            pre, post = word[:i], word[i + ln:]
            result = {}
            for mono, coeff in rhs.terms.items():
                sub = self._nf(pre + self.word_of(mono) + post, steps)
                for m2, c2 in sub.items():
                    s = result.get(m2, ZERO) + coeff * c2
                    if s.is_zero():
                        result.pop(m2, None)
                    else:
                        result[m2] = s
        self._nf_cache[word] = result
        return result

    def mul_monomials(self, m1, m2):
        key = (m1, m2)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = self._nf(self.word_of(m1) + self.word_of(m2), [self.step_budget])
            self._mul_cache[key] = hit
        return hit


class AlgebraElement:
    """Finite Scalar-weighted sum of normal monomials, canonical sparse."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms):
        self.pres = pres
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return AlgebraElement(self.pres, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return AlgebraElement(self.pres, {m: -c for m, c in self.terms.items()})

    def scale(self, c):
        if not isinstance(c, Scalar):
            c = Scalar.from_int(c)
        if c.is_zero():
            return AlgebraElement(self.pres, {})
        return AlgebraElement(self.pres, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                for m, c in self.pres.mul_monomials(m1, m2).items():
                    s = out.get(m, ZERO) + c12 * c
                    if s.is_zero():
                        out.pop(m, None)
                    else:
                        out[m] = s
        return AlgebraElement(self.pres, out)

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        return self.pres is other.pres and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def gradings(self):
        return {self.pres.grading(m) for m in self.terms}

    def __str__(self):
        return elem_str(self)

    def __repr__(self):
        return f"<{elem_str(self)}>"


@dataclass(frozen=True)
class DegreeWindow:
    """Per-axis bounds plus per-generator bounds used for enumeration."""

    axis_bounds: tuple          # ((lo, hi) per axis)
    gen_bounds: tuple = ()      # ((lo, hi) per generator), optional

    def contains(self, vec):
        return all(lo <= v <= hi for v, (lo, hi) in zip(vec, self.axis_bounds))


def normal_form(pres, word, budget=None):
    """Normal form of a generator word (sequence of names / (name, sign))."""
    w = pres._word(word)
    return AlgebraElement(pres, pres.normal_form_word(w, budget))


def multiply(a, b, window=None):
    out = a * b
    if window is not None:
        for m in out.terms:
            g = a.pres.grading(m)
            if not window.contains(g):
                raise DegreeOverflow(
                    f"product term {elem_str(AlgebraElement(a.pres, {m: ONE}))} "
                    f"has grading {g} outside the window"
                )
    return out


def monomials_in_window(pres, window):
    """All normal monomials with exponents and gradings inside the window."""
    if not window.gen_bounds:
        raise ValueError("window lacks per-generator enumeration bounds")
    ranges = [range(lo, hi + 1) for lo, hi in window.gen_bounds]
    out = []
    for exps in product(*ranges):
        ok = True
        for i, e in enumerate(exps):
            if e < 0 and not pres.generators[i].invertible:
                ok = False
                break
        if ok and window.contains(pres.grading(exps)):
            out.append(tuple(exps))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# local confluence (bounded diamond check)
# ---------------------------------------------------------------------------

def check_local_confluence(pres, max_overlap, extra_rules=None):
    """Reduce every overlap word both ways; list the unresolved ones.

    extra_rules: optional additional (lhs_word_spec, element) pairs, so
    that rule sets with conflicting duplicate left-hand sides can be
    examined even though the presentation itself stores rules by LHS.
    """
    if max_overlap < 3:
        raise ValueError("max_overlap must be at least 3")
    rules = list(pres.rules.items())
    if extra_rules:
        rules = rules + [(pres._word(lhs), rhs) for lhs, rhs in extra_rules]
    ambiguities = []
    seen = set()

    def nf_of_replacement(prefix, rhs, suffix):
        acc = {}
        for mono, coeff in rhs.terms.items():
            sub = pres.normal_form_word(prefix + pres.word_of(mono) + suffix)
            for m, c in sub.items():
                s = acc.get(m, ZERO) + coeff * c
                if s.is_zero():
                    acc.pop(m, None)
                else:
                    acc[m] = s
        return acc

    for l1, r1 in rules:
        for l2, r2 in rules:
            # directly conflicting rules on the same word
            if l1 == l2 and r1 is not r2:
                a = nf_of_replacement((), r1, ())
                b = nf_of_replacement((), r2, ())
                if a != b:
                    ambiguities.append(pres.word_str(l1))
            # proper overlap: nonempty suffix of l1 equals prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - k:] != l2[:k]:
                    continue
                w = l1 + l2[k:]
                if len(w) > max_overlap or w in seen:
                    continue
                seen.add(w)
                a = nf_of_replacement((), r1, l2[k:])
                b = nf_of_replacement(l1[:len(l1) - k], r2, ())
                if a != b:
                    ambiguities.append(pres.word_str(w))
            # inclusion: l2 a strict subword of l1
            if len(l2) < len(l1):
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p:p + len(l2)] != l2:
                        continue
                    w = l1
                    if len(w) > max_overlap or (w, p) in seen:
                        continue
                    seen.add((w, p))
                    a = nf_of_replacement((), r1, ())
                    b = nf_of_replacement(l1[:p], r2, l1[p + len(l2):])
                    if a != b:
                        ambiguities.append(pres.word_str(w))
    return sorted(set(ambiguities))


# ---------------------------------------------------------------------------
# exact linear algebra over Scalar
# ---------------------------------------------------------------------------

@dataclass
class SolveResult:
    solution: list | None
    kernel: list
    rank: int
    pivots: list = field(default_factory=list)


def solve_linear(rows, rhs=None):
    """Gauss-Jordan elimination over the Scalar field.

    Returns a SolveResult; raises Inconsistent when rhs is given and the
    system has no solution.  Kernel vectors are the canonical reduced
    echelon basis, sign-normalized on their first nonzero entry.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    a = [list(r) for r in rows]
    b = list(rhs) if rhs is not None else [ZERO] * nrows
    if rhs is not None and len(rhs) != nrows:
        raise ValueError("rhs length mismatch")
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not a[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        inv = ONE / a[r][col]
        a[r] = [x * inv for x in a[r]]
        b[r] = b[r] * inv
        for i in range(nrows):
            if i != r and not a[i][col].is_zero():
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                b[i] = b[i] - f * b[r]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    rank = r
    solution = None
    if rhs is not None:
        for i in range(rank, nrows):
            if not b[i].is_zero():
                raise Inconsistent("no solution")
        solution = [ZERO] * ncols
        for i, col in enumerate(pivots):
            solution[col] = b[i]
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, col in enumerate(pivots):
            v[col] = -a[i][fc]
        for x in v:
            if not x.is_zero():
                _, lc = pt.leading(x.num)
                if lc < 0:
                    v = [-y for y in v]
                break
        kernel.append(v)
    return SolveResult(solution, kernel, rank, pivots)


# ---------------------------------------------------------------------------
# algebra characters
# ---------------------------------------------------------------------------

class Character(dict):
    """Map generator name -> Scalar, extended multiplicatively.

    Explicit values for inverse letters may be supplied under keys like
    "x^-1"; otherwise 1/kappa(x) is used.
    """

    def letter_value(self, pres, letter):
        i, sg = letter
        name = pres.generators[i].name
        if sg == 1:
            return self[name]
        if f"{name}^-1" in self:
            return self[f"{name}^-1"]
        return ONE / self[name]

    def eval(self, elem):
        total = ZERO
        pres = elem.pres
        for mono, coeff in elem.terms.items():
            v = coeff
            for i, e in enumerate(mono):
                if e:
                    name = pres.generators[i].name
                    if e > 0:
                        v = v * self[name] ** e
                    elif f"{name}^-1" in self:
                        v = v * self[f"{name}^-1"] ** (-e)
                    else:
                        v = v * self[name] ** e
            total = total + v
        return total


def check_character(kappa, pres):
    """Verdict: list of rules whose two sides evaluate differently."""
    failures = []
    for lhs, rhs in pres.rules.items():
        lv = ONE
        for letter in lhs:
            lv = lv * kappa.letter_value(pres, letter)
        rv = kappa.eval(rhs)
        if lv != rv:
            failures.append((pres.word_str(lhs), str(lv), str(rv)))
    return failures


# ---------------------------------------------------------------------------
# textual grammars
# ---------------------------------------------------------------------------

def elem_str(elem):
    if not elem.terms:
        return "0"
    pres = elem.pres
    parts = []
    for mono in sorted(elem.terms, key=lambda m: (pres.grading(m), m)):
        coeff = elem.terms[mono]
        factors = [
            f"{pres.generators[i].name}^{e}" if e != 1 else pres.generators[i].name
            for i, e in enumerate(mono)
            if e
        ]
        cs = str(coeff)
        if any(op in cs[1:] for op in "+-/") or "/" in cs:
            cs = f"({cs})"
        parts.append(f"{cs}*{'*'.join(factors)}" if factors else cs)
    return " + ".join(parts)


def parse_algebra_element(pres, text):
    """Parse 'coef*gen1^e1*gen2^e2 + ...' (shared scalar grammar coeffs)."""
    tk = _Tokens(text)
    total = pres.zero()
    sign = 1
    while True:
        coeff, factors = _parse_ae_term(pres, tk)
        if sign < 0:
            coeff = -coeff
        mono = [0] * pres.ngens
        last = -1
        for i, e in factors:
            if i < last:
                raise ParseError("generator factors must be in normal order")
            last = i
            mono[i] += e
        total = total + pres.monomial_elem(
            {i: e for i, e in enumerate(mono)}, coeff
        )
        nxt = tk.peek()
        if nxt is None:
            return total
        if nxt == "+":
            sign = 1
        elif nxt == "-":
            sign = -1
        else:
            raise ParseError(f"unexpected token {nxt!r}")
        tk.next()


def _parse_ae_term(pres, tk):
    coeff = ONE
    factors = []
    expect_factor = True
    while expect_factor:
        kind = tk.peek()
        if kind == "-":
            tk.next()
            coeff = -coeff
            continue
        if kind == "name" and tk.toks[tk.pos][1] in pres.index:
            _, nm = tk.next()
            e = 1
            if tk.peek() == "^":
                tk.next()
                sg = 1
                if tk.peek() == "-":
                    tk.next()
                    sg = -1
                knd, val = tk.next()
                if knd != "num":
                    raise ParseError("exponent must be an integer")
                e = sg * val
            factors.append((pres.index[nm], e))
        else:
            # scalar factor: parse a power/atom via the scalar parser
            from .scalars import _parse_power
            coeff = coeff * _parse_power(tk)
        if tk.peek() == "*":
            tk.next()
            expect_factor = True
        elif tk.peek() == "/":
            tk.next()
            from .scalars import _parse_power
            coeff = coeff / _parse_power(tk)
            expect_factor = True
        else:
            expect_factor = False
    return coeff, factors


def parse_presentation(text):
    """Load a presentation from its line grammar.

    axes xdeg ydeg
    gen x invertible deg 1 0
    gen y deg 0 1
    rule y x -> q*x*y
    budget 100000
    """
    axes = []
    gens = []
    raw_rules = []
    budget = 200_000
    name = ""
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "axes":
            axes = words[1:]
        elif head == "presentation":
            name = words[1]
        elif head == "budget":
            budget = int(words[1])
        elif head == "gen":
            rest = words[1:]
            gname = rest.pop(0)
            invertible = False
            if rest and rest[0] == "invertible":
                invertible = True
                rest.pop(0)
            if not rest or rest[0] != "deg":
                raise ParseError(f"line {ln}: expected 'deg' in generator decl")
            degs = tuple(int(x) for x in rest[1:])
            if len(degs) != len(axes):
                raise ParseError(f"line {ln}: degree vector length mismatch")
            gens.append(Generator(gname, degs, invertible))
        elif head == "rule":
            body = line[len("rule"):].strip()
            if "->" not in body:
                raise ParseError(f"line {ln}: rule needs '->'")
            lhs_s, rhs_s = body.split("->", 1)
            lhs = []
            for tok in lhs_s.split():
                if tok.endswith("^-1"):
                    lhs.append((tok[:-3], -1))
                else:
                    lhs.append(tok)
            raw_rules.append((lhs, rhs_s.strip()))
        else:
            raise ParseError(f"line {ln}: unknown directive {head!r}")
    rules = [
        (lhs, (lambda s: (lambda p: parse_algebra_element(p, s)))(rhs_s))
        for lhs, rhs_s in raw_rules
    ]
    return Presentation(axes, gens, rules, step_budget=budget, name=name)
