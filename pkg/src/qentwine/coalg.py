"""Basis-indexed coalgebras and the convolution algebra of maps out of C.

A CoalgebraSpec gives the coproduct and counit as structure functions on
an index domain (windowed lazily), plus the distinguished group-like e.
ConvMaps carry values in spaces of universal forms over a presented
algebra, so one convolution code path serves Phi, gamma, beta and omega.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import NotFiltered, NotUnitalAtE, WindowExceeded
from .scalars import ONE, ZERO, Scalar
from .tensors import MixedTensor, form_mul, from_elem
from .verdict import CheckResult


class CoalgElement(dict):
    """Finite map index -> Scalar, canonical sparse."""

    def __init__(self, data=()):
        super().__init__()
        items = data.items() if isinstance(data, dict) else data
        for k, v in items:
            if not v.is_zero():
                self[k] = v

    def add(self, other):
        out = CoalgElement(self)
        for k, v in other.items():
            s = out.get(k, ZERO) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return out

    def scale(self, c):
        return CoalgElement({k: c * v for k, v in self.items()})


@dataclass
class CoalgebraSpec:
    name: str
    coproduct: Callable  # index -> MixedTensor ("C", "C")
    counit: Callable     # index -> Scalar
    e: object
    rank: Callable = None        # filtration degree, for convolution inverses
    in_window: Callable = None   # optional index-domain guard

    def delta(self, idx):
        t = self.coproduct(idx)
        if self.in_window is not None:
            for k in t.terms:
                if not (self.in_window(k[0]) and self.in_window(k[1])):
                    raise WindowExceeded(f"coproduct of {idx} leaves the window at {k}")
        return t

    def delta_elem(self, elem):
        out = MixedTensor(("C", "C"))
        for idx, c in elem.items():
            out = out + self.delta(idx).scale(c)
        return out

    def counit_elem(self, elem):
        total = ZERO
        for idx, c in elem.items():
            total = total + c * self.counit(idx)
        return total

    def ker_eps_elem(self, idx):
        """c - eps(c) e, the canonical ker-eps part of a basis index."""
        eps = self.counit(idx)
        out = CoalgElement({idx: ONE})
        if not eps.is_zero():
            out = out.add(CoalgElement({self.e: -eps}))
        return out


def coproduct_n(spec, elem, n):
    """Iterated coproduct on a CoalgElement, shape C^(n+1).

    Computed in two association orders and compared, so a result is
    only returned when coassociativity actually holds on these indices.
    """
    if isinstance(elem, CoalgElement):
        t = MixedTensor(("C",), {(i,): c for i, c in elem.items()})
    else:
        t = MixedTensor(("C",), {(elem,): ONE})
    if n <= 0:
        return t
    left = t
    for _ in range(n):
        left = left.apply_slot(0, lambda i: spec.delta(i), ("C", "C"))
    right = t
    for k in range(n):
        right = right.apply_slot(k, lambda i: spec.delta(i), ("C", "C"))
    if left != right:
        raise AssertionError(f"coassociativity violated on {dict(elem)!r}")
    return left


def check_coalgebra(spec, indices):
    """Coassociativity, counit and group-like axioms on the window."""
    res = CheckResult()
    ee = spec.delta(spec.e)
    res.expect(
        ee == MixedTensor(("C", "C"), {(spec.e, spec.e): ONE}),
        f"{spec.name}: Delta(e)", ee, "e (x) e",
        note="group-like e",
    )
    res.expect(
        spec.counit(spec.e) == ONE,
        f"{spec.name}: eps(e)", spec.counit(spec.e), "1",
        note="counit of e",
    )
    for idx in indices:
        d = spec.delta(idx)
        a = d.apply_slot(0, lambda i: spec.delta(i), ("C", "C"))
        b = d.apply_slot(1, lambda i: spec.delta(i), ("C", "C"))
        if a != b:
            res.record(f"{spec.name}: coassoc at c[{idx}]", a, b)
        eps_c = MixedTensor(("C",))
        for (i, j), c in d.terms.items():
            eps_c = eps_c + MixedTensor(("C",), {(j,): c * spec.counit(i)})
        res.expect(
            eps_c == MixedTensor(("C",), {(idx,): ONE}),
            f"{spec.name}: (eps x id)Delta at c[{idx}]", eps_c, f"c[{idx}]",
        )
        c_eps = MixedTensor(("C",))
        for (i, j), c in d.terms.items():
            c_eps = c_eps + MixedTensor(("C",), {(i,): c * spec.counit(j)})
        res.expect(
            c_eps == MixedTensor(("C",), {(idx,): ONE}),
            f"{spec.name}: (id x eps)Delta at c[{idx}]", c_eps, f"c[{idx}]",
        )
    return res


class ConvMap:
    """Linear map C -> (forms over P), given on basis indices.

    Values are all-"P" MixedTensors of one fixed degree: shape ("P",)
    for algebra-valued maps, ("P", "P") for one-form-valued maps.
    """

    def __init__(self, spec, pres, fn, degree=1, label=""):
        self.spec = spec
        self.pres = pres
        self.fn = fn
        self.degree = degree
        self.label = label
        self._cache = {}

    def value(self, idx):
        v = self._cache.get(idx)
        if v is None:
            v = self.fn(idx)
            assert v.shape == ("P",) * self.degree, (self.label, v.shape)
            self._cache[idx] = v
        return v

    def value_elem(self, elem):
        out = MixedTensor(("P",) * self.degree)
        for idx, c in elem.items():
            out = out + self.value(idx).scale(c)
        return out

    def unital_at_e(self):
        one = from_elem(self.pres.one())
        return self.value(self.spec.e) == one


def conv_unit(spec, pres):
    """The convolution unit: c -> eps(c) 1."""

    def fn(idx):
        return from_elem(pres.one().scale(spec.counit(idx)))

    return ConvMap(spec, pres, fn, degree=1, label="eta.eps")


def convolve(f, g):
    """(f*g)(c) = f(c(1)) g(c(2)), graded product of form values."""
    spec, pres = f.spec, f.pres

    def fn(idx):
        out = MixedTensor(("P",) * (f.degree + g.degree - 1))
        for (i, j), c in spec.delta(idx).terms.items():
            out = out + form_mul(f.value(i), g.value(j), pres).scale(c)
        return out

    return ConvMap(spec, pres, fn, degree=f.degree + g.degree - 1,
                   label=f"({f.label})*({g.label})")


def convolve_many(maps):
    out = maps[0]
    for m in maps[1:]:
        out = convolve(out, m)
    return out


def convolution_inverse(f, indices, verify=True):
    """Two-sided convolution inverse on a filtered window.

    Requires f(e) = 1 and a rank function under which the coproduct is
    triangular: Delta c = e (x) c + (terms with lower-rank right slot).
    The inverse solves that triangular recursion, then both convolution
    identities are verified on the window.
    """
    spec, pres = f.spec, f.pres
    if f.degree != 1:
        raise ValueError("only algebra-valued maps are convolution invertible")
    if not f.unital_at_e():
        raise NotUnitalAtE(f"{f.label}(e) != 1")
    if spec.rank is None:
        raise NotFiltered(f"{spec.name} has no filtration rank")
    order = sorted(indices, key=spec.rank)
    one = from_elem(pres.one())
    values = {}
    for idx in order:
        if idx == spec.e:
            values[idx] = one
            continue
        n = spec.rank(idx)
        acc = MixedTensor(("P",))
        diag = ZERO
        for (i, j), c in spec.delta(idx).terms.items():
            if j == idx and i == spec.e:
                diag = diag + c
                continue
            if spec.rank(j) >= n:
                raise NotFiltered(
                    f"{spec.name}: coproduct of {idx} has non-triangular term {(i, j)}"
                )
            if j not in values:
                raise NotFiltered(f"window misses index {j} needed to invert at {idx}")
            acc = acc + form_mul(f.value(i), values[j], pres).scale(c)
        if diag != ONE:
            raise NotFiltered(f"{spec.name}: e (x) c coefficient at {idx} is {diag}")
        eps_unit = from_elem(pres.one().scale(spec.counit(idx)))
        values[idx] = eps_unit - acc

    inv = ConvMap(spec, pres, lambda idx: values[idx], degree=1,
                  label=f"({f.label})^-1")
    if verify:
        unit = conv_unit(spec, pres)
        fg = convolve(f, inv)
        gf = convolve(inv, f)
        for idx in order:
            if fg.value(idx) != unit.value(idx):
                raise NotFiltered(f"right inverse check failed at {idx}")
            if gf.value(idx) != unit.value(idx):
                raise NotFiltered(f"left inverse check failed at {idx}")
    return inv
