"""Sparse tensors mixing algebra monomials and coalgebra indices.

Shapes are tuples over {"P", "C"}; keys are tuples whose components are
normal-monomial exponent tuples (P slots) or coalgebra indices (C
slots).  Slotwise application of maps (psi, coproducts, counits,
multiplication) preserves the untouched slots, which is all the index
gymnastics the axiom checks need.
"""

from __future__ import annotations

from .scalars import ONE, ZERO, Scalar


class MixedTensor:
    __slots__ = ("shape", "terms")

    def __init__(self, shape, terms=None):
        self.shape = tuple(shape)
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if not c.is_zero():
                    self.terms[k] = c

    # -- linear structure ----------------------------------------------
    def __add__(self, other):
        assert self.shape == other.shape, (self.shape, other.shape)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return MixedTensor(self.shape, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MixedTensor(self.shape, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        if not isinstance(c, Scalar):
            c = Scalar.from_int(c)
        if c.is_zero():
            return MixedTensor(self.shape)
        return MixedTensor(self.shape, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return self.shape == other.shape and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self.terms.items(), key=repr))))

    # -- structural ops ---------------------------------------------------
    def tensor(self, other):
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = c1 * c2
        return MixedTensor(self.shape + other.shape, out)

    def apply_slot(self, i, fn, new_shape):
        """Replace slot i by fn(key_i) -> MixedTensor of shape new_shape."""
        out = {}
        shape = self.shape[:i] + tuple(new_shape) + self.shape[i + 1:]
        for k, c in self.terms.items():
            sub = fn(k[i])
            for sk, sc in sub.terms.items():
                nk = k[:i] + sk + k[i + 1:]
                s = out.get(nk, ZERO) + c * sc
                if s.is_zero():
                    out.pop(nk, None)
                else:
                    out[nk] = s
        return MixedTensor(shape, out)

    def apply_pair(self, i, fn, new_shape):
        """Replace slots (i, i+1) by fn(k_i, k_{i+1}) of shape new_shape."""
        out = {}
        shape = self.shape[:i] + tuple(new_shape) + self.shape[i + 2:]
        for k, c in self.terms.items():
            sub = fn(k[i], k[i + 1])
            for sk, sc in sub.terms.items():
                nk = k[:i] + sk + k[i + 2:]
                s = out.get(nk, ZERO) + c * sc
                if s.is_zero():
                    out.pop(nk, None)
                else:
                    out[nk] = s
        return MixedTensor(shape, out)

    def __str__(self):
        return tensor_str(self, None)

    def __repr__(self):
        return f"MT[{''.join(self.shape)}]({tensor_str(self, None)})"


def unit_tensor():
    return MixedTensor((), {(): ONE})


def from_elem(elem):
    """AlgebraElement -> shape ("P",)."""
    return MixedTensor(("P",), {(m,): c for m, c in elem.terms.items()})


def to_elem(t, pres):
    from .presalg import AlgebraElement

    assert t.shape == ("P",)
    return AlgebraElement(pres, {k[0]: c for k, c in t.terms.items()})


def from_coalg(elem):
    """CoalgElement -> shape ("C",)."""
    return MixedTensor(("C",), {(i,): c for i, c in elem.items()})


def mul_pp(t, i, pres):
    """Multiply adjacent P slots i, i+1 inside the presentation."""

    def f(m1, m2):
        return MixedTensor(("P",), {(m,): c for m, c in pres.mul_monomials(m1, m2).items()})

    return t.apply_pair(i, f, ("P",))


def form_mul(t1, t2, pres):
    """Product in the tensor algebra of forms: concatenate and multiply
    at the junction (u0 x ... x un)(v0 x ... x vm) -> ... x un*v0 x ...
    """
    t = t1.tensor(t2)
    return mul_pp(t, len(t1.shape) - 1, pres)


def left_mul(elem, t, pres):
    """u . (a0 x a1 x ...) = u*a0 x a1 x ..."""
    return form_mul(from_elem(elem), t, pres)


def right_mul(t, elem, pres):
    return form_mul(t, from_elem(elem), pres)


def mono_str(pres, mono):
    factors = [
        f"{pres.generators[i].name}^{e}" if e != 1 else pres.generators[i].name
        for i, e in enumerate(mono)
        if e
    ]
    return "*".join(factors) if factors else "1"


def slot_str(pres, slot_kind, key):
    if slot_kind == "P":
        return mono_str(pres, key)
    if isinstance(key, tuple):
        return "c[" + ",".join(str(x) for x in key) + "]"
    return f"c[{key}]"


def tensor_str(t, pres):
    if not t.terms:
        return "0"
    parts = []
    for k in sorted(t.terms, key=repr):
        c = t.terms[k]
        cs = str(c)
        if any(op in cs[1:] for op in "+-") or "/" in cs:
            cs = f"({cs})"
        if pres is None:
            body = " (x) ".join(str(x) for x in k)
        else:
            body = " (x) ".join(
                slot_str(pres, sk, key) for sk, key in zip(t.shape, k)
            )
        parts.append(f"{cs}*{body}" if body else cs)
    return " + ".join(parts)
