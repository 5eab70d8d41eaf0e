"""Entwining structures, their axioms, coactions, coinvariants and duals.

psi: C (x) P -> P (x) C is held as a structure function on (index,
monomial) pairs.  The two compatibility axioms are checked in index
form:

    (ind.A)  (uv)_a (x) c^a = u_a v_b (x) c^{ab},   psi(c (x) 1) = 1 (x) c
    (ind.B)  u_a (x) Delta(c^a) = u_{ab} (x) c(1)^b (x) c(2)^a,
             eps(c^a) u_a = eps(c) u

Everything downstream (coaction sweeps, the canonical map chi_M, the
translation map, the dual action) is built from slotwise psi
application.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .coalg import CoalgebraSpec, CoalgElement
from .errors import Inconsistent, SectionUndefined, SingularComponent
from .linalg import QuotientSpace, RowSpan, express_in
from .presalg import AlgebraElement, Character, solve_linear
from .scalars import ONE, ZERO, Scalar
from .tensors import MixedTensor, from_elem, mul_pp, tensor_str, to_elem
from .verdict import CheckResult


class EntwiningMap:
    def __init__(self, coalg, pres, fn, label="psi"):
        self.coalg = coalg
        self.pres = pres
        self.fn = fn
        self.label = label
        self._cache = {}

    def value(self, idx, mono):
        key = (idx, mono)
        v = self._cache.get(key)
        if v is None:
            v = self.fn(idx, mono)
            assert v.shape == ("P", "C")
            self._cache[key] = v
        return v

    # -- slotwise application -------------------------------------------
    def apply_at(self, t, i):
        """psi on adjacent (C, P) slots (i, i+1)."""
        assert t.shape[i] == "C" and t.shape[i + 1] == "P"
        return t.apply_pair(i, self.value, ("P", "C"))

    def sweep_right(self, t, c_slot):
        """Move the C slot right across every adjacent P slot (<-psi^n)."""
        pos = c_slot
        while pos + 1 < len(t.shape) and t.shape[pos + 1] == "P":
            t = self.apply_at(t, pos)
            pos += 1
        return t

    def sweep_left(self, t, p_slot):
        """Move the P slot left across every adjacent C slot (psi^n ->)."""
        pos = p_slot
        while pos - 1 >= 0 and t.shape[pos - 1] == "C":
            t = self.apply_at(t, pos - 1)
            pos -= 1
        return t


def apply_psi(em, t):
    """<-psi sweep at the first C slot that has P slots to its right."""
    for i, s in enumerate(t.shape):
        if s == "C" and i + 1 < len(t.shape) and t.shape[i + 1] == "P":
            return em.sweep_right(t, i)
    raise ValueError(f"no (C, P) slot pair in shape {t.shape}")


def check_entwining(em, c_indices, monos, products=None):
    """Exhaustive (ind.A)/(ind.B) on the window, with counterexamples.

    products defaults to all ordered pairs from monos; pass a smaller
    list when the ambient window is tight.
    """
    res = CheckResult()
    pres, coalg = em.pres, em.coalg
    one = pres.one()
    unit_mono = next(iter(one.terms))
    pairs = products if products is not None else [(u, v) for u in monos for v in monos]

    for c in c_indices:
        got = em.value(c, unit_mono)
        want = MixedTensor(("P", "C"), {(unit_mono, c): ONE})
        res.expect(got == want, f"psi(c[{c}] (x) 1)", tensor_str(got, pres),
                   tensor_str(want, pres), note="unit condition of (ind.A)")

    for c in c_indices:
        for u, v in pairs:
            uv = pres.mul_monomials(u, v)
            lhs = MixedTensor(("P", "C"))
            for m, coeff in uv.items():
                lhs = lhs + em.value(c, m).scale(coeff)
            t = MixedTensor(("C", "P", "P"), {(c, u, v): ONE})
            rhs = mul_pp(em.sweep_right(t, 0), 0, pres)
            if lhs != rhs:
                res.record(
                    f"(ind.A) at (c[{c}], {_mono_str(pres, u)}, {_mono_str(pres, v)})",
                    tensor_str(lhs, pres), tensor_str(rhs, pres))

    for c in c_indices:
        for u in monos:
            pc = em.value(c, u)
            lhs = pc.apply_slot(1, lambda i: coalg.delta(i), ("C", "C"))
            t = coalg.delta(c).tensor(MixedTensor(("P",), {(u,): ONE}))
            t = em.apply_at(t, 1)
            rhs = em.apply_at(t, 0)
            if lhs != rhs:
                res.record(f"(ind.B) at (c[{c}], {_mono_str(pres, u)})",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
            ce = MixedTensor(("P",))
            for (m, i), coeff in pc.terms.items():
                ce = ce + MixedTensor(("P",), {(m,): coeff * coalg.counit(i)})
            want = MixedTensor(("P",), {(u,): coalg.counit(c)})
            if ce != want:
                res.record(
                    f"(ind.B) counit at (c[{c}], {_mono_str(pres, u)})",
                    tensor_str(ce, pres), tensor_str(want, pres))
    return res


def _mono_str(pres, mono):
    from .tensors import mono_str
    return mono_str(pres, mono)


# ---------------------------------------------------------------------------
# bundle data: coaction, coinvariants, chi, translation map
# ---------------------------------------------------------------------------

class BundleData:
    def __init__(self, em, name=""):
        self.em = em
        self.pres = em.pres
        self.coalg = em.coalg
        self.e = em.coalg.e
        self.name = name or em.label

    # Delta_R^n = <-psi^n (e (x) id^n)
    def coaction_tensor(self, t):
        assert all(s == "P" for s in t.shape)
        seed = MixedTensor(("C",), {(self.e,): ONE}).tensor(t)
        return self.em.sweep_right(seed, 0)

    def coaction_elem(self, elem):
        return self.coaction_tensor(from_elem(elem))

    def coaction_mono(self, mono):
        return self.em.value(self.e, mono)

    def is_coinvariant(self, elem):
        got = self.coaction_elem(elem)
        want = from_elem(elem).tensor(MixedTensor(("C",), {(self.e,): ONE}))
        return got == want

    def check_comodule(self, monos, n=1):
        """Comodule axioms for Delta_R^n on n-fold monomial tuples."""
        res = CheckResult()
        coalg = self.coalg
        import itertools
        for tup in itertools.product(monos, repeat=n):
            t = MixedTensor(("P",) * n, {tup: ONE})
            dr = self.coaction_tensor(t)
            # (Delta_R^n x id) Delta_R^n: coact on the P block again
            seed = MixedTensor(("C",), {(self.e,): ONE}).tensor(dr)
            a = self.em.sweep_right(seed, 0)
            # reorder: sweep stops before the trailing C slot, giving
            # P^n (x) C(new) (x) C(old); compare with (id x Delta)
            b = dr.apply_slot(n, lambda i: coalg.delta(i), ("C", "C"))
            if a != b:
                res.record(f"comodule coassoc at {tup}", tensor_str(a, self.pres),
                           tensor_str(b, self.pres))
            ce = MixedTensor(("P",) * n)
            for k, coeff in dr.terms.items():
                ce = ce + MixedTensor(("P",) * n, {k[:-1]: coeff * coalg.counit(k[-1])})
            if ce != t:
                res.record(f"comodule counit at {tup}", tensor_str(ce, self.pres),
                           tensor_str(t, self.pres))
        return res

    def check_forms_preserved(self, form_basis):
        """Coaction image of ker-multiplication tensors stays in it."""
        res = CheckResult()
        for t in form_basis:
            n = len(t.shape)
            img = self.coaction_tensor(t)
            for i in range(n - 1):
                m = mul_pp(img, i, self.pres)
                if not m.is_zero():
                    res.record(
                        f"coaction leaves Omega^{n-1} at {tensor_str(t, self.pres)}",
                        tensor_str(m, self.pres), "0",
                        note=f"multiplication at slot {i}")
        return res

    # -- coinvariants ----------------------------------------------------
    def coinvariant_basis(self, monos):
        """Basis of {u : Delta_R u = u (x) e} inside span(monos)."""
        cols = []
        keys = set()
        for m in monos:
            d = self.coaction_mono(m) - MixedTensor(("P", "C"), {(m, self.e): ONE})
            cols.append(d.terms)
            keys.update(d.terms)
        keys = sorted(keys, key=repr)
        rows = [[col.get(k, ZERO) for col in cols] for k in keys]
        if not rows:
            rows = [[ZERO] * len(cols)]
        kern = solve_linear(rows).kernel
        out = []
        for v in kern:
            out.append(AlgebraElement(self.pres, {
                m: c for m, c in zip(monos, v) if not c.is_zero()
            }))
        return out

    def check_subalgebra(self, basis, window=None):
        res = CheckResult()
        for a in basis:
            for b in basis:
                p = a * b
                if not self.is_coinvariant(p):
                    res.record(f"M closure at ({a}, {b})", str(p), "coinvariant")
        return res

    # -- chi and the translation map -------------------------------------
    def chi_tensor(self, t):
        """chi on a ("P","P") tensor: u (x) v -> u psi(e (x) v)."""
        assert t.shape == ("P", "P")
        s = t.apply_slot(1, lambda m: self.em.value(self.e, m), ("P", "C"))
        return mul_pp(s, 0, self.pres)

    def chi_elem(self, u, v):
        return self.chi_tensor(from_elem(u).tensor(from_elem(v)))


@dataclass
class ChiComponent:
    """chi_M on one graded component of P (x)_M P.

    pp_pairs span the P (x) P component; rel_triples (u, x, v) give the
    bimodule relations u x (x) v - u (x) x v; pc_basis lists the target
    (monomial, index) pairs of P (x) C.
    """

    bundle: BundleData
    pp_pairs: list
    rel_triples: list
    pc_basis: list
    complement_order: tuple = None

    def __post_init__(self):
        b = self.bundle
        pres = b.pres
        rels = []
        pair_set = set(self.pp_pairs)
        for u, x, v in self.rel_triples:
            ux = pres.mul_monomials(u, x)
            xv = pres.mul_monomials(x, v)
            t = MixedTensor(("P", "P"))
            for m, c in ux.items():
                t = t + MixedTensor(("P", "P"), {(m, v): c})
            for m, c in xv.items():
                t = t - MixedTensor(("P", "P"), {(u, m): c})
            if any(k not in pair_set for k in t.terms):
                continue
            if not t.is_zero():
                rels.append(t)
        self.quotient = QuotientSpace(rels)
        order = self.complement_order or tuple(range(len(self.pp_pairs)))
        self.complement = []
        span = RowSpan()
        for i in order:
            pair = self.pp_pairs[i]
            r = self.quotient.project(MixedTensor(("P", "P"), {pair: ONE}))
            if r and span.add(r):
                self.complement.append(pair)
        # chi matrix: columns = complement classes, rows = pc_basis coords
        self.cols = []
        self.extra_keys = set()
        for pair in self.complement:
            img = self.bundle.chi_tensor(MixedTensor(("P", "P"), {pair: ONE}))
            self.cols.append(img.terms)
            self.extra_keys.update(k for k in img.terms if k not in set(self.pc_basis))

    def matrix(self):
        keys = list(self.pc_basis) + sorted(self.extra_keys, key=repr)
        return [[col.get(k, ZERO) for col in self.cols] for k in keys]

    def is_bijective(self):
        if self.extra_keys or len(self.cols) != len(self.pc_basis):
            return False
        m = self.matrix()
        return solve_linear(m).rank == len(self.pc_basis)

    def determinant(self):
        if self.extra_keys or len(self.cols) != len(self.pc_basis):
            raise SingularComponent("chi_M component matrix is not square")
        return determinant(self.matrix())

    def tau(self, celem):
        """Representative in P (x) P of chi_M^{-1}(1 (x) c)."""
        if not isinstance(celem, CoalgElement):
            celem = CoalgElement({celem: ONE})
        unit = next(iter(self.bundle.pres.one().terms))
        rhs_t = {}
        for idx, c in celem.items():
            rhs_t[(unit, idx)] = c
        keys = list(self.pc_basis) + sorted(self.extra_keys, key=repr)
        rows = [[col.get(k, ZERO) for col in self.cols] for k in keys]
        rhs = [rhs_t.get(k, ZERO) for k in keys]
        try:
            sol = solve_linear(rows, rhs).solution
        except Inconsistent as exc:
            raise SingularComponent(f"tau: {exc}") from exc
        out = MixedTensor(("P", "P"))
        for pair, c in zip(self.complement, sol):
            if not c.is_zero():
                out = out + MixedTensor(("P", "P"), {pair: c})
        return out


def determinant(rows):
    """Exact determinant by fraction-producing elimination."""
    n = len(rows)
    a = [list(r) for r in rows]
    det = ONE
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not a[i][col].is_zero():
                piv = i
                break
        if piv is None:
            return ZERO
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = ONE / a[col][col]
        for i in range(col + 1, n):
            if not a[i][col].is_zero():
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


# ---------------------------------------------------------------------------
# Hopf data and the two generic entwining constructors
# ---------------------------------------------------------------------------

class HopfData:
    """Hopf structure on a presented algebra, given per letter.

    coproducts/antipodes are keyed by letters (gen_index, sign); the
    counit is a Character.  Coproducts extend as algebra maps into the
    componentwise tensor product, antipodes antimultiplicatively.
    """

    def __init__(self, pres, coproducts, counit, antipodes):
        self.pres = pres
        self.coproducts = coproducts
        self.counit = counit
        self.antipodes = antipodes
        self._cop_cache = {}
        self._ant_cache = {}

    def coproduct_mono(self, mono):
        hit = self._cop_cache.get(mono)
        if hit is not None:
            return hit
        unit = next(iter(self.pres.one().terms))
        out = MixedTensor(("P", "P"), {(unit, unit): ONE})
        for letter in self.pres.word_of(mono):
            out = _pp_mul(out, self.coproducts[letter], self.pres)
        self._cop_cache[mono] = out
        return out

    def coproduct_elem(self, elem):
        out = MixedTensor(("P", "P"))
        for m, c in elem.terms.items():
            out = out + self.coproduct_mono(m).scale(c)
        return out

    def coproduct2_elem(self, elem):
        d = self.coproduct_elem(elem)
        return d.apply_slot(0, lambda m: self.coproduct_mono(m), ("P", "P"))

    def antipode_mono(self, mono):
        hit = self._ant_cache.get(mono)
        if hit is not None:
            return hit
        out = self.pres.one()
        for letter in reversed(self.pres.word_of(mono)):
            out = out * self.antipodes[letter]
        self._ant_cache[mono] = out
        return out

    def antipode_elem(self, elem):
        out = self.pres.zero()
        for m, c in elem.terms.items():
            out = out + self.antipode_mono(m).scale(c)
        return out

    def check_hopf(self, monos):
        """Coassociativity, counit and both antipode axioms on the window."""
        res = CheckResult()
        pres = self.pres
        for m in monos:
            d = self.coproduct_mono(m)
            a = d.apply_slot(0, lambda k: self.coproduct_mono(k), ("P", "P"))
            b = d.apply_slot(1, lambda k: self.coproduct_mono(k), ("P", "P"))
            if a != b:
                res.record(f"Hopf coassoc at {_mono_str(pres, m)}",
                           tensor_str(a, pres), tensor_str(b, pres))
            eps_id = pres.zero()
            id_eps = pres.zero()
            for (m1, m2), c in d.terms.items():
                eps_id = eps_id + AlgebraElement(pres, {m2: c * self.counit_of(m1)})
                id_eps = id_eps + AlgebraElement(pres, {m1: c * self.counit_of(m2)})
            target = AlgebraElement(pres, {m: ONE})
            if eps_id != target or id_eps != target:
                res.record(f"Hopf counit at {_mono_str(pres, m)}",
                           str(eps_id), str(target))
            s_id = pres.zero()
            id_s = pres.zero()
            for (m1, m2), c in d.terms.items():
                s_id = s_id + (self.antipode_mono(m1) * AlgebraElement(pres, {m2: ONE})).scale(c)
                id_s = id_s + (AlgebraElement(pres, {m1: ONE}) * self.antipode_mono(m2)).scale(c)
            want = pres.one().scale(self.counit_of(m))
            if s_id != want:
                res.record(f"antipode (S x id) at {_mono_str(pres, m)}",
                           str(s_id), str(want))
            if id_s != want:
                res.record(f"antipode (id x S) at {_mono_str(pres, m)}",
                           str(id_s), str(want))
        return res

    def counit_of(self, mono):
        return self.counit.eval(AlgebraElement(self.pres, {mono: ONE}))

    def ad_r_mono(self, mono):
        """Ad_R(h) = h(2) (x) (S h(1)) h(3)."""
        d2 = self.coproduct2_elem(AlgebraElement(self.pres, {mono: ONE}))
        out = MixedTensor(("P", "P"))
        for (h1, h2, h3), c in d2.terms.items():
            prod = self.antipode_mono(h1) * AlgebraElement(self.pres, {h3: ONE})
            for m, cc in prod.terms.items():
                out = out + MixedTensor(("P", "P"), {(h2, m): c * cc})
        return out

    def ad_r_elem(self, elem):
        out = MixedTensor(("P", "P"))
        for m, c in elem.terms.items():
            out = out + self.ad_r_mono(m).scale(c)
        return out


def _pp_mul(t1, t2, pres):
    """Componentwise product on ("P","P") tensors: (a x b)(c x d) = ac x bd."""
    out = MixedTensor(("P", "P"))
    for (a, b), c1 in t1.terms.items():
        for (cc, d), c2 in t2.terms.items():
            ac = pres.mul_monomials(a, cc)
            bd = pres.mul_monomials(b, d)
            coeff = c1 * c2
            for m1, x1 in ac.items():
                for m2, x2 in bd.items():
                    out = out + MixedTensor(("P", "P"), {(m1, m2): coeff * x1 * x2})
    return out


def hopf_entwining(coalg, pres, coaction_fn, index_mul, label="psi.hopf"):
    """Example-psi for an H-comodule algebra: psi(c (x) u) = u(0) (x) c u(1).

    coaction_fn(mono) -> MixedTensor ("P","C"); index_mul(i, j) ->
    CoalgElement, the product of basis indices of H.
    """

    def fn(c, mono):
        out = MixedTensor(("P", "C"))
        for (m, h), coeff in coaction_fn(mono).terms.items():
            for idx, c2 in index_mul(c, h).items():
                out = out + MixedTensor(("P", "C"), {(m, idx): coeff * c2})
        return out

    return EntwiningMap(coalg, pres, fn, label=label)


def embeddable_entwining(hopf, coalg, proj_fn, section_fn, label="psi.embed"):
    """psi(c (x) u) = u(1) (x) pi(v u(2)) with v a chosen section of c.

    proj_fn: AlgebraElement -> CoalgElement (the coalgebra surjection);
    section_fn: index -> AlgebraElement with pi(section(c)) = c.
    """

    def fn(c, mono):
        v = section_fn(c)
        if v is None:
            raise SectionUndefined(f"no section value at index {c}")
        d = hopf.coproduct_mono(mono)
        out = MixedTensor(("P", "C"))
        for (u1, u2), coeff in d.terms.items():
            w = v * AlgebraElement(hopf.pres, {u2: ONE})
            for idx, cc in proj_fn(w).items():
                out = out + MixedTensor(("P", "C"), {(u1, idx): coeff * cc})
        return out

    return EntwiningMap(coalg, hopf.pres, fn, label=label)


# ---------------------------------------------------------------------------
# dual side (character kappa): actions, coideal, quotient, cotensor map
# ---------------------------------------------------------------------------

class DualBundleData:
    def __init__(self, em, kappa):
        self.em = em
        self.kappa = kappa
        self.pres = em.pres
        self.coalg = em.coalg
        self._act_cache = {}

    def _kappa_mono(self, mono):
        return self.kappa.eval(AlgebraElement(self.pres, {mono: ONE}))

    def act1(self, celem, elem):
        """c <| u = kappa(u_a) c^a, extended bilinearly."""
        if not isinstance(celem, CoalgElement):
            celem = CoalgElement({celem: ONE})
        if isinstance(elem, AlgebraElement):
            items = elem.terms.items()
        else:
            items = [(elem, ONE)]
        out = CoalgElement()
        for c, cc in celem.items():
            for mono, mc in items:
                key = (c, mono)
                hit = self._act_cache.get(key)
                if hit is None:
                    hit = CoalgElement()
                    for (m, idx), coeff in self.em.value(c, mono).terms.items():
                        hit = hit.add(CoalgElement({idx: coeff * self._kappa_mono(m)}))
                    self._act_cache[key] = hit
                out = out.add(hit.scale(cc * mc))
        return out

    def act_n(self, t, elem):
        """<|^n on a C^n tensor: sweep the P slot left, then apply kappa."""
        assert all(s == "C" for s in t.shape)
        if isinstance(elem, AlgebraElement):
            items = elem.terms.items()
        else:
            items = [(elem, ONE)]
        out = MixedTensor(t.shape)
        for mono, mc in items:
            s = t.tensor(MixedTensor(("P",), {(mono,): ONE}))
            s = self.em.sweep_left(s, len(t.shape))
            red = MixedTensor(t.shape)
            for k, coeff in s.terms.items():
                red = red + MixedTensor(t.shape, {k[1:]: coeff * self._kappa_mono(k[0])})
            out = out + red.scale(mc)
        return out

    def check_action(self, c_indices, monos):
        res = CheckResult()
        pres = self.pres
        for c in c_indices:
            got = self.act1(c, pres.one())
            res.expect(got == CoalgElement({c: ONE}), f"c[{c}] <| 1", dict(got),
                       f"c[{c}]")
            for u in monos:
                for v in monos:
                    a = self.act1(self.act1(c, u), AlgebraElement(pres, {v: ONE}))
                    uv = AlgebraElement(pres, dict(pres.mul_monomials(u, v)))
                    b = self.act1(c, uv)
                    if a != b:
                        res.record(
                            f"action at (c[{c}], {_mono_str(pres, u)}, {_mono_str(pres, v)})",
                            dict(a), dict(b))
        return res

    def check_delta_compat(self, c_indices, monos):
        """(c(1) x c(2)) <|^2 u = Delta(c <|^1 u)."""
        res = CheckResult()
        for c in c_indices:
            for u in monos:
                lhs = self.act_n(self.coalg.delta(c), u)
                rhs = self.coalg.delta_elem(self.act1(c, u))
                if lhs != rhs:
                    res.record(f"<|^2 Delta-compat at (c[{c}], {_mono_str(self.pres, u)})",
                               tensor_str(lhs, self.pres), tensor_str(rhs, self.pres))
        return res

    def coideal_basis(self, c_indices, monos):
        """Reduced basis of I_kappa = span{c <| u - c kappa(u)}."""
        span = RowSpan()
        basis = []
        for c in c_indices:
            for u in monos:
                v = self.act1(c, u).add(
                    CoalgElement({c: -self._kappa_mono(u)}))
                if v and span.add(MixedTensor(("C",), {(i,): s for i, s in v.items()})):
                    basis.append(v)
        return basis, span

    def check_coideal(self, basis, c_indices):
        """Delta(I) subset C (x) I + I (x) C, checked by membership."""
        res = CheckResult()
        gens = []
        for b in basis:
            bt = MixedTensor(("C",), {(i,): c for i, c in b.items()})
            for idx in c_indices:
                unit = MixedTensor(("C",), {(idx,): ONE})
                gens.append(unit.tensor(bt))
                gens.append(bt.tensor(unit))
        span = RowSpan(gens)
        for b in basis:
            d = self.coalg.delta_elem(b)
            if not span.contains(d):
                res.record("coideal membership", tensor_str(d, self.pres),
                           "C (x) I + I (x) C")
        for b in basis:
            eps = self.coalg.counit_elem(b)
            res.expect(eps.is_zero(), "eps(I_kappa)", eps, "0")
        return res

    def quotient_projector(self, span):
        """pi_kappa: C -> C/I_kappa via canonical reduced representatives."""

        def proj(celem):
            v = span.reduce({(i,): c for i, c in celem.items()})
            return CoalgElement({k[0]: c for k, c in v.items()})

        return proj

    def check_zeta_containment(self, proj, c_indices, monos):
        """zeta(c (x) u) = c(1) (x) c(2) <| u lands in the cotensor product."""
        res = CheckResult()

        def pi_slot(idx):
            p = proj(CoalgElement({idx: ONE}))
            return MixedTensor(("C",), {(i,): c for i, c in p.items()})

        for c in c_indices:
            for u in monos:
                z = MixedTensor(("C", "C"))
                for (i, j), coeff in self.coalg.delta(c).terms.items():
                    for k, cc in self.act1(j, u).items():
                        z = z + MixedTensor(("C", "C"), {(i, k): coeff * cc})
                lhs = z.apply_slot(0, lambda i: self.coalg.delta(i), ("C", "C"))
                lhs = lhs.apply_slot(1, pi_slot, ("C",))
                rhs = z.apply_slot(1, lambda i: self.coalg.delta(i), ("C", "C"))
                rhs = rhs.apply_slot(1, pi_slot, ("C",))
                if lhs != rhs:
                    res.record(
                        f"zeta cotensor containment at (c[{c}], {_mono_str(self.pres, u)})",
                        tensor_str(lhs, self.pres), tensor_str(rhs, self.pres))
        return res


def dual_side(em, kappa, c_indices, monos):
    """Build DualBundleData and run the Prop-2.6-style checks."""
    from .presalg import check_character

    res = CheckResult()
    fails = check_character(kappa, em.pres)
    for rule, lv, rv in fails:
        res.record(f"character on rule {rule}", lv, rv)
    dual = DualBundleData(em, kappa)
    res.merge(dual.check_action(c_indices, monos))
    res.merge(dual.check_delta_compat(c_indices, monos))
    basis, span = dual.coideal_basis(c_indices, monos)
    res.merge(dual.check_coideal(basis, c_indices))
    proj = dual.quotient_projector(span)
    res.merge(dual.check_zeta_containment(proj, c_indices, monos))
    return dual, basis, proj, res
