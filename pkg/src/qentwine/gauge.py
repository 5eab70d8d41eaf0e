"""Trivial bundles, trivializations, Theta, and gauge transformations.

A trivialization Phi: C -> P is convolution invertible with Phi(e) = 1
and intertwines psi with a chosen psi^C:

    psi o (id (x) Phi) = (Phi (x) id) o psi^C           (cov.phi)

Gauge transformations are convolution-invertible M-valued maps gamma
with gamma(e) = 1 satisfying

    psi^C_23 o psi_12 o (id (x) gamma (x) id) o (id (x) Delta)
        = (gamma (x) id (x) id) o (Delta (x) id) o psi^C

and act on trivializations by gamma * Phi.  On the quantum cylinder the
gauge group is the group of sequences Gamma with the q-binomial
convolution product.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coalg import CoalgElement, ConvMap, convolution_inverse, convolve
from .errors import SingularComponent, ValuesNotInM
from .scalars import ONE, ZERO, Scalar, q_binom
from .tensors import MixedTensor, from_elem, tensor_str, to_elem
from .verdict import CheckResult


class PsiCMap:
    def __init__(self, coalg, fn, label="psiC"):
        self.coalg = coalg
        self.fn = fn
        self.label = label
        self._cache = {}

    def value(self, b, c):
        key = (b, c)
        v = self._cache.get(key)
        if v is None:
            v = self.fn(b, c)
            assert v.shape == ("C", "C")
            self._cache[key] = v
        return v

    def apply_at(self, t, i):
        assert t.shape[i] == "C" and t.shape[i + 1] == "C"
        return t.apply_pair(i, self.value, ("C", "C"))


def check_psiC(psic, indices):
    """The two displayed psi^C conditions plus psi^C(e (x) c) = Delta c."""
    res = CheckResult()
    coalg = psic.coalg
    for c in indices:
        got = psic.value(coalg.e, c)
        want = coalg.delta(c)
        if got != want:
            res.record(f"psiC(e (x) c[{c}])", tensor_str(got, None),
                       tensor_str(want, None))
    for b in indices:
        for c in indices:
            v = psic.value(b, c)
            lhs = v.apply_slot(1, lambda i: coalg.delta(i), ("C", "C"))
            t = coalg.delta(b).tensor(MixedTensor(("C",), {(c,): ONE}))
            t = psic.apply_at(t, 1)
            rhs = psic.apply_at(t, 0)
            if lhs != rhs:
                res.record(f"psiC coproduct condition at (c[{b}], c[{c}])",
                           tensor_str(lhs, None), tensor_str(rhs, None))
            ce = MixedTensor(("C",))
            for (i, j), coeff in v.terms.items():
                ce = ce + MixedTensor(("C",), {(i,): coeff * coalg.counit(j)})
            want = MixedTensor(("C",), {(c,): coalg.counit(b)})
            if ce != want:
                res.record(f"psiC counit condition at (c[{b}], c[{c}])",
                           tensor_str(ce, None), tensor_str(want, None))
    return res


@dataclass
class TrivialBundleData:
    bundle: object            # entwine.BundleData
    psic: PsiCMap
    phi: ConvMap
    phi_inv: ConvMap = None

    def __post_init__(self):
        self.pres = self.bundle.pres
        self.coalg = self.bundle.coalg


def make_trivial(bundle, psic, phi, window_indices, phi_inv=None):
    if phi_inv is None:
        phi_inv = convolution_inverse(phi, window_indices)
    return TrivialBundleData(bundle, psic, phi, phi_inv)


def check_trivialization(t, indices):
    """Phi(e) = 1, (cov.phi), and its two derived identities."""
    res = CheckResult()
    bundle, psic, phi, phi_inv = t.bundle, t.psic, t.phi, t.phi_inv
    pres, coalg = t.pres, t.coalg
    em = bundle.em
    res.expect(phi.unital_at_e(), "Phi(e)", tensor_str(phi.value(coalg.e), pres), "1")
    for b in indices:
        for c in indices:
            lhs = MixedTensor(("P", "C"))
            for (m,), coeff in phi.value(c).terms.items():
                lhs = lhs + em.value(b, m).scale(coeff)
            rhs = MixedTensor(("P", "C"))
            for (i, j), coeff in psic.value(b, c).terms.items():
                for (m,), cc in phi.value(i).terms.items():
                    rhs = rhs + MixedTensor(("P", "C"), {(m, j): coeff * cc})
            if lhs != rhs:
                res.record(f"(cov.phi) at (c[{b}], c[{c}])",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    for c in indices:
        dr = MixedTensor(("P", "C"))
        for (m,), coeff in phi.value(c).terms.items():
            dr = dr + bundle.coaction_mono(m).scale(coeff)
        want = MixedTensor(("P", "C"))
        for (i, j), coeff in coalg.delta(c).terms.items():
            for (m,), cc in phi.value(i).terms.items():
                want = want + MixedTensor(("P", "C"), {(m, j): coeff * cc})
        if dr != want:
            res.record(f"Delta_R Phi = (Phi x id) Delta at c[{c}]",
                       tensor_str(dr, pres), tensor_str(want, pres))
        # psi(c(1) (x) Phi^-1(c(2))) = Phi^-1(c) (x) e
        got = MixedTensor(("P", "C"))
        for (i, j), coeff in coalg.delta(c).terms.items():
            for (m,), cc in phi_inv.value(j).terms.items():
                got = got + em.value(i, m).scale(coeff * cc)
        want = phi_inv.value(c).tensor(MixedTensor(("C",), {(coalg.e,): ONE}))
        if got != want:
            res.record(f"(cov.phi-1) at c[{c}]",
                       tensor_str(got, pres), tensor_str(want, pres))
    return res


def theta(t, m_monos, indices):
    """Theta: M (x) C -> P, x (x) c -> x Phi(c), as a component table."""
    table = {}
    for x in m_monos:
        for c in indices:
            xe = MixedTensor(("P",), {(x,): ONE})
            table[(x, c)] = _pmul(xe, t.phi.value(c), t.pres)
    return table


def theta_inv(t, mono):
    """Theta^-1: u -> u(0) Phi^-1(u(1)(1)) (x) u(1)(2)."""
    bundle, phi_inv, coalg, pres = t.bundle, t.phi_inv, t.coalg, t.pres
    dr = bundle.coaction_mono(mono)
    out = MixedTensor(("P", "C"))
    for (u0, u1), coeff in dr.terms.items():
        for (i, j), cc in coalg.delta(u1).terms.items():
            val = _pmul(MixedTensor(("P",), {(u0,): ONE}), phi_inv.value(i), pres)
            for (m,), c3 in val.terms.items():
                out = out + MixedTensor(("P", "C"), {(m, j): coeff * cc * c3})
    return out


def check_theta(t, m_monos, indices):
    """Theta and Theta^-1 are mutually inverse on the component."""
    res = CheckResult()
    pres = t.pres
    table = theta(t, m_monos, indices)
    # Theta^-1 o Theta = id on M (x) C
    for (x, c), val in table.items():
        back = MixedTensor(("P", "C"))
        for (m,), coeff in val.terms.items():
            back = back + theta_inv(t, m).scale(coeff)
        want = MixedTensor(("P", "C"), {(x, c): ONE})
        if back != want:
            res.record(f"Theta^-1 Theta at ({_m(pres, x)}, c[{c}])",
                       tensor_str(back, pres), tensor_str(want, pres))
    return res


def check_theta_on_monomials(t, monos, m_span, indices):
    """Theta o Theta^-1 = id on P window monomials.

    m_span: monomials spanning the window part of M (image check).
    """
    res = CheckResult()
    pres = t.pres
    mset = set(m_span)
    for u in monos:
        ti = theta_inv(t, u)
        for (x, c), _ in ti.terms.items():
            if x not in mset:
                res.record(f"Theta^-1({_m(pres, u)}) image", _m(pres, x),
                           "an M monomial", note="left slot outside M")
        forward = MixedTensor(("P",))
        for (x, c), coeff in ti.terms.items():
            forward = forward + _pmul(
                MixedTensor(("P",), {(x,): ONE}), t.phi.value(c), pres
            ).scale(coeff)
        want = MixedTensor(("P",), {(u,): ONE})
        if forward != want:
            res.record(f"Theta Theta^-1 at {_m(pres, u)}",
                       tensor_str(forward, pres), tensor_str(want, pres))
    return res


def _pmul(t1, t2, pres):
    from .tensors import form_mul
    return form_mul(t1, t2, pres)


def _m(pres, mono):
    from .tensors import mono_str
    return mono_str(pres, mono)


# ---------------------------------------------------------------------------
# gauge transformations
# ---------------------------------------------------------------------------

@dataclass
class GaugeTransformation:
    gamma: ConvMap
    gamma_inv: ConvMap = None


def check_gauge(t, gamma, indices, is_in_m=None):
    """gamma(e) = 1, M-valued values, and the displayed gauge condition."""
    res = CheckResult()
    bundle, psic, coalg, pres = t.bundle, t.psic, t.coalg, t.pres
    em = bundle.em
    g = gamma.gamma if isinstance(gamma, GaugeTransformation) else gamma
    res.expect(g.unital_at_e(), "gamma(e)", tensor_str(g.value(coalg.e), pres), "1")
    if is_in_m is None:
        is_in_m = lambda elem: bundle.is_coinvariant(elem)
    for c in indices:
        val = to_elem(g.value(c), pres)
        if not is_in_m(val):
            raise ValuesNotInM(f"gamma(c[{c}]) = {val} is not in M")
    for b in indices:
        for c in indices:
            # LHS: psiC_23 psi_12 (id x gamma x id)(id x Delta)(b (x) c)
            lhs = MixedTensor(("P", "C", "C"))
            for (c1, c2), coeff in coalg.delta(c).terms.items():
                for (m,), cc in g.value(c1).terms.items():
                    step = em.value(b, m)  # ("P","C")
                    for (u, ba), c3 in step.terms.items():
                        for (j, k), c4 in psic.value(ba, c2).terms.items():
                            lhs = lhs + MixedTensor(
                                ("P", "C", "C"), {(u, j, k): coeff * cc * c3 * c4})
            # RHS: (gamma x id x id)(Delta x id) psiC(b (x) c)
            rhs = MixedTensor(("P", "C", "C"))
            for (ca, ba), coeff in psic.value(b, c).terms.items():
                for (a1, a2), cc in coalg.delta(ca).terms.items():
                    for (m,), c3 in g.value(a1).terms.items():
                        rhs = rhs + MixedTensor(
                            ("P", "C", "C"), {(m, a2, ba): coeff * cc * c3})
            if lhs != rhs:
                res.record(f"(gauge.condition) at (c[{b}], c[{c}])",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    return res


def gauge_act(t, gamma, window_indices):
    """Phi' = gamma * Phi, returned as a new trivial bundle."""
    g = gamma.gamma if isinstance(gamma, GaugeTransformation) else gamma
    phi2 = convolve(g, t.phi)
    phi2.label = f"({g.label})*({t.phi.label})"
    phi2_inv = convolution_inverse(phi2, window_indices)
    return TrivialBundleData(t.bundle, t.psic, phi2, phi2_inv)


# ---------------------------------------------------------------------------
# the cylinder gauge group of sequences
# ---------------------------------------------------------------------------

class GaugeSequence(tuple):
    """Scalars (1, Gamma_1, ..., Gamma_N) under q-binomial convolution."""

    def __new__(cls, vals):
        vals = tuple(v if isinstance(v, Scalar) else Scalar.from_int(v) for v in vals)
        if not vals or vals[0] != ONE:
            raise ValueError("gauge sequences start with Gamma_0 = 1")
        return super().__new__(cls, vals)


def seq_mul(a, b):
    n = min(len(a), len(b))
    out = []
    for k in range(n):
        acc = ZERO
        for i in range(k + 1):
            acc = acc + q_binom(k, i) * a[i] * b[k - i]
        out.append(acc)
    return GaugeSequence(out)


def seq_inv(a):
    out = [ONE]
    for k in range(1, len(a)):
        acc = ZERO
        for i in range(1, k + 1):
            acc = acc + q_binom(k, i) * a[i] * out[k - i]
        out.append(-acc)
    return GaugeSequence(out)


def seq_identity(n):
    return GaugeSequence([ONE] + [ZERO] * (n - 1))


def to_gamma(t, seq):
    """gamma(c_n) = Gamma_n x^n as a ConvMap on the cylinder coalgebra."""
    pres, coalg = t.pres, t.coalg
    xi = pres.index["x"]

    def fn(idx):
        if idx >= len(seq):
            raise IndexError(f"gauge sequence too short for index {idx}")
        mono = [0] * pres.ngens
        mono[xi] = idx
        return MixedTensor(("P",), {(tuple(mono),): seq[idx]})

    return ConvMap(coalg, pres, fn, degree=1, label="gamma.seq")
