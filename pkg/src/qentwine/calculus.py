"""Universal differential calculus, connections, and quotient calculi.

Forms are raw tensors in P^(n+1); membership in Omega^n P (kernel of
every adjacent multiplication) is a checked invariant.  du = 1 (x) u -
u (x) 1.  Connection one-forms omega: ker eps -> Omega^1 P satisfy

    1.  chi o omega(c) = 1 (x) c
    2.  <-psi^2(b (x) omega(c)) =
            c<1>_a c<2>_{bd} omega(e^d) (x) b^{ab}

with tau(c) = c<1> (x)_M c<2> the translation map.  The general
(nonuniversal) structures quotient Omega^1 P by a covariant subbimodule
N and track script-M = (P (x) ker eps)/chi(N), Lambda, chi_N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coalg import CoalgElement, ConvMap, convolve, convolve_many
from .errors import (
    BetaConditionFails,
    HypothesisFails,
    Inconsistent,
    NotInKernel,
    SectionIncompatible,
)
from .linalg import QuotientSpace, RowSpan, express_in
from .presalg import AlgebraElement, solve_linear
from .scalars import ONE, ZERO, Scalar
from .tensors import (
    MixedTensor,
    form_mul,
    from_elem,
    mono_str,
    mul_pp,
    tensor_str,
    to_elem,
)
from .verdict import CheckResult


# ---------------------------------------------------------------------------
# the Karoubi differential
# ---------------------------------------------------------------------------

def d_elem(pres, elem):
    """du = 1 (x) u - u (x) 1."""
    unit = next(iter(pres.one().terms))
    out = MixedTensor(("P", "P"))
    for m, c in elem.terms.items():
        out = out + MixedTensor(("P", "P"), {(unit, m): c, (m, unit): -c})
    return out


def d_mono(pres, mono):
    unit = next(iter(pres.one().terms))
    return MixedTensor(("P", "P"), {(unit, mono): ONE, (mono, unit): -ONE})


def d_tensor(t, pres, p_slots=None):
    """Alternating unit insertion on the leading P block of a tensor."""
    unit = next(iter(pres.one().terms))
    n = p_slots if p_slots is not None else len(t.shape)
    assert all(s == "P" for s in t.shape[:n])
    shape = ("P",) * (n + 1) + t.shape[n:]
    out = MixedTensor(shape)
    sign = ONE
    for i in range(n + 1):
        part = {}
        for k, c in t.terms.items():
            nk = k[:i] + (unit,) + k[i:]
            part[nk] = part.get(nk, ZERO) + sign * c
        out = out + MixedTensor(shape, part)
        sign = -sign
    return out


def check_leibniz(pres, monos):
    res = CheckResult()
    for u in monos:
        for v in monos:
            ue = AlgebraElement(pres, {u: ONE})
            ve = AlgebraElement(pres, {v: ONE})
            lhs = d_elem(pres, ue * ve)
            rhs = form_mul(d_elem(pres, ue), from_elem(ve), pres) + \
                form_mul(from_elem(ue), d_elem(pres, ve), pres)
            if lhs != rhs:
                res.record(f"Leibniz at ({mono_str(pres, u)}, {mono_str(pres, v)})",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    return res


def omega_basis(pres, tuples, degree):
    """Basis of Omega^degree P inside the span of the given key tuples."""
    cols = []
    keys = set()
    for tup in tuples:
        t = MixedTensor(("P",) * (degree + 1), {tuple(tup): ONE})
        coords = {}
        for i in range(degree):
            m = mul_pp(t, i, pres)
            for k, c in m.terms.items():
                coords[(i, k)] = coords.get((i, k), ZERO) + c
        cols.append(coords)
        keys.update(coords)
    keys = sorted(keys, key=repr)
    rows = [[col.get(k, ZERO) for col in cols] for k in keys]
    if not rows:
        rows = [[ZERO] * len(cols)]
    kern = solve_linear(rows).kernel
    out = []
    for v in kern:
        t = MixedTensor(("P",) * (degree + 1))
        for tup, c in zip(tuples, v):
            if not c.is_zero():
                t = t + MixedTensor(t.shape, {tuple(tup): c})
        out.append(t)
    return out


def check_d_covariance(bundle, c_indices, monos, form_basis=()):
    """<-psi^n (id (x) d) = (d (x) id) <-psi^(n-1) for n = 2 and n = 3."""
    res = CheckResult()
    pres, em = bundle.pres, bundle.em
    for c in c_indices:
        for u in monos:
            du = d_mono(pres, u)
            t = MixedTensor(("C",), {(c,): ONE}).tensor(du)
            lhs = em.sweep_right(t, 0)
            rhs = d_tensor(em.value(c, u), pres, p_slots=1)
            if lhs != rhs:
                res.record(f"d-covariance n=2 at (c[{c}], {mono_str(pres, u)})",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    for c in c_indices:
        for rho in form_basis:
            drho = d_tensor(rho, pres)
            t = MixedTensor(("C",), {(c,): ONE}).tensor(drho)
            lhs = em.sweep_right(t, 0)
            s = MixedTensor(("C",), {(c,): ONE}).tensor(rho)
            rhs = d_tensor(em.sweep_right(s, 0), pres, p_slots=len(rho.shape))
            if lhs != rhs:
                res.record(f"d-covariance n=3 at (c[{c}], {tensor_str(rho, pres)})",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    return res


# ---------------------------------------------------------------------------
# horizontal forms
# ---------------------------------------------------------------------------

def check_psi_cm_hypothesis(bundle, c_indices, m_monos):
    """psi(C (x) M) subset M (x) C, the sufficiency hypothesis."""
    res = CheckResult()
    pres = bundle.pres
    for c in c_indices:
        for x in m_monos:
            v = bundle.em.value(c, x)
            for (m, idx), coeff in v.terms.items():
                elem = AlgebraElement(pres, {m: ONE})
                if not bundle.is_coinvariant(elem):
                    res.record(f"psi(c[{c}] (x) {mono_str(pres, x)})",
                               mono_str(pres, m), "an M monomial",
                               note="hypothesis psi(C x M) in M x C fails")
    if not res.ok:
        raise HypothesisFails("; ".join(str(c) for c in res.counterexamples))
    return res


def horizontal_span(bundle, triples):
    """Spanning tensors u d(x) v for (u, x, v) triples, reduced to a basis."""
    pres = bundle.pres
    out = []
    span = RowSpan()
    for u, x, v in triples:
        t = form_mul(
            form_mul(MixedTensor(("P",), {(u,): ONE}), d_mono(pres, x), pres),
            MixedTensor(("P",), {(v,): ONE}), pres)
        if not t.is_zero() and span.add(t):
            out.append(t)
    return out, span


def check_horizontal_covariance(bundle, c_indices, horiz_span):
    """<-psi^2(C (x) P Omega^1M P) stays inside the horizontal span."""
    res = CheckResult()
    basis, span = horiz_span
    for c in c_indices:
        for h in basis:
            t = MixedTensor(("C",), {(c,): ONE}).tensor(h)
            img = bundle.em.sweep_right(t, 0)
            by_idx = {}
            for k, coeff in img.terms.items():
                by_idx.setdefault(k[-1], {})[k[:-1]] = coeff
            for idx, part in by_idx.items():
                if not span.contains(part):
                    res.record(
                        f"horizontal covariance at (c[{c}], {tensor_str(h, bundle.pres)})",
                        f"component at c[{idx}]", "inside P Omega^1M P")
    return res


# ---------------------------------------------------------------------------
# chi, phi and connection forms
# ---------------------------------------------------------------------------

def chi_at(bundle, t, i):
    """chi on P slots (i, i+1): u (x) v -> u psi(e (x) v)."""
    s = t.apply_slot(i + 1, lambda m: bundle.coaction_mono(m), ("P", "C"))
    return mul_pp(s, i, bundle.pres)


def phi_map(bundle, tau_fn, b, u_mono, celem):
    """phi(b (x) u (x) c) = u_a c<1>_b c<2>_{gd} (x) e^d (x) b^{abg}."""
    pres = bundle.pres
    out = MixedTensor(("P", "C", "C"))
    if not isinstance(celem, CoalgElement):
        celem = CoalgElement({celem: ONE})
    for idx, cc in celem.items():
        rep = tau_fn(idx)  # ("P","P")
        ut = form_mul(MixedTensor(("P",), {(u_mono,): ONE}), rep, pres)
        t = MixedTensor(("C",), {(b,): ONE}).tensor(ut)
        t = bundle.em.sweep_right(t, 0)          # ("P","P","C")
        t = chi_at(bundle, t, 0)                 # ("P","C","C")
        out = out + t.scale(cc)
    return out


def check_phi_intertwines(bundle, tau_fn, c_indices, form_basis):
    """phi o (id (x) chi) = (chi (x) id) o <-psi^2 on window forms."""
    res = CheckResult()
    pres = bundle.pres
    for b in c_indices:
        for rho in form_basis:
            chi_rho = bundle.chi_tensor(rho)
            lhs = MixedTensor(("P", "C", "C"))
            for (u, idx), coeff in chi_rho.terms.items():
                lhs = lhs + phi_map(bundle, tau_fn, b, u, idx).scale(coeff)
            t = MixedTensor(("C",), {(b,): ONE}).tensor(rho)
            rhs = chi_at(bundle, bundle.em.sweep_right(t, 0), 0)
            if lhs != rhs:
                res.record(f"phi intertwining at (c[{b}], {tensor_str(rho, pres)})",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    return res


def omega_cond2_rhs(bundle, omega_value, tau_fn, b, celem):
    """RHS of Condition 2: c<1>_a c<2>_{bd} omega(e^d) (x) b^{ab}."""
    pres = bundle.pres
    out = None
    if not isinstance(celem, CoalgElement):
        celem = CoalgElement({celem: ONE})
    for idx, cc in celem.items():
        rep = tau_fn(idx)
        t = MixedTensor(("C",), {(b,): ONE}).tensor(rep)
        t = bundle.em.sweep_right(t, 0)                          # ("P","P","C")
        t = t.apply_slot(1, lambda m: bundle.coaction_mono(m), ("P", "C"))
        # now ("P","P","C","C"): (c<1>_a, c<2>_{bd}, e^d, b^{ab})
        t = t.apply_slot(2, omega_value, ("P", "P"))             # omega(e^d)
        t = mul_pp(mul_pp(t, 0, pres), 0, pres)                  # multiply into omega
        out = t.scale(cc) if out is None else out + t.scale(cc)
    return out if out is not None else MixedTensor(("P", "P", "C"))


def check_omega(bundle, omega, ker_basis, b_indices, tau_fn):
    """Conditions 1 and 2 of the connection-form proposition."""
    res = CheckResult()
    pres = bundle.pres
    coalg = bundle.coalg
    unit = next(iter(pres.one().terms))
    ov = omega.value(coalg.e)
    res.expect(ov.is_zero(), "omega(e)", tensor_str(ov, pres), "0")
    for kb in ker_basis:
        w = omega.value_elem(kb)
        got = bundle.chi_tensor(w)
        want = MixedTensor(("P", "C"), {(unit, i): c for i, c in kb.items()})
        if got != want:
            res.record(f"Condition 1 at {dict(kb)}", tensor_str(got, pres),
                       tensor_str(want, pres))
    for b in b_indices:
        for kb in ker_basis:
            w = omega.value_elem(kb)
            t = MixedTensor(("C",), {(b,): ONE}).tensor(w)
            lhs = bundle.em.sweep_right(t, 0)
            rhs = omega_cond2_rhs(bundle, omega.value, tau_fn, b, kb)
            if lhs != rhs:
                res.record(f"Condition 2 at (c[{b}], {dict(kb)})",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    return res


def pi_from_omega(bundle, omega):
    """Pi = . o (id (x) omega) o chi, a left P-module map on one-forms."""

    def pi(t):
        chi_t = bundle.chi_tensor(t)
        out = MixedTensor(("P", "P"))
        for (u, idx), coeff in chi_t.terms.items():
            val = omega.value(idx)
            if val.is_zero():
                continue
            out = out + form_mul(MixedTensor(("P",), {(u,): ONE}), val,
                                 bundle.pres).scale(coeff)
        return out

    return pi


def check_connection(bundle, pi, omega1_basis, horiz, c_indices, lin_samples=()):
    """Projection, kernel, left-linearity and equivariance checks."""
    res = CheckResult()
    pres = bundle.pres
    horiz_basis, horiz_span_ = horiz
    images = []
    for rho in omega1_basis:
        p1 = pi(rho)
        p2 = pi(p1)
        if p1 != p2:
            res.record(f"Pi^2 = Pi at {tensor_str(rho, pres)}",
                       tensor_str(p2, pres), tensor_str(p1, pres))
        images.append(p1)
    for h in horiz_basis:
        ph = pi(h)
        if not ph.is_zero():
            res.record(f"Pi on horizontal {tensor_str(h, pres)}",
                       tensor_str(ph, pres), "0")
    # kernel dimension: dim Omega^1 - rank(Pi) must equal dim horizontals
    span_keys = sorted({k for t in images for k in t.terms}, key=repr)
    rows = [[t.terms.get(k, ZERO) for t in images] for k in span_keys]
    rank = solve_linear(rows).rank if rows else 0
    horiz_in = sum(1 for h in horiz_basis for _ in [0])
    res.expect(
        len(omega1_basis) - rank == horiz_span_.dim,
        "dim ker Pi", str(len(omega1_basis) - rank), str(horiz_span_.dim),
        note="kernel must be exactly the horizontal forms")
    for u, rho in lin_samples:
        lhs = pi(form_mul(from_elem(u), rho, pres))
        rhs = form_mul(from_elem(u), pi(rho), pres)
        if lhs != rhs:
            res.record(f"left-linearity at ({u}, {tensor_str(rho, pres)})",
                       tensor_str(lhs, pres), tensor_str(rhs, pres))
    for c in c_indices:
        for rho in omega1_basis:
            t = MixedTensor(("C",), {(c,): ONE}).tensor(pi(rho))
            lhs = bundle.em.sweep_right(t, 0)
            s = MixedTensor(("C",), {(c,): ONE}).tensor(rho)
            img = bundle.em.sweep_right(s, 0)
            rhs = MixedTensor(("P", "P", "C"))
            for k, coeff in img.terms.items():
                part = pi(MixedTensor(("P", "P"), {k[:2]: ONE}))
                for pk, pc in part.terms.items():
                    rhs = rhs + MixedTensor(("P", "P", "C"), {pk + (k[2],): coeff * pc})
            if lhs != rhs:
                res.record(f"equivariance at (c[{c}], {tensor_str(rho, pres)})",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    return res


# ---------------------------------------------------------------------------
# trivial connections and local gauge fields
# ---------------------------------------------------------------------------

def d_conv(conv):
    """c -> d(f(c)) for an algebra-valued ConvMap f."""

    def fn(idx):
        v = conv.value(idx)
        return d_tensor(v, conv.pres, p_slots=1)

    return ConvMap(conv.spec, conv.pres, fn, degree=2, label=f"d({conv.label})")


def trivial_connection(trivial, beta=None):
    """omega = Phi^-1 * dPhi (+ Phi^-1 * beta * Phi)."""
    phi, phi_inv = trivial.phi, trivial.phi_inv
    omega = convolve(phi_inv, d_conv(phi))
    if beta is not None:
        omega2 = convolve_many([phi_inv, beta, phi])
        base = omega

        def fn(idx):
            return base.value(idx) + omega2.value(idx)

        omega = ConvMap(phi.spec, phi.pres, fn, degree=2,
                        label="Phi^-1*dPhi + Phi^-1*beta*Phi")
    else:
        omega.label = "Phi^-1*dPhi"
    return omega


def check_beta(trivial, beta, indices, is_in_m_mono):
    """beta(e) = 0, values in Omega^1 M, and the displayed compatibility."""
    res = CheckResult()
    bundle, psic = trivial.bundle, trivial.psic
    pres, coalg = trivial.pres, trivial.coalg
    em = bundle.em
    v_e = beta.value(coalg.e)
    if not v_e.is_zero():
        raise BetaConditionFails(f"beta(e) = {tensor_str(v_e, pres)} != 0")
    for c in indices:
        v = beta.value(c)
        for (a, b) in v.terms:
            if not (is_in_m_mono(a) and is_in_m_mono(b)):
                raise BetaConditionFails(
                    f"beta(c[{c}]) has a tensor factor outside M")
        if not mul_pp(v, 0, pres).is_zero():
            raise BetaConditionFails(f"beta(c[{c}]) is not a one-form")
    for b in indices:
        for c in indices:
            lhs = MixedTensor(("P", "P", "C", "C"))
            for (c1, c2), coeff in coalg.delta(c).terms.items():
                t = MixedTensor(("C",), {(b,): ONE}).tensor(beta.value(c1))
                t = t.tensor(MixedTensor(("C",), {(c2,): ONE}))
                t = em.apply_at(t, 0)
                t = em.apply_at(t, 1)            # ("P","P","C","C")
                t = t.apply_pair(2, psic.value, ("C", "C"))
                lhs = lhs + t.scale(coeff)
            rhs = MixedTensor(("P", "P", "C", "C"))
            for (ca, ba), coeff in psic.value(b, c).terms.items():
                for (a1, a2), cc in coalg.delta(ca).terms.items():
                    bt = beta.value(a1)
                    for (m1, m2), c3 in bt.terms.items():
                        rhs = rhs + MixedTensor(
                            ("P", "P", "C", "C"),
                            {(m1, m2, a2, ba): coeff * cc * c3})
            if lhs != rhs:
                res.record(f"(beta.condition) at (c[{b}], c[{c}])",
                           tensor_str(lhs, pres), tensor_str(rhs, pres))
    return res


def beta_gauge(gamma, gamma_inv, beta):
    """beta -> gamma^-1 * dgamma + gamma^-1 * beta * gamma."""
    first = convolve(gamma_inv, d_conv(gamma))
    second = convolve_many([gamma_inv, beta, gamma])

    def fn(idx):
        return first.value(idx) + second.value(idx)

    return ConvMap(beta.spec, beta.pres, fn, degree=2,
                   label="gamma^-1*dgamma + gamma^-1*beta*gamma")


def zero_beta(coalg, pres):
    def fn(idx):
        return MixedTensor(("P", "P"))

    return ConvMap(coalg, pres, fn, degree=2, label="beta.zero")


# ---------------------------------------------------------------------------
# canonical connection on an embeddable bundle
# ---------------------------------------------------------------------------

def canonical_connection(hopf, coalg, proj_fn, section_fn, check_indices):
    """omega(c) = (S i(c)(1)) d i(c)(2), after the compatibility check."""
    pres = hopf.pres
    res = CheckResult()
    for c in check_indices:
        ic = section_fn(c)
        ad = hopf.ad_r_elem(ic)
        lhs = MixedTensor(("P", "C"))
        for (h1, h2), coeff in ad.terms.items():
            for idx, cc in proj_fn(AlgebraElement(pres, {h2: ONE})).items():
                lhs = lhs + MixedTensor(("P", "C"), {(h1, idx): coeff * cc})
        rhs = MixedTensor(("P", "C"))
        for (h1, h2), coeff in ad.terms.items():
            p1 = proj_fn(AlgebraElement(pres, {h1: ONE}))
            p2 = proj_fn(AlgebraElement(pres, {h2: ONE}))
            for i1, c1 in p1.items():
                sec = section_fn(i1)
                for m, cm in sec.terms.items():
                    for i2, c2 in p2.items():
                        rhs = rhs + MixedTensor(
                            ("P", "C"), {(m, i2): coeff * c1 * cm * c2})
        if lhs != rhs:
            res.record(f"section compatibility at c[{c}]",
                       tensor_str(lhs, pres), tensor_str(rhs, pres))
    if not res.ok:
        raise SectionIncompatible("; ".join(str(c) for c in res.counterexamples))

    def fn(idx):
        ic = section_fn(idx)
        d = hopf.coproduct_elem(ic)
        out = MixedTensor(("P", "P"))
        for (h1, h2), coeff in d.terms.items():
            s = hopf.antipode_mono(h1)
            out = out + form_mul(from_elem(s),
                                 d_mono(pres, h2), pres).scale(coeff)
        return out

    return ConvMap(coalg, pres, fn, degree=2, label="canonical.omega"), res


# ---------------------------------------------------------------------------
# general (nonuniversal) differential structures
# ---------------------------------------------------------------------------

@dataclass
class CalculusComponent:
    key: tuple
    pairs: list
    omega1: list = field(default_factory=list)
    n_basis: list = field(default_factory=list)
    n_span: RowSpan = None
    quot_n: QuotientSpace = None
    omega1_q: list = field(default_factory=list)
    horiz: tuple = None
    horiz_q: list = field(default_factory=list)
    pc_keys: list = field(default_factory=list)
    chi_n: list = field(default_factory=list)
    quot_m: QuotientSpace = None
    m_basis: list = field(default_factory=list)


def build_component(bundle, key, pairs, gen_products, horiz_triples, pc_keys):
    """Assemble one graded component of the general-calculus data.

    gen_products: list of MixedTensors u.g.v spanning the N component.
    """
    pres = bundle.pres
    comp = CalculusComponent(key=key, pairs=list(pairs))
    comp.omega1 = omega_basis(pres, pairs, 1)
    span = RowSpan()
    for t in gen_products:
        if t.is_zero():
            continue
        if span.add(t):
            comp.n_basis.append(t)
    comp.n_span = span
    comp.quot_n = QuotientSpace(comp.n_basis)
    comp.omega1_q = comp.quot_n.basis_from(comp.omega1)
    comp.horiz = horizontal_span(bundle, horiz_triples)
    hq = RowSpan()
    for h in comp.horiz[0]:
        r = comp.quot_n.project(h)
        if r and hq.add(r):
            comp.horiz_q.append(r)
    comp.pc_keys = list(pc_keys)
    for t in comp.n_basis:
        comp.chi_n.append(bundle.chi_tensor(MixedTensor(("P", "P"), t.terms)
                                            if not isinstance(t, MixedTensor) else t))
    comp.quot_m = QuotientSpace(comp.chi_n)
    comp.m_basis = comp.quot_m.basis_from(
        [MixedTensor(("P", "C"), {k: ONE}) for k in comp.pc_keys])
    return comp


def check_generators_in_kernel(pres, generators):
    res = CheckResult()
    for i, g in enumerate(generators):
        m = mul_pp(g, 0, pres)
        if not m.is_zero():
            res.record(f"N generator {i}", tensor_str(m, pres), "0",
                       note="multiplication must annihilate subbimodule generators")
    if not res.ok:
        raise NotInKernel("; ".join(str(c) for c in res.counterexamples))
    return res


def check_n_covariance(bundle, comps, c_indices, component_of):
    """<-psi^2(C (x) N) subset N (x) C, componentwise membership."""
    res = CheckResult()
    for comp in comps.values():
        for n in comp.n_basis:
            for c in c_indices:
                t = MixedTensor(("C",), {(c,): ONE}).tensor(n)
                img = bundle.em.sweep_right(t, 0)
                by_idx = {}
                for k, coeff in img.terms.items():
                    by_idx.setdefault(k[-1], {})[k[:-1]] = coeff
                for idx, part in by_idx.items():
                    tk = component_of(part)
                    target = comps.get(tk)
                    if target is None:
                        res.record(
                            f"N covariance at (c[{c}], {comp.key})",
                            f"needs component {tk}", "inside built window",
                            note="widen the component window")
                        continue
                    if not target.n_span.contains(part):
                        res.record(
                            f"N covariance at (c[{c}], component {comp.key})",
                            tensor_str(MixedTensor(("P", "P"), part), bundle.pres),
                            "inside N")
    return res


def check_exactness(comp):
    """0 -> P Omega^1(M) P -> Omega^1(P) -> script-M -> 0 on the component."""
    res = CheckResult()
    dim_o = len(comp.omega1_q)
    dim_h = len(comp.horiz_q)
    dim_m = len(comp.m_basis)
    res.expect(dim_h + dim_m == dim_o,
               f"exactness dims at {comp.key}",
               f"{dim_h} + {dim_m}", str(dim_o))
    return res


def chi_n_class(bundle, comp, form_dict):
    """chi_N of a quotient class, as a canonical script-M representative."""
    t = MixedTensor(("P", "P"), form_dict)
    return comp.quot_m.project(bundle.chi_tensor(t))


def check_chi_n(bundle, comp):
    """chi_N kills exactly the horizontal classes and is onto script-M."""
    res = CheckResult()
    images = [chi_n_class(bundle, comp, w) for w in comp.omega1_q]
    keys = sorted({k for im in images for k in im}, key=repr)
    rows = [[im.get(k, ZERO) for im in images] for k in keys]
    rank = solve_linear(rows).rank if rows else 0
    res.expect(rank == len(comp.m_basis), f"chi_N surjective at {comp.key}",
               str(rank), str(len(comp.m_basis)))
    for h in comp.horiz_q:
        img = chi_n_class(bundle, comp, h)
        res.expect(not img, f"chi_N on horizontal class at {comp.key}",
                   str({k: str(v) for k, v in img.items()}), "0")
    res.expect(len(comp.omega1_q) - rank == len(comp.horiz_q),
               f"ker chi_N at {comp.key}",
               str(len(comp.omega1_q) - rank), str(len(comp.horiz_q)))
    return res


class GeneralCalculus:
    """A covariant N with all of its derived quotient structures.

    components maps grading keys to CalculusComponent; component_of
    sends a raw P (x) P term dict to its grading key; p_monos(key,
    lam_key) lists the monomials u with u . lambda in the key
    component.
    """

    def __init__(self, bundle, generators, components, component_of, p_monos,
                 lam_index):
        self.bundle = bundle
        self.generators = generators
        self.components = components
        self.component_of = component_of
        self.p_monos = p_monos
        self.lam_index = lam_index
        self._iso_cache = {}

    def lam_class(self, comp):
        unit = next(iter(self.bundle.pres.one().terms))
        return comp.quot_m.project(
            MixedTensor(("P", "C"), {(unit, self.lam_index): ONE}))

    def plambda_coords(self, comp, m_class):
        """Coordinates of a script-M class in the free module P.lambda."""
        monos = self.p_monos(comp.key)
        cols = self._iso_cache.get(comp.key)
        if cols is None:
            cols = [
                comp.quot_m.project(
                    MixedTensor(("P", "C"), {(u, self.lam_index): ONE}))
                for u in monos
            ]
            self._iso_cache[comp.key] = cols
        keys = sorted({k for c in cols for k in c} | set(m_class), key=repr)
        rows = [[c.get(k, ZERO) for c in cols] for k in keys]
        rhs = [m_class.get(k, ZERO) for k in keys]
        sol = solve_linear(rows, rhs).solution
        return list(zip(monos, sol))

    def check_plambda_iso(self, comp):
        """u -> class(u (x) lambda) is bijective onto the component."""
        res = CheckResult()
        monos = self.p_monos(comp.key)
        cols = [comp.quot_m.project(
            MixedTensor(("P", "C"), {(u, self.lam_index): ONE})) for u in monos]
        keys = sorted({k for c in cols for k in c}, key=repr)
        rows = [[c.get(k, ZERO) for c in cols] for k in keys]
        rank = solve_linear(rows).rank if rows else 0
        res.expect(rank == len(monos) and rank == len(comp.m_basis),
                   f"P (x) Lambda iso at {comp.key}",
                   f"rank {rank} of {len(monos)} monomials",
                   f"dim script-M = {len(comp.m_basis)}")
        return res

    def lambda_generator_count(self, comp):
        """Classes of 1 (x) ker-eps indices not already in P.(lower Lambda)."""
        monos = self.p_monos(comp.key)
        cols = [comp.quot_m.project(
            MixedTensor(("P", "C"), {(u, self.lam_index): ONE})) for u in monos]
        span = RowSpan(cols)
        unit = next(iter(self.bundle.pres.one().terms))
        fresh = 0
        for (m, idx) in comp.pc_keys:
            if m != unit:
                continue
            v = comp.quot_m.project(MixedTensor(("P", "C"), {(m, idx): ONE}))
            if v and not span.contains(v):
                fresh += 1
        return fresh


class QuotientConnection:
    """Pi on Omega^1(P) induced by omega(lambda), with component data."""

    def __init__(self, calc, omega_rep, alpha=None, tau_fn=None):
        self.calc = calc
        self.omega_rep = omega_rep      # universal representative of omega(lambda)
        self.alpha = alpha
        self.tau_fn = tau_fn

    def pi_class(self, form_dict):
        """Pi of a quotient class, as a canonical quotient representative.

        Mixed-degree inputs (such as dy + alpha dx) are split into
        graded pieces; each piece goes through its own component.
        """
        if not form_dict:
            return {}
        calc = self.calc
        bundle = calc.bundle
        out = MixedTensor(("P", "P"))
        for key, piece in split_components(calc, form_dict).items():
            comp = calc.components[key]
            m_class = comp.quot_m.project(
                bundle.chi_tensor(MixedTensor(("P", "P"), piece)))
            for u, coeff in calc.plambda_coords(comp, m_class):
                if coeff.is_zero():
                    continue
                out = out + form_mul(
                    MixedTensor(("P",), {(u,): ONE}), self.omega_rep,
                    bundle.pres).scale(coeff)
        return project_mixed(calc, out.terms)

    def omega_class(self):
        return project_mixed(self.calc, self.omega_rep.terms)


def check_quotient_connection(qc, c_indices, lin_samples=()):
    """Projection, kernel, linearity, equivariance and Conditions 1-2."""
    calc = qc.calc
    bundle = calc.bundle
    pres = bundle.pres
    res = CheckResult()
    # Condition 1: chi_N(omega(lambda)) = lambda, computed piecewise
    got = {}
    for key, piece in split_components(calc, qc.omega_class()).items():
        comp = calc.components[key]
        for k, c in chi_n_class(bundle, comp, piece).items():
            got[k] = got.get(k, ZERO) + c
    got = {k: c for k, c in got.items() if not c.is_zero()}
    lam_comp = _pc_component(calc, calc.lam_index)
    want = calc.lam_class(lam_comp)
    res.expect(got == want, "Condition 1: chi_N(omega(lambda))",
               str({k: str(v) for k, v in got.items()}),
               str({k: str(v) for k, v in want.items()}))
    for comp in calc.components.values():
        for w in comp.omega1_q:
            p1 = qc.pi_class(w)
            p2 = qc.pi_class(p1) if p1 else {}
            if p1 != p2:
                res.record(f"quotient Pi^2 at {comp.key}", str_class(p2, pres),
                           str_class(p1, pres))
        for h in comp.horiz_q:
            ph = qc.pi_class(h)
            if ph:
                res.record(f"quotient Pi on horizontal at {comp.key}",
                           str_class(ph, pres), "0")
        images = [qc.pi_class(w) for w in comp.omega1_q]
        keys = sorted({k for im in images for k in im}, key=repr)
        rows = [[im.get(k, ZERO) for im in images] for k in keys]
        rank = solve_linear(rows).rank if rows else 0
        res.expect(len(comp.omega1_q) - rank == len(comp.horiz_q),
                   f"quotient ker Pi dims at {comp.key}",
                   str(len(comp.omega1_q) - rank), str(len(comp.horiz_q)))
    for u, form_dict in lin_samples:
        lhs = qc.pi_class(
            form_mul(from_elem(u), MixedTensor(("P", "P"), form_dict), pres).terms)
        rhs_rep = MixedTensor(("P", "P"), qc.pi_class(form_dict))
        rhs = project_mixed(calc, form_mul(from_elem(u), rhs_rep, pres).terms)
        if lhs != rhs:
            res.record(f"quotient left-linearity at {u}",
                       str_class(lhs, pres), str_class(rhs, pres))
    # equivariance of the induced <-psi^2_N
    for c in c_indices:
        for comp in calc.components.values():
            for w in comp.omega1_q:
                pw = qc.pi_class(w)
                lhs = _sweep_and_project(calc, c, pw)
                img = _sweep_and_project(calc, c, w)
                rhs = {}
                for idx, part in img.items():
                    pp = qc.pi_class(part)
                    for k, coeff in pp.items():
                        s = rhs.setdefault(idx, {})
                        v = s.get(k, ZERO) + coeff
                        if v.is_zero():
                            s.pop(k, None)
                        else:
                            s[k] = v
                rhs = {i: p for i, p in rhs.items() if p}
                if lhs != rhs:
                    res.record(
                        f"quotient equivariance at (c[{c}], {comp.key})",
                        str(sorted(lhs)), str(sorted(rhs)))
    # Condition 2 in the quotient
    for b in c_indices:
        lhs = _sweep_and_project(calc, b, qc.omega_class())
        rhs = _quotient_cond2_rhs(qc, b)
        if lhs != rhs:
            res.record(f"quotient Condition 2 at c[{b}]",
                       str(sorted(lhs)), str(sorted(rhs)))
    return res


def split_components(calc, form_dict):
    """Split a raw P (x) P term dict into graded pieces by component key."""
    out = {}
    for k, c in form_dict.items():
        if c.is_zero():
            continue
        key = calc.component_of({k: c})
        out.setdefault(key, {})[k] = c
    return out


def project_mixed(calc, form_dict):
    """Canonical representative modulo N of a possibly mixed-degree form."""
    out = {}
    for key, piece in split_components(calc, form_dict).items():
        comp = calc.components.get(key)
        if comp is None:
            raise KeyError(f"component {key} outside the built window")
        for k, c in comp.quot_n.project(piece).items():
            s = out.get(k, ZERO) + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
    return out


def _sweep_and_project(calc, c, form_dict):
    """<-psi^2_N(c (x) class): sweep a representative, project per index."""
    bundle = calc.bundle
    t = MixedTensor(("C",), {(c,): ONE}).tensor(MixedTensor(("P", "P"), form_dict))
    img = bundle.em.sweep_right(t, 0)
    by_idx = {}
    for k, coeff in img.terms.items():
        by_idx.setdefault(k[-1], {})[k[:-1]] = coeff
    out = {}
    for idx, part in by_idx.items():
        part = {k: v for k, v in part.items() if not v.is_zero()}
        if not part:
            continue
        proj = project_mixed(calc, part)
        if proj:
            out[idx] = proj
    return out


def _quotient_cond2_rhs(qc, b, tau_fn=None):
    """c~<1>_a c~<2>_{bd} omega(pi_M(1 (x) e^d)) (x) b^{ab} in the quotient."""
    calc = qc.calc
    bundle = calc.bundle
    pres = bundle.pres
    coalg = bundle.coalg
    tau = tau_fn or qc.tau_fn
    rep = tau(calc.lam_index)
    t = MixedTensor(("C",), {(b,): ONE}).tensor(rep)
    t = bundle.em.sweep_right(t, 0)                       # ("P","P","C")
    t = t.apply_slot(1, lambda m: bundle.coaction_mono(m), ("P", "C"))

    def omega_of_index(idx):
        """omega(pi_M(1 (x) idx)) via the P (x) Lambda coordinates."""
        eps = coalg.counit(idx)
        cel = CoalgElement({idx: ONE})
        if not eps.is_zero():
            cel = cel.add(CoalgElement({coalg.e: -eps}))
        out = MixedTensor(("P", "P"))
        unit = next(iter(pres.one().terms))
        for i, cc in cel.items():
            comp = _pc_component(calc, i)
            if comp is None:
                raise KeyError(f"no component for index {i}")
            m_class = comp.quot_m.project(
                MixedTensor(("P", "C"), {(unit, i): ONE}))
            for u, coeff in calc.plambda_coords(comp, m_class):
                if coeff.is_zero():
                    continue
                out = out + form_mul(MixedTensor(("P",), {(u,): ONE}),
                                     qc.omega_rep, pres).scale(coeff * cc)
        return out

    acc = MixedTensor(("P", "P", "C"))
    for k, coeff in t.terms.items():
        m1, m2, edelta, btail = k
        w = omega_of_index(edelta)
        if w.is_zero():
            continue
        prod = form_mul(
            form_mul(MixedTensor(("P",), {(m1,): ONE}),
                     MixedTensor(("P",), {(m2,): ONE}), pres), w, pres)
        for pk, pc in prod.terms.items():
            acc = acc + MixedTensor(("P", "P", "C"), {pk + (btail,): coeff * pc})
    by_idx = {}
    for k, coeff in acc.terms.items():
        by_idx.setdefault(k[-1], {})[k[:-1]] = coeff
    out = {}
    for idx, part in by_idx.items():
        part = {k: v for k, v in part.items() if not v.is_zero()}
        if not part:
            continue
        proj = project_mixed(calc, part)
        if proj:
            out[idx] = proj
    return out


def _pc_component(calc, idx):
    """The component whose P (x) ker-eps part contains 1 (x) idx."""
    unit = next(iter(calc.bundle.pres.one().terms))
    for comp in calc.components.values():
        if (unit, idx) in comp.pc_keys:
            return comp
    return None


def str_class(d, pres):
    return tensor_str(MixedTensor(("P", "P"), d), pres)
