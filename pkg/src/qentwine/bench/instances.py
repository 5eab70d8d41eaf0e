"""Instance catalog: quantum cylinder, GL_q(2), Hopf self-bundle, and the
two quantum-plane differential calculi, with their component wiring.

Each builder returns fully wired data plus recommended windows.  The
GL_q(2) coalgebra convention (binomial base and index shift) is
resolved exhaustively at build time; deliberately broken variants are
available through ``mutate`` for testing the verification suites
themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..coalg import CoalgebraSpec, CoalgElement, ConvMap
from ..calculus import d_mono
from ..entwine import (
    BundleData,
    ChiComponent,
    EntwiningMap,
    HopfData,
    embeddable_entwining,
    hopf_entwining,
)
from ..errors import NoConsistentConvention
from ..coalg import check_coalgebra
from ..entwine import check_entwining
from ..gauge import PsiCMap, TrivialBundleData, make_trivial
from ..presalg import AlgebraElement, Character, Generator, Presentation
from ..scalars import ONE, Q, ZERO, Scalar, q_binom
from ..tensors import MixedTensor, form_mul, from_elem

MUTATIONS = (
    "drop-q-power",
    "wrong-binomial-base",
    "broken-phi",
    "gamma-not-in-m",
    "beta-not-classified",
    "identity-pi",
)


# ---------------------------------------------------------------------------
# quantum cylinder
# ---------------------------------------------------------------------------

def cylinder_presentation(budget=400_000):
    gens = [Generator("x", (1, 0), invertible=True), Generator("y", (0, 1))]
    rules = [(["y", "x"], lambda p: p.monomial_elem({0: 1, 1: 1}, Q))]
    return Presentation(("xdeg", "ydeg"), gens, rules, step_budget=budget,
                        name="cylinder")


def cylinder_coalgebra(base=None):
    b = Q if base is None else base

    def coproduct(n):
        out = {}
        for k in range(n + 1):
            out[(k, n - k)] = q_binom(n, k, b)
        return MixedTensor(("C", "C"), out)

    def counit(n):
        return ONE if n == 0 else ZERO

    return CoalgebraSpec("cylinder.C", coproduct, counit, e=0, rank=lambda n: n)


def cylinder_psi(coalg, pres, drop_q_power=False):
    def fn(l, mono):
        m, n = mono
        out = {}
        for k in range(n + 1):
            expo = l * k if drop_q_power else l * (k + m)
            out[((m, k), n + l - k)] = q_binom(n, k) * Q ** expo
        return MixedTensor(("P", "C"), out)

    return EntwiningMap(coalg, pres, fn, label="psi.cylinder")


def cylinder_psic(coalg):
    def fn(m, n):
        out = {}
        for k in range(n + 1):
            out[(k, m + n - k)] = q_binom(n, k) * Q ** (k * m)
        return MixedTensor(("C", "C"), out)

    return PsiCMap(coalg, fn, label="psiC.cylinder")


def cylinder_hopf(pres):
    xi, yi = pres.index["x"], pres.index["y"]
    unit = (0, 0)
    x, xinv, y = (1, 0), (-1, 0), (0, 1)
    coproducts = {
        (xi, 1): MixedTensor(("P", "P"), {(x, x): ONE}),
        (xi, -1): MixedTensor(("P", "P"), {(xinv, xinv): ONE}),
        (yi, 1): MixedTensor(("P", "P"), {(unit, y): ONE, (y, x): ONE}),
    }
    counit = Character({"x": ONE, "x^-1": ONE, "y": ZERO})
    antipodes = {
        (xi, 1): AlgebraElement(pres, {xinv: ONE}),
        (xi, -1): AlgebraElement(pres, {x: ONE}),
        (yi, 1): AlgebraElement(pres, {(-1, 1): -ONE}),   # S(y) = -y x^-1
    }
    return HopfData(pres, coproducts, counit, antipodes)


def cylinder_pi(elem):
    """The coalgebra surjection x^m y^n -> c_n (x = 1 modulo the right ideal)."""
    out = CoalgElement()
    for (m, n), c in elem.terms.items():
        out = out.add(CoalgElement({n: c}))
    return out


def cylinder_phi(coalg, pres, broken=False):
    def fn(n):
        coeff = Scalar.from_int(2) if (broken and n == 1) else ONE
        return MixedTensor(("P",), {((0, n),): coeff})

    return ConvMap(coalg, pres, fn, degree=1, label="Phi.cylinder")


@dataclass
class Cylinder:
    Dx: int = 4
    Dy: int = 8
    Dc: int = 10
    mutate: str = None

    def __post_init__(self):
        self.pres = cylinder_presentation()
        base = Q * Q if self.mutate == "wrong-binomial-base" else None
        self.coalg = cylinder_coalgebra(base)
        self.em = cylinder_psi(self.coalg, self.pres,
                               drop_q_power=(self.mutate == "drop-q-power"))
        self.bundle = BundleData(self.em, name="cylinder")
        self.psic = cylinder_psic(self.coalg)
        self.phi = cylinder_phi(self.coalg, self.pres,
                                broken=(self.mutate == "broken-phi"))
        self.hopf = cylinder_hopf(self.pres)
        self._chi_cache = {}

    def trivial(self, indices=None):
        idx = list(range(self.Dc + 1)) if indices is None else indices
        return make_trivial(self.bundle, self.psic, self.phi, idx)

    # -- enumeration helpers ------------------------------------------
    def monos(self, xb=None, yb=None):
        xb = self.Dx if xb is None else xb
        yb = self.Dy if yb is None else yb
        return [(m, n) for m in range(-xb, xb + 1) for n in range(yb + 1)]

    def m_monos(self, xb=None):
        xb = self.Dx if xb is None else xb
        return [(m, 0) for m in range(-xb, xb + 1)]

    def mono(self, m, n):
        return (m, n)

    def elem(self, m, n, coeff=ONE):
        return AlgebraElement(self.pres, {(m, n): coeff})

    def pp_pairs(self, X, W, xb=None):
        """Component spanning pairs, x-free right factors first so that
        the canonical complement is {x^X y^n1 (x) y^n2}."""
        xb = self.Dx if xb is None else xb
        out = []
        for n1 in range(W + 1):
            n2 = W - n1
            for m1 in range(max(-xb, X - xb), min(xb, X + xb) + 1):
                m2 = X - m1
                out.append(((m1, n1), (m2, n2)))
        out.sort(key=lambda p: (p[0][1], abs(p[1][0]), p[1][0] < 0, p[0][0]))
        return out

    def pc_keys(self, X, W, ker_eps=False):
        lo = 1 if ker_eps else 0
        return [((X, W - j), j) for j in range(W, lo - 1, -1)]

    def rel_triples(self, X, W, xb=None):
        xb = self.Dx if xb is None else xb
        out = []
        for n1 in range(W + 1):
            n2 = W - n1
            for a in range(-2 * xb, 2 * xb + 1):
                if a == 0:
                    continue
                for m1 in range(-xb, xb + 1):
                    m2 = X - m1 - a
                    if abs(m1 + a) <= xb and abs(m2) <= xb and abs(a + m2) <= xb:
                        out.append(((m1, n1), (a, 0), (m2, n2)))
        return out

    def chi_component(self, X, W, order=None):
        key = (X, W, order)
        comp = self._chi_cache.get(key)
        if comp is None:
            comp = ChiComponent(
                self.bundle, self.pp_pairs(X, W), self.rel_triples(X, W),
                self.pc_keys(X, W), complement_order=order)
            self._chi_cache[key] = comp
        return comp

    def tau(self, idx):
        return self.chi_component(0, idx).tau(idx)

    def tau_permuted(self, idx):
        pairs = self.pp_pairs(0, idx)
        order = tuple(reversed(range(len(pairs))))
        return self.chi_component(0, idx, order=order).tau(idx)

    def component_of(self, form_dict):
        keys = set()
        for (m1, n1), (m2, n2) in form_dict:
            keys.add((m1 + m2, n1 + n2))
        if len(keys) != 1:
            raise ValueError(f"mixed component keys {sorted(keys)}")
        return keys.pop()

    def ker_eps_basis(self, nmax):
        return [CoalgElement({n: ONE}) for n in range(1, nmax + 1)]


def build_cylinder(Dx=4, Dy=8, Dc=10, mutate=None):
    return Cylinder(Dx, Dy, Dc, mutate=mutate)


def cylinder_embeddable_psi(cyl):
    """The same psi derived from the Hopf projection and section i(c_n) = y^n."""

    def section(idx):
        return AlgebraElement(cyl.pres, {(0, idx): ONE})

    return embeddable_entwining(cyl.hopf, cyl.coalg, cylinder_pi, section,
                                label="psi.cylinder.embed")


def cylinder_embeddable_psic(cyl):
    """psi^C(b (x) c) = pi(v(1)) (x) pi(u v(2)) with the canonical sections."""

    def fn(b, c):
        u = AlgebraElement(cyl.pres, {(0, b): ONE})
        dv = cyl.hopf.coproduct_mono((0, c))
        out = MixedTensor(("C", "C"))
        for (v1, v2), coeff in dv.terms.items():
            p1 = cylinder_pi(AlgebraElement(cyl.pres, {v1: ONE}))
            p2 = cylinder_pi(u * AlgebraElement(cyl.pres, {v2: ONE}))
            for i1, c1 in p1.items():
                for i2, c2 in p2.items():
                    out = out + MixedTensor(("C", "C"), {(i1, i2): coeff * c1 * c2})
        return out

    return PsiCMap(cyl.coalg, fn, label="psiC.cylinder.embed")


def cylinder_beta_from_table(cyl, table):
    """beta(c^n) = sum_i Gamma_{n,i} x^i d(x^(n-i)) from a coefficient table."""

    def fn(idx):
        out = MixedTensor(("P", "P"))
        for (n, i), coeff in table.items():
            if n != idx or coeff.is_zero():
                continue
            out = out + form_mul(
                MixedTensor(("P",), {((i, 0),): ONE}),
                d_mono(cyl.pres, (n - i, 0)), cyl.pres).scale(coeff)
        return out

    return ConvMap(cyl.coalg, cyl.pres, fn, degree=2, label="beta.table")


def cylinder_omega_closed(cyl, n, table, i_range):
    """The classified cylinder connection form, written as the double sum.

    omega(c^n) = sum_{k<n} (-1)^k [n k] q^(k(k-1)/2) y^k d(y^(n-k))
      + sum_i sum_m sum_k (-1)^k q^(k(k-1)/2 + k i) [n m][m k]
        Gamma_{m-k,i} x^i y^k d(x^(m-k-i)) y^(n-m)
    """
    pres = cyl.pres
    out = MixedTensor(("P", "P"))
    for k in range(n):
        sign = ONE if k % 2 == 0 else -ONE
        coeff = sign * q_binom(n, k) * Q ** (k * (k - 1) // 2)
        out = out + form_mul(
            MixedTensor(("P",), {((0, k),): ONE}),
            d_mono(pres, (0, n - k)), pres).scale(coeff)
    for i in i_range:
        for m in range(n + 1):
            for k in range(m + 1):
                g = table.get((m - k, i), ZERO)
                if g.is_zero():
                    continue
                sign = ONE if k % 2 == 0 else -ONE
                coeff = (sign * Q ** (k * (k - 1) // 2 + k * i)
                         * q_binom(n, m) * q_binom(m, k) * g)
                t = form_mul(
                    MixedTensor(("P",), {((i, k),): ONE}),
                    d_mono(pres, (m - k - i, 0)), pres)
                t = form_mul(t, MixedTensor(("P",), {((0, n - m),): ONE}), pres)
                out = out + t.scale(coeff)
    return out


# ---------------------------------------------------------------------------
# GL_q(2)
# ---------------------------------------------------------------------------

GLQ2_ORDER = ("a", "g", "b", "d", "D")


def glq2_presentation(budget=600_000):
    qi = ONE / Q
    gens = [
        Generator("a", (1, 0)), Generator("g", (1, 0)), Generator("b", (1, 0)),
        Generator("d", (1, 0)), Generator("D", (0, 1)),
    ]

    def mono(p, spec, coeff=ONE):
        return p.monomial_elem({p.index[nm]: e for nm, e in spec}, coeff)

    rules = [
        (["g", "a"], lambda p: mono(p, [("a", 1), ("g", 1)], qi)),
        (["b", "a"], lambda p: mono(p, [("a", 1), ("b", 1)], qi)),
        (["b", "g"], lambda p: mono(p, [("g", 1), ("b", 1)], ONE)),
        (["d", "a"], lambda p: mono(p, [("a", 1), ("d", 1)], ONE)
                      + mono(p, [("g", 1), ("b", 1)], -(Q - qi))),
        (["d", "b"], lambda p: mono(p, [("b", 1), ("d", 1)], qi)),
        (["d", "g"], lambda p: mono(p, [("g", 1), ("d", 1)], qi)),
        (["D", "a"], lambda p: mono(p, [("a", 1), ("D", 1)], ONE)),
        (["D", "g"], lambda p: mono(p, [("g", 1), ("D", 1)], ONE)),
        (["D", "b"], lambda p: mono(p, [("b", 1), ("D", 1)], ONE)),
        (["D", "d"], lambda p: mono(p, [("d", 1), ("D", 1)], ONE)),
    ]
    return Presentation(("mat", "det"), gens, rules, step_budget=budget,
                        name="glq2")


def glq2_coalgebra(base, shift_right=True):
    def coproduct(idx):
        m, n = idx
        out = {}
        for k in range(m + 1):
            coeff = Q ** (k * (m - k)) * q_binom(m, k, base)
            if shift_right:
                key = ((k, n), (m - k, n + k))
            else:
                key = ((k, n + m - k), (m - k, n))
            out[key] = out.get(key, ZERO) + coeff
        return MixedTensor(("C", "C"), out)

    def counit(idx):
        return ONE if idx[0] == 0 else ZERO

    return CoalgebraSpec("glq2.C", coproduct, counit, e=(0, 0),
                         rank=lambda idx: idx[0])


def glq2_psi(coalg, pres):
    qm2 = Q ** -2

    def fn(idx, mono):
        i, j = idx
        k, l, m, n, r = mono
        out = {}
        for s in range(m + 1):
            for t in range(n + 1):
                coeff = (q_binom(m, s, qm2) * q_binom(n, t, qm2)
                         * Q ** ((m - s) * (s + t - l) + (n - t) * t
                                 - i * (k + l - t - s)))
                key = ((k + m - s, l + n - t, s, t, r),
                       (i + m + n - s - t, j + r + t + s))
                out[key] = out.get(key, ZERO) + coeff
        return MixedTensor(("P", "C"), out)

    return EntwiningMap(coalg, pres, fn, label="psi.glq2")


GLQ2_CONVENTIONS = {
    "base=q^2,shift=right": (lambda: Q * Q, True),
    "base=q^2,shift=left": (lambda: Q * Q, False),
    "base=q^-2,shift=right": (lambda: Q ** -2, True),
    "base=q^-2,shift=left": (lambda: Q ** -2, False),
}


@dataclass
class Glq2:
    D: int = 2
    convention: str = ""
    conventions_tried: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pres = glq2_presentation()
        passing = []
        for name, (base_fn, shift) in GLQ2_CONVENTIONS.items():
            coalg = glq2_coalgebra(base_fn(), shift_right=shift)
            em = glq2_psi(coalg, self.pres)
            c_small = [(m, n) for m in range(3) for n in range(-2, 3)]
            ok_coalg = check_coalgebra(coalg, c_small).ok
            monos = self.monomials(1, 1)
            idx_small = [(m, n) for m in range(2) for n in range(-1, 2)]
            ok_ent = check_entwining(em, idx_small, monos).ok if ok_coalg else False
            self.conventions_tried[name] = {
                "coalgebra": "pass" if ok_coalg else "fail",
                "entwining": "pass" if ok_ent else ("skipped" if not ok_coalg else "fail"),
            }
            if ok_coalg and ok_ent:
                passing.append((name, coalg, em))
        if len(passing) != 1:
            raise NoConsistentConvention(
                f"{len(passing)} conventions pass: {[p[0] for p in passing]}; "
                f"tried {self.conventions_tried}")
        self.convention, self.coalg, self.em = passing[0]
        self.bundle = BundleData(self.em, name="glq2")

    def monomials(self, mat_deg, det_deg):
        out = []
        for k in range(mat_deg + 1):
            for l in range(mat_deg + 1 - k):
                for m in range(mat_deg + 1 - k - l):
                    for n in range(mat_deg + 1 - k - l - m):
                        for r in range(det_deg + 1):
                            out.append((k, l, m, n, r))
        return sorted(out)

    def monomials_of_degree(self, t, r=0):
        return [mono for mono in self.monomials(t, r)
                if sum(mono[:4]) == t and mono[4] == r]

    def elem(self, spec, coeff=ONE):
        return self.pres.monomial_elem(
            {self.pres.index[nm]: e for nm, e in spec}, coeff)


def build_glq2(D=2):
    return Glq2(D)


# ---------------------------------------------------------------------------
# Hopf self-bundle P = C = H = k[x, x^-1]
# ---------------------------------------------------------------------------

def laurent_presentation(name="laurent"):
    return Presentation(("deg",), [Generator("x", (1,), invertible=True)], [],
                        name=name)


def selfbundle_coalgebra():
    def coproduct(a):
        return MixedTensor(("C", "C"), {(a, a): ONE})

    def counit(a):
        return ONE

    return CoalgebraSpec("laurent.H", coproduct, counit, e=0,
                         rank=lambda a: abs(a))


@dataclass
class SelfBundle:
    Dx: int = 3

    def __post_init__(self):
        self.pres = laurent_presentation()
        self.coalg = selfbundle_coalgebra()

        def coaction(mono):
            return MixedTensor(("P", "C"), {(mono, mono[0]): ONE})

        def index_mul(a, b):
            return CoalgElement({a + b: ONE})

        self.em = hopf_entwining(self.coalg, self.pres, coaction, index_mul,
                                 label="psi.selfbundle")
        self.bundle = BundleData(self.em, name="selfbundle")
        self.kappa = Character({"x": ONE, "x^-1": ONE})

        def phi_fn(a):
            return MixedTensor(("P",), {((a,),): ONE})

        def phi_inv_fn(a):
            return MixedTensor(("P",), {((-a,),): ONE})

        self.phi = ConvMap(self.coalg, self.pres, phi_fn, degree=1, label="Phi.id")
        self.phi_inv = ConvMap(self.coalg, self.pres, phi_inv_fn, degree=1,
                               label="Phi.id^-1")

        def psic_fn(b, c):
            return MixedTensor(("C", "C"), {(c, b + c): ONE})

        self.psic = PsiCMap(self.coalg, psic_fn, label="psiC.selfbundle")

    def trivial(self):
        return TrivialBundleData(self.bundle, self.psic, self.phi, self.phi_inv)

    def monos(self, b=None):
        b = self.Dx if b is None else b
        return [(a,) for a in range(-b, b + 1)]

    def indices(self, b=None):
        b = self.Dx if b is None else b
        return list(range(-b, b + 1))

    def ker_eps_basis(self, b=None):
        b = self.Dx if b is None else b
        return [CoalgElement({a: ONE, 0: -ONE}) for a in range(-b, b + 1) if a]

    def tau(self, celem):
        """tau via Phi^-1(c(1)) (x) Phi(c(2)) = x^-a (x) x^a (- 1 (x) 1)."""
        if not isinstance(celem, CoalgElement):
            celem = CoalgElement({celem: ONE})
        out = MixedTensor(("P", "P"))
        for a, c in celem.items():
            out = out + MixedTensor(("P", "P"), {((-a,), (a,)): c})
        return out


def build_selfbundle(Dx=3):
    return SelfBundle(Dx)


# ---------------------------------------------------------------------------
# quantum-plane differential calculi on the cylinder bundle
# ---------------------------------------------------------------------------

def qplane_generators(cyl, which, s=None):
    """The two covariant N's, normalized into ker(multiplication).

    The stated generator lists fail ker-multiplication membership on the
    x (x) x and y (x) y generators; one coefficient of each (on x^2 (x) 1
    and 1 (x) y^2 respectively) is adjusted to the unique value that
    restores membership, and the quotient relations are then derived
    computationally.
    """
    if s is None:
        s = Scalar.var("s")
    one = ONE

    def t(pairs):
        return MixedTensor(("P", "P"),
                           {(p1, p2): c for (p1, p2, c) in pairs})

    if which == 1:
        g1 = t([((1, 0), (1, 0), one + s), ((2, 0), (0, 0), -s),
                ((0, 0), (2, 0), -one)])
        g2 = t([((0, 1), (1, 0), one), ((1, 1), (0, 0), -Q),
                ((0, 0), (1, 1), -Q), ((1, 0), (0, 1), Q)])
    elif which == 2:
        g1 = t([((1, 0), (1, 0), one + Q), ((2, 0), (0, 0), -Q),
                ((0, 0), (2, 0), -one)])
        g2 = t([((0, 1), (1, 0), one), ((1, 1), (0, 0), -one),
                ((0, 0), (1, 1), -Q), ((1, 0), (0, 1), one)])
    else:
        raise ValueError("which must be 1 or 2")
    g3 = t([((0, 1), (0, 1), one + Q), ((0, 2), (0, 0), -one),
            ((0, 0), (0, 2), -Q)])
    return [g1, g2, g3]


def qplane_stated_generators(which, cyl, s=None):
    """The generator lists exactly as stated, before normalization."""
    if s is None:
        s = Scalar.var("s")

    def t(pairs):
        return MixedTensor(("P", "P"),
                           {(p1, p2): c for (p1, p2, c) in pairs})

    if which == 1:
        g1 = t([((1, 0), (1, 0), ONE + s), ((2, 0), (0, 0), -ONE),
                ((0, 0), (2, 0), -ONE)])
    else:
        g1 = t([((1, 0), (1, 0), ONE + Q), ((2, 0), (0, 0), -ONE),
                ((0, 0), (2, 0), -ONE)])
    g3 = t([((0, 1), (0, 1), ONE + Q), ((0, 2), (0, 0), -ONE),
            ((0, 0), (0, 2), -ONE)])
    return [g1, g3]
