"""Multivariate integer-polynomial algorithms on top of the kernel.

Polynomials are the kernel's ``{monomial: int}`` dicts.  The monomial
order is degree-lexicographic with lower variable ids ranking higher;
``poly_gcd`` is a primitive PRS reduced recursively to the univariate
case, which is all the canonicalization of rational functions needs.
"""

from math import gcd as _int_gcd

from ._kernel import mono_mul, poly_add, poly_mul, poly_neg, poly_scale

POLY_ZERO: dict = {}
POLY_ONE = {(): 1}


def poly_const(c):
    return {(): c} if c else {}


def poly_var(vid, exp=1):
    if exp < 0:
        raise ValueError("polynomial exponents must be nonnegative")
    if exp == 0:
        return dict(POLY_ONE)
    return {((vid, exp),): 1}


def mono_key(m):
    return (sum(e for _, e in m), tuple((-v, e) for v, e in m))


def mono_divides(m1, m2):
    """True when m1 | m2."""
    d = dict(m2)
    for v, e in m1:
        if d.get(v, 0) < e:
            return False
    return True


def mono_div(m2, m1):
    """m2 / m1, assuming divisibility."""
    d = dict(m2)
    for v, e in m1:
        r = d[v] - e
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def poly_sub(p, q):
    return poly_add(p, poly_neg(q))


def leading(p):
    m = max(p, key=mono_key)
    return m, p[m]


def poly_pow(p, n):
    if n < 0:
        raise ValueError("negative power")
    out = dict(POLY_ONE)
    base = p
    while n:
        if n & 1:
            out = poly_mul(out, base)
        base = poly_mul(base, base)
        n >>= 1
    return out


def int_content(p):
    g = 0
    for c in p.values():
        g = _int_gcd(g, abs(c))
        if g == 1:
            return 1
    return g


def vars_of(p):
    vs = set()
    for m in p:
        for v, _ in m:
            vs.add(v)
    return vs


def deg_in(p, vid):
    d = 0
    for m in p:
        for v, e in m:
            if v == vid and e > d:
                d = e
    return d


def to_univar(p, vid):
    """Split off ``vid``: dict {exp_of_vid: coefficient polynomial}."""
    out = {}
    for m, c in p.items():
        e = 0
        rest = []
        for v, ex in m:
            if v == vid:
                e = ex
            else:
                rest.append((v, ex))
        coeff = out.setdefault(e, {})
        rm = tuple(rest)
        s = coeff.get(rm, 0) + c
        if s:
            coeff[rm] = s
        else:
            del coeff[rm]
    return {e: c for e, c in out.items() if c}


def from_univar(u, vid):
    out = {}
    for e, coeff in u.items():
        xe = poly_var(vid, e) if e else dict(POLY_ONE)
        out = poly_add(out, poly_mul(xe, coeff))
    return out


def poly_divexact(f, g):
    """Exact division f / g; raises ValueError when not divisible."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return {}
    mg, cg = leading(g)
    q = {}
    r = dict(f)
    while r:
        mr, cr = leading(r)
        if not mono_divides(mg, mr) or cr % cg:
            raise ValueError("inexact polynomial division")
        m = mono_div(mr, mg)
        c = cr // cg
        q[m] = q.get(m, 0) + c
        r = poly_sub(r, poly_mul({m: c}, g))
    return q


def _uni_deg(u):
    return max(u) if u else -1


def _uni_lc(u):
    return u[max(u)]


def _uni_scalefree_rem(f, g):
    """Pseudo-remainder of univariate polys with polynomial coefficients."""
    df, dg = _uni_deg(f), _uni_deg(g)
    lg = _uni_lc(g)
    r = dict(f)
    while r and _uni_deg(r) >= dg:
        dr = _uni_deg(r)
        lr = _uni_lc(r)
        new = {}
        for e, c in r.items():
            if e == dr:
                continue
            new[e] = poly_mul(c, lg)
        for e, c in g.items():
            if e == dg:
                continue
            sh = e + dr - dg
            term = poly_mul(c, lr)
            if sh in new:
                new[sh] = poly_sub(new[sh], term)
                if not new[sh]:
                    del new[sh]
            else:
                new[sh] = poly_neg(term)
        r = {e: c for e, c in new.items() if c}
    return r


def _uni_content(u):
    g = {}
    for c in u.values():
        g = poly_gcd(g, c)
        if g == POLY_ONE:
            return g
    return g


def _normalize_sign(p):
    if not p:
        return p
    _, c = leading(p)
    return poly_neg(p) if c < 0 else dict(p)


def poly_gcd(p, q):
    """GCD over Z[vars], positive leading coefficient, content included."""
    if not p:
        return _normalize_sign(q)
    if not q:
        return _normalize_sign(p)
    if p == q:
        return _normalize_sign(p)
    vs = vars_of(p) | vars_of(q)
    if not vs:
        return poly_const(_int_gcd(p[()], q[()]) if () in p and () in q else 1)
    cint = _int_gcd(int_content(p), int_content(q))
    vid = min(vs)
    f = to_univar(p, vid)
    g = to_univar(q, vid)
    cf = _uni_content(f)
    cg = _uni_content(g)
    cont = poly_gcd(cf, cg)
    f = {e: poly_divexact(c, cf) for e, c in f.items()}
    g = {e: poly_divexact(c, cg) for e, c in g.items()}
    if _uni_deg(f) < _uni_deg(g):
        f, g = g, f
    # primitive PRS in the main variable
    while True:
        r = _uni_scalefree_rem(f, g)
        if not r:
            break
        if _uni_deg(r) == 0:
            g = {0: dict(POLY_ONE)}
            break
        cr = _uni_content(r)
        r = {e: poly_divexact(c, cr) for e, c in r.items()}
        f, g = g, r
    h = poly_mul(from_univar(g, vid), cont)
    ch = int_content(h)
    if ch > 1:
        h = {m: c // ch for m, c in h.items()}
    if cint > 1:
        h = poly_scale(h, cint)
    return _normalize_sign(h)


__all__ = [
    "POLY_ZERO", "POLY_ONE", "poly_const", "poly_var", "mono_key",
    "mono_divides", "mono_div", "mono_mul", "poly_add", "poly_sub",
    "poly_neg", "poly_mul", "poly_scale", "poly_pow", "leading",
    "int_content", "vars_of", "deg_in", "to_univar", "from_univar",
    "poly_divexact", "poly_gcd",
]
