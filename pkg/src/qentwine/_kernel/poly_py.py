"""Pure-Python polynomial kernel.

A monomial is a tuple of ``(var_id, exp)`` pairs, sorted by ``var_id``,
with every ``exp > 0``; the empty tuple is the constant monomial.  A
polynomial is a dict ``{monomial: int}`` with no zero coefficients.
These inner loops dominate the runtime of every verification suite; the
Cython twin in ``_poly_cy.pyx`` implements the same four functions.
"""

BACKEND = "python"


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def poly_add(p, q):
    if not p:
        return dict(q)
    if not q:
        return dict(p)
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def poly_neg(p):
    return {m: -c for m, c in p.items()}


def poly_mul(p, q):
    if not p or not q:
        return {}
    if len(p) > len(q):
        p, q = q, p
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def poly_scale(p, c):
    if c == 0:
        return {}
    if c == 1:
        return dict(p)
    return {m: c * v for m, v in p.items()}
