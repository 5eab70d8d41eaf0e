# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython polynomial kernel: compiled twin of ``poly_py``.

Same data layout (tuple-of-pairs monomials, dict polynomials, int
coefficients), same semantics; only the loops are compiled.
"""

BACKEND = "cython"


cpdef tuple mono_mul(tuple m1, tuple m2):
    cdef Py_ssize_t i = 0, j = 0, n1 = len(m1), n2 = len(m2)
    cdef long v1, v2
    if n1 == 0:
        return m2
    if n2 == 0:
        return m1
    out = []
    while i < n1 and j < n2:
        v1 = <long> (<tuple> m1[i])[0]
        v2 = <long> (<tuple> m2[j])[0]
        if v1 == v2:
            out.append((v1, (<tuple> m1[i])[1] + (<tuple> m2[j])[1]))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    while i < n1:
        out.append(m1[i])
        i += 1
    while j < n2:
        out.append(m2[j])
        j += 1
    return tuple(out)


cpdef dict poly_add(dict p, dict q):
    cdef dict out
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


cpdef dict poly_neg(dict p):
    cdef dict out = {}
    for m, c in p.items():
        out[m] = -c
    return out


cpdef dict poly_mul(dict p, dict q):
    cdef dict out = {}
    cdef tuple m1, m2, m
    if not p or not q:
        return out
    if len(p) > len(q):
        p, q = q, p
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                del out[m]
    return out


cpdef dict poly_scale(dict p, c):
    cdef dict out = {}
    if c == 0:
        return out
    for m, v in p.items():
        out[m] = c * v
    return out
