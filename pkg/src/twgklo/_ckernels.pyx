# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernels_py``; same signatures, same results."""


def padd(dict a, dict b):
    cdef dict r
    cdef object m, c, v
    if len(a) < len(b):
        a, b = b, a
    r = a.copy()
    for m, c in b.items():
        v = r.get(m)
        if v is None:
            r[m] = c
        else:
            v = v + c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def psub(dict a, dict b):
    cdef dict r = a.copy()
    cdef object m, c, v
    for m, c in b.items():
        v = r.get(m)
        if v is None:
            r[m] = -c
        else:
            v = v - c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def pscale(dict a, object c):
    cdef dict r = {}
    cdef object m, v
    if not c:
        return r
    for m, v in a.items():
        r[m] = v * c
    return r


def pmul_term(dict a, object mono, object c):
    cdef dict r = {}
    cdef object m, v
    for m, v in a.items():
        r[m + mono] = v * c
    return r


def pmul(dict a, dict b):
    cdef dict r = {}
    cdef dict out = {}
    cdef list items
    cdef object ma, ca, mb, cb, m, v
    if len(a) < len(b):
        a, b = b, a
    items = list(a.items())
    for mb, cb in b.items():
        for ma, ca in items:
            m = ma + mb
            v = r.get(m)
            if v is None:
                r[m] = ca * cb
            else:
                r[m] = v + ca * cb
    for m, v in r.items():
        if v:
            out[m] = v
    return out


def paccum(dict r, dict a, object mono, object c):
    cdef object ma, ca, m, v
    for ma, ca in a.items():
        m = ma + mono
        v = r.get(m)
        if v is None:
            r[m] = ca * c
        else:
            r[m] = v + ca * c
