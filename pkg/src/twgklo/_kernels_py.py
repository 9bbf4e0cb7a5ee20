"""Pure-Python sparse polynomial kernels.

Polynomials are dicts mapping a packed monomial (a Python int, see
``twgklo.poly.Ring``) to a nonzero rational coefficient.  Packed monomials
multiply by integer addition.  The compiled module ``_ckernels`` exposes the
same functions; ``twgklo.kernels`` picks one at import time.
"""


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    r = dict(a)
    get = r.get
    for m, c in b.items():
        v = get(m)
        if v is None:
            r[m] = c
        else:
            v = v + c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def psub(a, b):
    r = dict(a)
    get = r.get
    for m, c in b.items():
        v = get(m)
        if v is None:
            r[m] = -c
        else:
            v = v - c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def pscale(a, c):
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def pmul_term(a, mono, c):
    return {m + mono: v * c for m, v in a.items()}


def pmul(a, b):
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        for mb, cb in b.items():
            return {m + mb: v * cb for m, v in a.items()}
    r = {}
    get = r.get
    items = list(a.items())
    for mb, cb in b.items():
        for ma, ca in items:
            m = ma + mb
            v = get(m)
            if v is None:
                r[m] = ca * cb
            else:
                r[m] = v + ca * cb
    return {m: v for m, v in r.items() if v}


def paccum(r, a, mono, c):
    """In place: r += c * mono * a.  Zero entries are left for the caller."""
    get = r.get
    for ma, ca in a.items():
        m = ma + mono
        v = get(m)
        if v is None:
            r[m] = ca * c
        else:
            r[m] = v + ca * c
