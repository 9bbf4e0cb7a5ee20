"""Exact verification of relations between GKLO images.

A check forms LHS − RHS in normal form and passes iff every coefficient
numerator vanishes.  Reports are plain dataclasses so that the CLI can
serialize them without knowing about DiffOps.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple


from . import relations as RL
from .abcd import abcd_relations, z_reconstruction
from .diffop import DiffOp, current_mode, op_commutator, op_mul
from .gklo import GKLO, MUTATIONS, Shape, build_shape
from .lemmas import AUX
from .poly import HBAR, spectral
from .ratfunc import RatFunc, ZeroDivisor, laurent_coefficient
from .report import CheckReport, witness_of

TAGS = (
    "z-even", "h-h", "h-b", "b-b-far", "b-b-same", "b-b-adjacent", "serre",
    "aux-five", "aux-reformulated", "aux-mixed3", "aux-xxxST",
    "abcd-subset", "power-range", "kernel", "central", "semiclassical",
)
UNSHIFTED_ONLY = ("abcd-subset", "kernel", "central")

# the relation each mutation is known to break (found by direct evaluation)
EXPECTED_FAILURE = {
    "drop-R-in-kappa-prime": "b-b-same",
    "flip-sign-kappa": "b-b-same",
    "shift-denominator": "b-b-same",
}

class UnsupportedCheck(ValueError):
    pass


# --------------------------------------------------------------------------
# case generation: each yields (relation name, indices, thunk -> DiffOp)

Case = Tuple[str, tuple, Callable[[], DiffOp]]


def _defining_cases(G: GKLO, tag: str) -> Iterator[Case]:
    fn = RL.BUILDERS[tag]
    for idx in RL.cases(G.shape, tag):
        yield tag, idx, (lambda idx=idx: fn(G, *idx))


def _eager(items) -> Iterator[Case]:
    for name, idx, d in items:
        yield name, idx, (lambda d=d: d)


def _power_range_cases(G: GKLO) -> Iterator[Case]:
    S = G.shape
    U = spectral("u")
    ui = S.ring.index[U]
    for i in range(1, S.n + 1):
        def h_case(i=i):
            f = G.h_coeff(i, "u")
            p = f.degree_in(ui)
            bad = []
            if p != S.top_power(i):
                bad.append("top power %d, expected %d" % (p, S.top_power(i)))
            if p != -2 * S.mi(1) + 2 * sum(S.mu[: i - 1]):
                bad.append("top power %d differs from -2m_1 + 2 sum_{j<i} mu_j" % p)
            lead = laurent_coefficient(f, U, -p)
            if lead != 1:
                bad.append("leading coefficient %s" % lead.to_str())
            if bad:
                return G.A.scalar(G.F(1, [])), "; ".join(bad)
            return G.A.zero(), ""
        yield "h-top-power", (i,), h_case
    for i in range(1, S.n):
        def b_case(i=i):
            b = G.b(i, "u")
            for e, f in b.terms.items():
                if f.degree_in(ui) >= 0:
                    return G.A.monomial(f, e), "b coefficient not proper in u"
            return G.A.zero(), ""
        yield "b-proper", (i,), b_case


def _kernel_cases(G: GKLO) -> Iterator[Case]:
    S = G.shape
    U = spectral("u")
    ui = S.ring.index[U]
    u, h = S.sp("u"), S.h
    for i in range(1, S.n):
        m = S.mi(i)
        for name, build in (("A", G.A_tilde), ("B", G.B_tilde), ("C", G.C_tilde)):
            def case(build=build, i=i, m=m):
                x = build(i, "u").scale(G.F(1, [(u, 2 * m)]))
                # u^{2m} X(u) polynomial in u  <=>  every mode r > 2m vanishes
                for e, f in x.terms.items():
                    f = f.reduce()
                    if any(ui in a.variables() for a in f.fac if f.fac[a] < 0):
                        return G.A.monomial(f, e), "u^{2m_i} X(u) has a pole in u"
                top = build(i, "u")
                for r in range(2 * m + 1, 2 * m + 4):
                    mode = current_mode(top, U, r)
                    if not mode.is_zero():
                        return mode, "mode %d nonzero" % r
                return G.A.zero(), ""
            yield "kernel-" + name, (i,), case

        def witness_case(i=i, m=m):
            mode = current_mode(G.A_tilde(i, "u"), U, 2 * m)
            fs = []
            for k in range(1, m + 1):
                fs.append((S.g(i, k) + h / 2, 2))
            want = G.A.scalar(G.F((-1) ** m, fs))
            if mode.is_zero():
                return G.A.scalar(G.F(1, [])), "top mode vanishes"
            return mode - want, "witness A~_%d^(%d) = %s" % (i, 2 * m, mode.coeff(G.A.zero_exps).to_str())
        yield "kernel-A-top", (i,), witness_case


def _central_cases(G: GKLO) -> Iterator[Case]:
    S = G.shape
    c = None

    def cu():
        nonlocal c
        if c is None:
            c = G.central("u")
        return c
    for j in range(1, S.n):
        yield "central-b", (j,), (lambda j=j: op_commutator(cu(), G.b(j, "v")))
    for j in range(1, S.n + 1):
        yield "central-h", (j,), (lambda j=j: op_commutator(cu(), G.hcur(j, "v")))


def _abcd_cases(G: GKLO) -> Iterator[Case]:
    for i in range(1, G.shape.n):
        yield from _eager(abcd_relations(G, i))
        yield "z-reconstruction", (i,), (lambda i=i: z_reconstruction(G, i))


def tag_cases(G: GKLO, tag: str) -> Iterator[Case]:
    S = G.shape
    if tag in UNSHIFTED_ONLY and not S.is_unshifted:
        raise UnsupportedCheck("%s needs mu = 0" % tag)
    if tag in RL.BUILDERS:
        return _defining_cases(G, tag)
    if tag in AUX:
        return _eager(AUX[tag](G))
    if tag == "power-range":
        return _power_range_cases(G)
    if tag == "kernel":
        return _kernel_cases(G)
    if tag == "central":
        return _central_cases(G)
    if tag == "abcd-subset":
        return _abcd_cases(G)
    raise UnsupportedCheck("unknown tag %r" % tag)


def _run_case(S: Shape, name: str, idx: tuple, thunk, ms0: float = 0.0) -> CheckReport:
    t0 = time.perf_counter()
    out = thunk()
    note = ""
    if isinstance(out, tuple):
        out, note = out
    ok = out.is_zero()
    ms = ms0 + (time.perf_counter() - t0) * 1000
    return CheckReport(name, tuple(idx), S.summary(), "pass" if ok else "fail",
                       None if ok else witness_of(out), ms, note)


def _timed(it: Iterable[Case]) -> Iterator[Tuple[Case, float]]:
    # eager builders do their work inside next(), so that time is charged too
    it = iter(it)
    while True:
        t0 = time.perf_counter()
        try:
            case = next(it)
        except StopIteration:
            return
        yield case, (time.perf_counter() - t0) * 1000


def _family(S: Shape, tag: str, cases: List[CheckReport]) -> CheckReport:
    cases = sorted(cases, key=lambda c: (c.relation, c.indices))
    bad = [c for c in cases if not c.passed]
    return CheckReport(tag, (), S.summary(), "fail" if bad else "pass",
                       bad[0].witness if bad else None, sum(c.ms for c in cases),
                       bad[0].note if bad else ("vacuous" if not cases else ""), cases)


def check_relation(shape: Shape, tag: str, indices: Optional[tuple] = None,
                   mutation: Optional[str] = None) -> CheckReport:
    """Check one relation family, or one instance of it when ``indices`` is given."""
    if tag == "semiclassical":
        return semiclassical_suite(shape)
    G = GKLO(shape, mutation=mutation)
    reports = []
    for (name, idx, thunk), ms0 in _timed(tag_cases(G, tag)):
        if indices is not None and tuple(idx) != tuple(indices):
            continue
        reports.append(_run_case(shape, name, idx, thunk, ms0))
    if indices is not None and len(reports) == 1:
        return reports[0]
    return _family(shape, tag, reports)


# --------------------------------------------------------------------------
# suite runner

@lru_cache(maxsize=16)
def _shape(key) -> Shape:
    n, lam, mu, roots = key
    return build_shape(n, lam, mu, roots)


def shape_key(S: Shape):
    return (S.n, S.lam, S.mu, S.roots)


def _unit(args):
    key, tag, idx = args
    S = _shape(key)
    return tag, check_relation(S, tag, idx)


def _units(S: Shape, tag: str):
    if tag in RL.BUILDERS:
        return [(tag, idx) for idx in RL.cases(S, tag)]
    return [(tag, None)]


def run_suite(shape: Shape, tags: Sequence[str], jobs: int = 1) -> List[CheckReport]:
    """One family report per tag, sorted by tag; cases inside are sorted too."""
    tags = sorted(set(tags), key=lambda t: (TAGS.index(t) if t in TAGS else len(TAGS), t))
    units = []
    for t in tags:
        if t in UNSHIFTED_ONLY and not shape.is_unshifted:
            raise UnsupportedCheck("%s needs mu = 0" % t)
        if t not in TAGS:
            raise UnsupportedCheck("unknown tag %r" % t)
        units += _units(shape, t)
    key = shape_key(shape)
    if jobs > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_unit, [(key, t, i) for t, i in units]))
    else:
        results = [(t, check_relation(shape, t, i)) for t, i in units]
    per: Dict[str, List[CheckReport]] = {t: [] for t in tags}
    for (t, idx), (_, rep) in zip(units, results):
        per[t].extend([rep] if idx is not None else rep.cases)
    return [_family(shape, t, per[t]) for t in tags]


# --------------------------------------------------------------------------
# semiclassical limit

def _at_hbar_zero(f: RatFunc) -> RatFunc:
    R = f.ring
    return f.subst({R.index[HBAR]: R.zero()})


def classical_bracket(alg, x: Dict[tuple, RatFunc], y: Dict[tuple, RatFunc]) -> Dict[tuple, RatFunc]:
    """Leibniz extension of {β_s, γ_s} = β_s on sums f(γ) β^e."""
    out: Dict[tuple, RatFunc] = {}
    for a, f in x.items():
        for b, g in y.items():
            acc = None
            for s, gi in enumerate(alg.gidx):
                if a[s]:
                    t = f * g.derivative(gi) * a[s]
                    acc = t if acc is None else acc + t
                if b[s]:
                    t = -(g * f.derivative(gi) * b[s])
                    acc = t if acc is None else acc + t
            if acc is None or not acc.num.t:
                continue
            e = tuple(p + q for p, q in zip(a, b))
            out[e] = out[e] + acc if e in out else acc
    return {e: f for e, f in out.items() if f.num.t}


def semiclassical_check(shape: Shape, x: DiffOp, y: DiffOp, label: str = "pair") -> CheckReport:
    t0 = time.perf_counter()
    A = x.alg
    R = shape.ring
    hb = R.var(HBAR)
    q = op_commutator(x, y)
    lim: Dict[tuple, RatFunc] = {}
    for e, f in q.terms.items():
        g = (f / RatFunc.poly(hb)).reduce()
        try:
            lim[e] = _at_hbar_zero(g)
        except ZeroDivisor:
            return CheckReport("semiclassical", (label,), shape.summary(), "fail",
                               "beta%s: commutator not divisible by hbar" % list(e),
                               (time.perf_counter() - t0) * 1000)
    x0 = {e: _at_hbar_zero(f) for e, f in x.terms.items()}
    y0 = {e: _at_hbar_zero(f) for e, f in y.terms.items()}
    cl = classical_bracket(A, {e: f for e, f in x0.items() if f.num.t},
                           {e: f for e, f in y0.items() if f.num.t})
    diff = DiffOp(A, {})
    for e in set(lim) | set(cl):
        a = lim.get(e, RatFunc.const(R, 0))
        b = cl.get(e, RatFunc.const(R, 0))
        d = a - b
        if d.num.t:
            diff.terms[e] = d
    ok = diff.is_zero()
    return CheckReport("semiclassical", (label,), shape.summary(), "pass" if ok else "fail",
                       None if ok else witness_of(diff), (time.perf_counter() - t0) * 1000)


def semiclassical_pool(shape: Shape) -> List[Tuple[str, DiffOp]]:
    """κ, κ′, γ, and modes of b (orders 1–3) and h (orders 0–3)."""
    G = GKLO(shape)
    U = spectral("u")
    pool = []
    for (i, k) in shape.alg.slots:
        pool.append(("kappa%d%d" % (i, k), G.kappa(i, k)))
        pool.append(("kappa'%d%d" % (i, k), G.kappa_prime(i, k)))
        pool.append(("gamma%d%d" % (i, k), G.gamma_op(i, k)))
    for i in range(1, shape.n):
        b = G.b(i, "u")
        for r in (1, 2, 3):
            pool.append(("b%d^%d" % (i, r), current_mode(b, U, r)))
    for i in range(1, shape.n + 1):
        h = G.hcur(i, "u")
        top = shape.top_power(i)
        for r in (0, 1, 2, 3):
            pool.append(("h%d^%d" % (i, r), current_mode(h, U, r - top)))
    return pool


def semiclassical_suite(shape: Shape, count: int = 50, seed: int = 0) -> CheckReport:
    """At least ``count`` pairs; products of two pool elements are added when
    the pool alone is too small."""
    pool = semiclassical_pool(shape)
    pairs = [(a, b) for ia, a in enumerate(pool) for b in pool[ia:]]
    if len(pairs) < count:
        extra = [("%s*%s" % (a[0], b[0]), op_mul(a[1], b[1]))
                 for ia, a in enumerate(pool[:8]) for b in pool[ia:8]]
        pool2 = pool + extra
        pairs = [(a, b) for ia, a in enumerate(pool2) for b in pool2[ia:]]
    rng = random.Random(seed)
    if len(pairs) > count:
        pairs = rng.sample(pairs, count)
    cases = [semiclassical_check(shape, a[1], b[1], "%s,%s" % (a[0], b[0])) for a, b in pairs]
    return _family(shape, "semiclassical", cases)


# --------------------------------------------------------------------------
# negative controls

def negative_control(shape: Shape, mutation: str) -> CheckReport:
    """Expected-fail: the mutated images must break EXPECTED_FAILURE[mutation]."""
    if mutation not in MUTATIONS:
        raise UnsupportedCheck("unknown mutation %r" % mutation)
    if not any(shape.m):
        raise UnsupportedCheck("negative controls need some m_i >= 1")
    t0 = time.perf_counter()
    G = GKLO(shape, mutation=mutation)
    target = EXPECTED_FAILURE[mutation]
    failed = []
    witness = None
    for tag in RL.DEFINING:
        for name, idx, thunk in _defining_cases(G, tag):
            d = thunk()
            if not d.is_zero():
                failed.append("%s%s" % (name, list(idx)))
                if name == target and witness is None:
                    witness = witness_of(d)
    ms = (time.perf_counter() - t0) * 1000
    hit = any(f.startswith(target + "[") for f in failed)
    status = "expected-fail" if hit else "fail"
    note = "failing: " + ", ".join(failed) if failed else "mutation passed every relation"
    return CheckReport("negative-control:" + mutation, (), shape.summary(), status,
                       witness, ms, note)
