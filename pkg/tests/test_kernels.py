import os
import subprocess
import sys

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from twgklo import _kernels_py as py
from twgklo import kernels

try:
    from twgklo import _ckernels as cy
except ImportError:
    cy = None

needs_cy = pytest.mark.skipif(cy is None, reason="compiled kernel not built")

MONO = st.integers(0, 1 << 20)
COEF = st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool).map(
    lambda f: mpq(f.numerator, f.denominator))
POLY = st.dictionaries(MONO, COEF, max_size=12)


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    env = dict(os.environ, TWGKLO_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from twgklo import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == "python"


@given(POLY, POLY)
def test_pure_kernels_basic_laws(a, b):
    assert py.padd(a, b) == py.padd(b, a)
    assert py.psub(a, a) == {}
    assert py.pmul(a, b) == py.pmul(b, a)
    assert all(py.pmul(a, b).values())


@needs_cy
@given(POLY, POLY, MONO, COEF)
def test_compiled_matches_pure(a, b, m, c):
    assert cy.padd(a, b) == py.padd(a, b)
    assert cy.psub(a, b) == py.psub(a, b)
    assert cy.pscale(a, c) == py.pscale(a, c)
    assert cy.pmul(a, b) == py.pmul(a, b)
    assert cy.pmul_term(a, m, c) == py.pmul_term(a, m, c)
    r1, r2 = dict(b), dict(b)
    py.paccum(r1, a, m, c)
    cy.paccum(r2, a, m, c)
    assert r1 == r2
