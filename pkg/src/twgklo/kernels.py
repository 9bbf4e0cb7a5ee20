"""Kernel selection.

The compiled kernels are used when the extension was built; otherwise, or
when ``TWGKLO_PURE=1`` is set, the pure-Python versions are used.
"""
import os

__all__ = ["BACKEND", "padd", "psub", "pscale", "pmul", "pmul_term", "paccum"]

BACKEND = "python"

if os.environ.get("TWGKLO_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import padd, psub, pscale, pmul, pmul_term, paccum  # noqa: F401
        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

if BACKEND == "python":
    from ._kernels_py import padd, psub, pscale, pmul, pmul_term, paccum  # noqa: F401,F811
