"""Deformations and equivalences of pre-symplectic structures and foliations on flat tori."""

import os

_threads = os.environ.get("PRESYM_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"
