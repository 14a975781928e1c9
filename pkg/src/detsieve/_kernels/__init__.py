"""Kernel backend selection.

The compiled extension is used when it imports; setting
``DETSIEVE_PURE_PYTHON=1`` forces the pure-Python implementation.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("DETSIEVE_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = active.BACKEND

mul = active.mul
inv = active.inv
sqrt2 = active.sqrt2
det_rank = active.det_rank
row_echelon = active.row_echelon
program_value = active.program_value
sieve_sum_program = active.sieve_sum_program
sieve_sum_callback = python_backend.sieve_sum_callback
wedge = active.wedge
