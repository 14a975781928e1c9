# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: field arithmetic, elimination, program evaluation, sieve sums."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from "gfcore.h":
    ctypedef struct fctx:
        int kind
        int w
    ctypedef struct program:
        int G
        const int32_t *op
        const int32_t *a
        const int32_t *b
        const uint64_t *cst
        int fin
        int dim
        int nout
        const int32_t *out
    ctypedef struct sieve_plan:
        int k, N, nv
        const uint64_t *A
        const uint64_t *y
        const int32_t *kind
        const uint64_t *s1
        const uint64_t *s2
        const int32_t *gptr
        const int32_t *gcol
        int nz
        const uint64_t *zpts
        const uint64_t *zw
        int zscale
        int naxes
        const int32_t *axvar
        const int32_t *axptr
        const uint64_t *axpts
        const uint64_t *axw
    int gf_use_pclmul
    void gf_detect_cpu()
    void fctx_init(fctx *f, int kind, int w, uint64_t modlow, uint64_t p) nogil
    uint64_t f_mul(const fctx *f, uint64_t a, uint64_t b) nogil
    uint64_t f_inv(const fctx *f, uint64_t a) nogil
    uint64_t f_sqrt2(const fctx *f, uint64_t a) nogil
    int f_elim(const fctx *f, uint64_t *M, int R, int C, uint64_t *det) nogil
    uint64_t prog_value(const fctx *f, const program *P, const uint64_t *point,
                        uint64_t *reg, uint64_t *work) nogil
    uint64_t sieve_sum(const fctx *f, const program *P, const sieve_plan *S, int *err) nogil
    void ext_wedge(const fctx *f, int k, const uint64_t *a, const uint64_t *b, uint64_t *c) nogil

gf_detect_cpu()

BACKEND = "compiled"


def hardware_clmul():
    return bool(gf_use_pclmul)


cdef inline void _ctx(fctx *f, tuple fs):
    fctx_init(f, fs[0], fs[1], fs[2], fs[3])


def mul(tuple fs, uint64_t a, uint64_t b):
    cdef fctx f
    _ctx(&f, fs)
    return f_mul(&f, a, b)


def inv(tuple fs, uint64_t a):
    cdef fctx f
    _ctx(&f, fs)
    return f_inv(&f, a)


def sqrt2(tuple fs, uint64_t a):
    cdef fctx f
    _ctx(&f, fs)
    return f_sqrt2(&f, a)


def det_rank(tuple fs, data, int rows, int cols):
    """Determinant (square input only, else 0) and rank of a row-major matrix."""
    cdef fctx f
    _ctx(&f, fs)
    cdef cnp.ndarray[uint64_t, ndim=1] M = np.array(data, dtype=np.uint64)
    cdef uint64_t det = 0
    cdef int r
    if rows == 0 or cols == 0:
        return (1 if rows == cols else 0), 0
    with nogil:
        r = f_elim(&f, <uint64_t *>M.data, rows, cols, &det)
    return int(det), r


def row_echelon(tuple fs, data, int rows, int cols):
    """Row echelon form (unnormalised) as a flat list, plus the rank."""
    cdef fctx f
    _ctx(&f, fs)
    cdef cnp.ndarray[uint64_t, ndim=1] M = np.array(data, dtype=np.uint64)
    cdef int r = 0
    if rows and cols:
        with nogil:
            r = f_elim(&f, <uint64_t *>M.data, rows, cols, NULL)
    return [int(v) for v in M], r


cdef void _prog(program *P, tuple prog):
    cdef cnp.ndarray op = prog[0]
    cdef cnp.ndarray a = prog[1]
    cdef cnp.ndarray b = prog[2]
    cdef cnp.ndarray c = prog[3]
    cdef cnp.ndarray out = prog[6]
    P.G = op.shape[0]
    P.op = <const int32_t *>op.data
    P.a = <const int32_t *>a.data
    P.b = <const int32_t *>b.data
    P.cst = <const uint64_t *>c.data
    P.fin = prog[4]
    P.dim = prog[5]
    P.nout = out.shape[0]
    P.out = <const int32_t *>out.data


def program_value(tuple fs, tuple prog, point):
    """Evaluate a compiled program at one point."""
    cdef fctx f
    _ctx(&f, fs)
    cdef program P
    _prog(&P, prog)
    cdef cnp.ndarray[uint64_t, ndim=1] pt = np.array(point, dtype=np.uint64)
    if pt.shape[0] == 0:
        pt = np.zeros(1, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=1] reg = np.zeros(P.G + 1, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=1] work = np.zeros(P.dim * P.dim + 1, dtype=np.uint64)
    cdef uint64_t v
    with nogil:
        v = prog_value(&f, &P, <const uint64_t *>pt.data, <uint64_t *>reg.data,
                       <uint64_t *>work.data)
    return int(v)


def _u64(x):
    a = np.ascontiguousarray(np.array(x, dtype=np.uint64))
    return a if a.shape[0] else np.zeros(1, dtype=np.uint64)


def _i32(x):
    a = np.ascontiguousarray(np.array(x, dtype=np.int32))
    return a if a.shape[0] else np.zeros(1, dtype=np.int32)


def sieve_sum_program(tuple fs, tuple prog, dict plan):
    """Run the inclusion-exclusion sieve loop for a compiled program."""
    cdef fctx f
    _ctx(&f, fs)
    cdef program P
    _prog(&P, prog)
    keep = {}
    for name in ("A", "y", "s1", "s2", "zpts", "zw", "axpts", "axw"):
        keep[name] = _u64(plan[name])
    for name in ("kind", "gptr", "gcol", "axvar", "axptr"):
        keep[name] = _i32(plan[name])
    cdef sieve_plan S
    S.k = plan["k"]
    S.N = plan["N"]
    S.nv = plan["nv"]
    S.nz = plan["nz"]
    S.zscale = plan["zscale"]
    S.naxes = plan["naxes"]
    cdef cnp.ndarray t
    t = keep["A"]; S.A = <const uint64_t *>t.data
    t = keep["y"]; S.y = <const uint64_t *>t.data
    t = keep["s1"]; S.s1 = <const uint64_t *>t.data
    t = keep["s2"]; S.s2 = <const uint64_t *>t.data
    t = keep["zpts"]; S.zpts = <const uint64_t *>t.data
    t = keep["zw"]; S.zw = <const uint64_t *>t.data
    t = keep["axpts"]; S.axpts = <const uint64_t *>t.data
    t = keep["axw"]; S.axw = <const uint64_t *>t.data
    t = keep["kind"]; S.kind = <const int32_t *>t.data
    t = keep["gptr"]; S.gptr = <const int32_t *>t.data
    t = keep["gcol"]; S.gcol = <const int32_t *>t.data
    t = keep["axvar"]; S.axvar = <const int32_t *>t.data
    t = keep["axptr"]; S.axptr = <const int32_t *>t.data
    cdef int err = 0
    cdef uint64_t v
    with nogil:
        v = sieve_sum(&f, &P, &S, &err)
    if err:
        raise MemoryError("sieve workspace allocation failed")
    return int(v)


def wedge(tuple fs, int k, a, b):
    """Exterior product of two coefficient arrays of length 2^k."""
    cdef fctx f
    _ctx(&f, fs)
    cdef cnp.ndarray[uint64_t, ndim=1] va = np.array(a, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=1] vb = np.array(b, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=1] vc = np.zeros(1 << k, dtype=np.uint64)
    with nogil:
        ext_wedge(&f, k, <const uint64_t *>va.data, <const uint64_t *>vb.data,
                  <uint64_t *>vc.data)
    return [int(v) for v in vc]
