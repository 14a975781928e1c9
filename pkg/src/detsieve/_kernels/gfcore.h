/* Field arithmetic and evaluation kernels shared by the Cython wrapper.
 *
 * Two field kinds: binary extension fields GF(2^w), w <= 64, with elements
 * stored as bit patterns, and prime fields Z/p with p < 2^63.
 */
#ifndef DETSIEVE_GFCORE_H
#define DETSIEVE_GFCORE_H

#include <stdint.h>
#include <stdlib.h>
#include <string.h>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#include <cpuid.h>
#define GF_HAVE_X86 1
#endif

typedef unsigned __int128 u128;

typedef struct {
    int kind;          /* 0 = GF(2^w), 1 = prime */
    int w;
    uint64_t modlow;   /* modulus without the x^w term */
    uint64_t mask;     /* 2^w - 1 */
    uint64_t p;
    int fast64;        /* GF(2^64) with modulus x^64 + x^4 + x^3 + x + 1 */
} fctx;

static int gf_use_pclmul = 0;

static inline u128 clmul_sw(uint64_t a, uint64_t b) {
    u128 r = 0, x = a;
    while (b) {
        if (b & 1) r ^= x;
        x <<= 1;
        b >>= 1;
    }
    return r;
}

#ifdef GF_HAVE_X86
__attribute__((target("pclmul,sse2")))
static u128 clmul_hw(uint64_t a, uint64_t b) {
    __m128i va = _mm_set_epi64x(0, (long long)a);
    __m128i vb = _mm_set_epi64x(0, (long long)b);
    __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
    uint64_t lo = (uint64_t)_mm_cvtsi128_si64(r);
    uint64_t hi = (uint64_t)_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r));
    return ((u128)hi << 64) | lo;
}

static void gf_detect_cpu(void) {
    unsigned int a, b, c, d;
    if (__get_cpuid(1, &a, &b, &c, &d)) gf_use_pclmul = (c & bit_PCLMUL) != 0;
}
#else
static u128 clmul_hw(uint64_t a, uint64_t b) { return clmul_sw(a, b); }
static void gf_detect_cpu(void) { gf_use_pclmul = 0; }
#endif

static inline u128 clmul(uint64_t a, uint64_t b) {
    return gf_use_pclmul ? clmul_hw(a, b) : clmul_sw(a, b);
}

static inline void fctx_init(fctx *f, int kind, int w, uint64_t modlow, uint64_t p) {
    f->kind = kind;
    f->w = w;
    f->modlow = modlow;
    f->mask = (w >= 64) ? ~(uint64_t)0 : (((uint64_t)1 << w) - 1);
    f->p = p;
    f->fast64 = (kind == 0 && w == 64 && modlow == 0x1b);
}

static inline uint64_t f_add(const fctx *f, uint64_t a, uint64_t b) {
    if (f->kind == 0) return a ^ b;
    uint64_t s = a + b;
    return s >= f->p ? s - f->p : s;
}

static inline uint64_t f_sub(const fctx *f, uint64_t a, uint64_t b) {
    if (f->kind == 0) return a ^ b;
    return a >= b ? a - b : a + f->p - b;
}

static inline uint64_t f_mul(const fctx *f, uint64_t a, uint64_t b) {
    if (f->kind == 1) return (uint64_t)(((u128)a * b) % f->p);
    u128 pr = clmul(a, b);
    if (f->w == 64) {
        uint64_t lo = (uint64_t)pr, hi = (uint64_t)(pr >> 64);
        if (f->fast64) {
            /* x^64 = x^4 + x^3 + x + 1; the overflow of the first fold is < 4 bits */
            uint64_t over = (hi >> 63) ^ (hi >> 61) ^ (hi >> 60);
            lo ^= hi ^ (hi << 1) ^ (hi << 3) ^ (hi << 4);
            lo ^= over ^ (over << 1) ^ (over << 3) ^ (over << 4);
            return lo;
        }
        while (hi) {
            u128 t = clmul(hi, f->modlow);
            lo ^= (uint64_t)t;
            hi = (uint64_t)(t >> 64);
        }
        return lo;
    }
    for (;;) {
        uint64_t hi = (uint64_t)(pr >> f->w);
        if (!hi) break;
        pr = (pr & f->mask) ^ clmul(hi, f->modlow);
    }
    return (uint64_t)pr;
}

static inline uint64_t f_pow(const fctx *f, uint64_t a, u128 e) {
    uint64_t r = 1;
    while (e) {
        if (e & 1) r = f_mul(f, r, a);
        a = f_mul(f, a, a);
        e >>= 1;
    }
    return r;
}

static inline uint64_t f_inv(const fctx *f, uint64_t a) {
    if (f->kind == 1) return f_pow(f, a, (u128)(f->p - 2));
    u128 order = ((u128)1 << f->w);
    return f_pow(f, a, order - 2);
}

/* Square root in characteristic 2: a^(2^(w-1)). */
static inline uint64_t f_sqrt2(const fctx *f, uint64_t a) {
    for (int i = 0; i < f->w - 1; i++) a = f_mul(f, a, a);
    return a;
}

/* Gaussian elimination in place on an R x C row-major matrix.  The pivot is
 * the first nonzero entry going down the current column.  Rows below the
 * pivot are updated as piv*row - a*pivrow, so a single inversion at the end
 * recovers the determinant.  Returns the rank; *det is set for square input.
 */
static int f_elim(const fctx *f, uint64_t *M, int R, int C, uint64_t *det) {
    int row = 0;
    uint64_t num = 1, scale = 1;
    int neg = 0;
    for (int col = 0; col < C && row < R; col++) {
        int piv = -1;
        for (int r = row; r < R; r++) {
            if (M[(size_t)r * C + col]) { piv = r; break; }
        }
        if (piv < 0) continue;
        if (piv != row) {
            uint64_t *a = M + (size_t)piv * C, *b = M + (size_t)row * C;
            for (int j = col; j < C; j++) { uint64_t t = a[j]; a[j] = b[j]; b[j] = t; }
            neg ^= 1;
        }
        uint64_t *pr = M + (size_t)row * C;
        uint64_t p = pr[col];
        num = f_mul(f, num, p);
        for (int r = row + 1; r < R; r++) {
            uint64_t *rr = M + (size_t)r * C;
            uint64_t a = rr[col];
            if (!a) continue;
            rr[col] = 0;
            for (int j = col + 1; j < C; j++)
                rr[j] = f_sub(f, f_mul(f, p, rr[j]), f_mul(f, a, pr[j]));
            scale = f_mul(f, scale, p);
        }
        row++;
    }
    if (det) {
        if (R != C || row < R) {
            *det = 0;
        } else {
            uint64_t d = f_mul(f, num, f_inv(f, scale));
            if (neg && f->kind == 1 && d) d = f->p - d;
            *det = d;
        }
    }
    return row;
}

/* Straight-line programs.  Gate g writes register g. */
enum { OP_CONST = 0, OP_INPUT = 1, OP_ADD = 2, OP_MUL = 3, OP_SUB = 4 };
enum { FIN_OUT = 0, FIN_DET = 1, FIN_PF = 2 };

typedef struct {
    int G;
    const int32_t *op;
    const int32_t *a;
    const int32_t *b;
    const uint64_t *cst;
    int fin;
    int dim;
    int nout;
    const int32_t *out;
} program;

static inline void prog_run(const fctx *f, const program *P, const uint64_t *point, uint64_t *reg) {
    for (int g = 0; g < P->G; g++) {
        switch (P->op[g]) {
        case OP_CONST: reg[g] = P->cst[g]; break;
        case OP_INPUT: reg[g] = point[P->a[g]]; break;
        case OP_ADD: reg[g] = f_add(f, reg[P->a[g]], reg[P->b[g]]); break;
        case OP_MUL: reg[g] = f_mul(f, reg[P->a[g]], reg[P->b[g]]); break;
        default: reg[g] = f_sub(f, reg[P->a[g]], reg[P->b[g]]); break;
        }
    }
}

/* Value of the program at point; work needs dim*dim words for FIN_DET/FIN_PF. */
static inline uint64_t prog_value(const fctx *f, const program *P, const uint64_t *point,
                                  uint64_t *reg, uint64_t *work) {
    prog_run(f, P, point, reg);
    if (P->fin == FIN_OUT) return P->nout ? reg[P->out[0]] : 0;
    int n = P->dim;
    if (n == 0) return 1;
    for (int i = 0; i < n * n; i++) {
        int32_t r = P->out[i];
        work[i] = r < 0 ? 0 : reg[r];
    }
    uint64_t d;
    f_elim(f, work, n, n, &d);
    if (P->fin == FIN_PF) return f_sqrt2(f, d);
    return d;
}

/* Inclusion-exclusion sieve over GF(2^w).
 *
 * For every subset I of the k sieve coordinates (visited in Gray-code order)
 * the linear forms L_q = sum_{j not in I} y_j A[j,q] are maintained for all
 * columns.  Each variable of the program gets a value depending on its kind:
 *   0: fixed value s1[i]
 *   1: s1[i] * z^gamma_i * prod_{q in Gamma_i} L_q
 *   2: s2[i] * (1 + z^gamma_i * s1[i] * prod_{q in Gamma_i} L_q)
 *   3: tracker, set from an interpolation axis
 * For every z point and every grid point of the tracker axes the program is
 * evaluated and accumulated with the product of the Lagrange weights.
 * zscale = 0 drops the z^gamma factor (single z point expected).
 */
typedef struct {
    int k, N, nv;
    const uint64_t *A;      /* k x N */
    const uint64_t *y;      /* k */
    const int32_t *kind;    /* nv */
    const uint64_t *s1, *s2;
    const int32_t *gptr;    /* nv + 1 */
    const int32_t *gcol;
    int nz;
    const uint64_t *zpts, *zw;
    int zscale;
    int naxes;
    const int32_t *axvar;
    const int32_t *axptr;   /* naxes + 1 */
    const uint64_t *axpts, *axw;
} sieve_plan;

static uint64_t sieve_sum(const fctx *f, const program *P, const sieve_plan *S, int *err) {
    int k = S->k, N = S->N, nv = S->nv;
    int dim = P->dim;
    uint64_t *L = (uint64_t *)calloc((size_t)N + 1, sizeof(uint64_t));
    uint64_t *base = (uint64_t *)calloc((size_t)nv + 1, sizeof(uint64_t));
    uint64_t *point = (uint64_t *)calloc((size_t)nv + 1, sizeof(uint64_t));
    uint64_t *reg = (uint64_t *)calloc((size_t)P->G + 1, sizeof(uint64_t));
    uint64_t *work = (uint64_t *)calloc((size_t)dim * dim + 1, sizeof(uint64_t));
    int *cnt = (int *)calloc((size_t)S->naxes + 1, sizeof(int));
    int gmax = 0;
    for (int i = 0; i < nv; i++) {
        int g = S->gptr[i + 1] - S->gptr[i];
        if (g > gmax) gmax = g;
    }
    uint64_t *zpow = (uint64_t *)calloc((size_t)(gmax + 1) * (S->nz + 1), sizeof(uint64_t));
    if (!L || !base || !point || !reg || !work || !cnt || !zpow) {
        *err = 1;
        free(L); free(base); free(point); free(reg); free(work); free(cnt); free(zpow);
        return 0;
    }
    for (int a = 0; a < S->nz; a++) {
        uint64_t z = S->zpts[a], acc = 1;
        for (int g = 0; g <= gmax; g++) {
            zpow[(size_t)a * (gmax + 1) + g] = S->zscale ? acc : 1;
            acc = f_mul(f, acc, z);
        }
    }
    for (int q = 0; q < N; q++) {
        uint64_t s = 0;
        for (int j = 0; j < k; j++) s ^= f_mul(f, S->y[j], S->A[(size_t)j * N + q]);
        L[q] = s;
    }
    uint64_t total = 0;
    uint64_t nsub = (uint64_t)1 << k;
    for (uint64_t idx = 0; idx < nsub; idx++) {
        if (idx) {
            int j = __builtin_ctzll(idx);
            const uint64_t *Aj = S->A + (size_t)j * N;
            uint64_t yj = S->y[j];
            for (int q = 0; q < N; q++) L[q] ^= f_mul(f, yj, Aj[q]);
        }
        for (int i = 0; i < nv; i++) {
            uint64_t pr = 1;
            for (int t = S->gptr[i]; t < S->gptr[i + 1]; t++) pr = f_mul(f, pr, L[S->gcol[t]]);
            base[i] = pr;
        }
        for (int a = 0; a < S->nz; a++) {
            const uint64_t *zp = zpow + (size_t)a * (gmax + 1);
            for (int i = 0; i < nv; i++) {
                int g = S->gptr[i + 1] - S->gptr[i];
                switch (S->kind[i]) {
                case 0: point[i] = S->s1[i]; break;
                case 1: point[i] = f_mul(f, S->s1[i], f_mul(f, zp[g], base[i])); break;
                case 2: point[i] = f_mul(f, S->s2[i],
                                         1 ^ f_mul(f, zp[g], f_mul(f, S->s1[i], base[i])));
                        break;
                default: break;
                }
            }
            uint64_t sub = 0;
            for (int ax = 0; ax < S->naxes; ax++) cnt[ax] = 0;
            for (;;) {
                uint64_t wgt = 1;
                for (int ax = 0; ax < S->naxes; ax++) {
                    int pos = S->axptr[ax] + cnt[ax];
                    point[S->axvar[ax]] = S->axpts[pos];
                    wgt = f_mul(f, wgt, S->axw[pos]);
                }
                sub ^= f_mul(f, wgt, prog_value(f, P, point, reg, work));
                int ax = 0;
                while (ax < S->naxes) {
                    cnt[ax]++;
                    if (cnt[ax] < S->axptr[ax + 1] - S->axptr[ax]) break;
                    cnt[ax] = 0;
                    ax++;
                }
                if (ax == S->naxes) break;
            }
            total ^= f_mul(f, S->zw[a], sub);
        }
    }
    free(L); free(base); free(point); free(reg); free(work); free(cnt); free(zpow);
    *err = 0;
    return total;
}

/* Product in the exterior algebra over F^k; coefficient arrays indexed by
 * subset bitmask.  The sign of e_I ^ e_J is the parity of the pairs
 * (i in I, j in J) with i > j.
 */
static void ext_wedge(const fctx *f, int k, const uint64_t *a, const uint64_t *b, uint64_t *c) {
    uint64_t full = ((uint64_t)1 << k) - 1;
    uint64_t n = (uint64_t)1 << k;
    for (uint64_t i = 0; i < n; i++) c[i] = 0;
    for (uint64_t SI = 0; SI < n; SI++) {
        uint64_t ai = a[SI];
        if (!ai) continue;
        uint64_t comp = full & ~SI;
        uint64_t SJ = comp;
        for (;;) {
            uint64_t bj = b[SJ];
            if (bj) {
                uint64_t t = f_mul(f, ai, bj);
                int odd = 0;
                if (f->kind == 1) {
                    uint64_t rest = SJ;
                    while (rest) {
                        int j = __builtin_ctzll(rest);
                        rest &= rest - 1;
                        odd ^= __builtin_popcountll(SI >> (j + 1)) & 1;
                    }
                }
                c[SI | SJ] = odd ? f_sub(f, c[SI | SJ], t) : f_add(f, c[SI | SJ], t);
            }
            if (SJ == 0) break;
            SJ = (SJ - 1) & comp;
        }
    }
}

#endif
