"""Pure-Python kernels with the same interface as the compiled module.

Field descriptors are tuples ``(kind, w, modlow, p)``: kind 0 is GF(2^w) whose
modulus is ``x^w + modlow``, kind 1 is the prime field of order p.
"""

from __future__ import annotations

BACKEND = "python"

OP_CONST, OP_INPUT, OP_ADD, OP_MUL, OP_SUB = range(5)
FIN_OUT, FIN_DET, FIN_PF = range(3)


def hardware_clmul() -> bool:
    return False


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def mul(fs: tuple, a: int, b: int) -> int:
    kind, w, modlow, p = fs
    if kind:
        return a * b % p
    pr = _clmul(a, b)
    mask = (1 << w) - 1
    while pr >> w:
        pr = (pr & mask) ^ _clmul(pr >> w, modlow)
    return pr


def _pow(fs: tuple, a: int, e: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = mul(fs, r, a)
        a = mul(fs, a, a)
        e >>= 1
    return r


def inv(fs: tuple, a: int) -> int:
    kind, w, _, p = fs
    if kind:
        return pow(a, p - 2, p)
    return _pow(fs, a, (1 << w) - 2)


def sqrt2(fs: tuple, a: int) -> int:
    for _ in range(fs[1] - 1):
        a = mul(fs, a, a)
    return a


def _sub(fs: tuple, a: int, b: int) -> int:
    if fs[0]:
        return (a - b) % fs[3]
    return a ^ b


def _add(fs: tuple, a: int, b: int) -> int:
    if fs[0]:
        return (a + b) % fs[3]
    return a ^ b


def _elim(fs: tuple, M: list[int], R: int, C: int) -> tuple[int, int]:
    row = 0
    num = 1
    scale = 1
    neg = False
    for col in range(C):
        if row >= R:
            break
        piv = next((r for r in range(row, R) if M[r * C + col]), -1)
        if piv < 0:
            continue
        if piv != row:
            for j in range(col, C):
                M[piv * C + j], M[row * C + j] = M[row * C + j], M[piv * C + j]
            neg = not neg
        p = M[row * C + col]
        num = mul(fs, num, p)
        for r in range(row + 1, R):
            a = M[r * C + col]
            if not a:
                continue
            M[r * C + col] = 0
            for j in range(col + 1, C):
                M[r * C + j] = _sub(fs, mul(fs, p, M[r * C + j]), mul(fs, a, M[row * C + j]))
            scale = mul(fs, scale, p)
        row += 1
    if R != C or row < R:
        return 0, row
    d = mul(fs, num, inv(fs, scale))
    if neg and fs[0] and d:
        d = fs[3] - d
    return d, row


def det_rank(fs: tuple, data, rows: int, cols: int) -> tuple[int, int]:
    if rows == 0 or cols == 0:
        return (1 if rows == cols else 0), 0
    return _elim(fs, [int(v) for v in data], rows, cols)


def row_echelon(fs: tuple, data, rows: int, cols: int) -> tuple[list[int], int]:
    M = [int(v) for v in data]
    if not rows or not cols:
        return M, 0
    _, r = _elim(fs, M, rows, cols)
    return M, r


def _run(fs: tuple, prog: tuple, point) -> list[int]:
    op, a, b, cst = prog[0], prog[1], prog[2], prog[3]
    reg = [0] * len(op)
    for g in range(len(op)):
        o = op[g]
        if o == OP_CONST:
            reg[g] = int(cst[g])
        elif o == OP_INPUT:
            reg[g] = point[a[g]]
        elif o == OP_ADD:
            reg[g] = _add(fs, reg[a[g]], reg[b[g]])
        elif o == OP_MUL:
            reg[g] = mul(fs, reg[a[g]], reg[b[g]])
        else:
            reg[g] = _sub(fs, reg[a[g]], reg[b[g]])
    return reg


def program_value(fs: tuple, prog: tuple, point) -> int:
    fin, dim, out = prog[4], prog[5], prog[6]
    reg = _run(fs, prog, [int(v) for v in point])
    if fin == FIN_OUT:
        return reg[out[0]] if len(out) else 0
    if dim == 0:
        return 1
    M = [reg[r] if r >= 0 else 0 for r in out]
    d, _ = _elim(fs, M, dim, dim)
    return sqrt2(fs, d) if fin == FIN_PF else d


def sieve_sum_program(fs: tuple, prog: tuple, plan: dict) -> int:
    return sieve_sum_callback(fs, lambda pt: program_value(fs, prog, pt), plan)


def sieve_sum_callback(fs: tuple, evaluate, plan: dict) -> int:
    """Sieve loop of the compiled kernel with an arbitrary evaluation callback."""
    k, N, nv = plan["k"], plan["N"], plan["nv"]
    A, y = plan["A"], plan["y"]
    kind, s1, s2 = plan["kind"], plan["s1"], plan["s2"]
    gptr, gcol = plan["gptr"], plan["gcol"]
    zpts, zw, zscale = plan["zpts"], plan["zw"], plan["zscale"]
    axvar, axptr, axpts, axw = plan["axvar"], plan["axptr"], plan["axpts"], plan["axw"]
    naxes = plan["naxes"]
    gammas = [gptr[i + 1] - gptr[i] for i in range(nv)]
    gmax = max(gammas, default=0)
    zpow = []
    for z in zpts:
        row, acc = [], 1
        for _ in range(gmax + 1):
            row.append(acc if zscale else 1)
            acc = mul(fs, acc, z)
        zpow.append(row)
    L = [0] * N
    for q in range(N):
        s = 0
        for j in range(k):
            s ^= mul(fs, y[j], A[j * N + q])
        L[q] = s
    grid = [[]]
    for ax in range(naxes):
        grid = [g + [t] for g in grid for t in range(axptr[ax], axptr[ax + 1])]
    total = 0
    point = [0] * nv
    for idx in range(1 << k):
        if idx:
            j = (idx & -idx).bit_length() - 1
            yj = y[j]
            for q in range(N):
                L[q] ^= mul(fs, yj, A[j * N + q])
        base = []
        for i in range(nv):
            pr = 1
            for t in range(gptr[i], gptr[i + 1]):
                pr = mul(fs, pr, L[gcol[t]])
            base.append(pr)
        for a in range(len(zpts)):
            zp = zpow[a]
            for i in range(nv):
                kd = kind[i]
                if kd == 0:
                    point[i] = s1[i]
                elif kd == 1:
                    point[i] = mul(fs, s1[i], mul(fs, zp[gammas[i]], base[i]))
                elif kd == 2:
                    point[i] = mul(fs, s2[i], 1 ^ mul(fs, zp[gammas[i]], mul(fs, s1[i], base[i])))
            sub = 0
            for g in grid:
                wgt = 1
                for ax, pos in enumerate(g):
                    point[axvar[ax]] = axpts[pos]
                    wgt = mul(fs, wgt, axw[pos])
                sub ^= mul(fs, wgt, evaluate(point))
            total ^= mul(fs, zw[a], sub)
    return total


def wedge(fs: tuple, k: int, a, b) -> list[int]:
    n = 1 << k
    full = n - 1
    c = [0] * n
    for I in range(n):
        ai = int(a[I])
        if not ai:
            continue
        comp = full & ~I
        J = comp
        while True:
            bj = int(b[J])
            if bj:
                t = mul(fs, ai, bj)
                odd = 0
                if fs[0]:
                    rest = J
                    while rest:
                        j = (rest & -rest).bit_length() - 1
                        rest &= rest - 1
                        odd ^= bin(I >> (j + 1)).count("1") & 1
                c[I | J] = _sub(fs, c[I | J], t) if odd else _add(fs, c[I | J], t)
            if J == 0:
                break
            J = (J - 1) & comp
    return c
