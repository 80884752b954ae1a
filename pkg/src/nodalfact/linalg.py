"""Exact dense linear algebra over Q and F_p.

Matrices over F_p are ``int64`` numpy arrays with entries in ``[0, p)``; all
products are reduced before they can overflow (``p < 2**31``).  Matrices over
Q are lists of lists of ``Fraction``.  Rank over Q uses fraction-free
(Bareiss) elimination on integer rows; anything that needs an explicit
solution uses Gauss-Jordan on fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .scalar import Field

_INT64_LIMIT = 2**63 - 1


def as_matrix(field: Field, rows):
    """Canonical matrix container for ``field`` built from raw-value rows."""
    if field.kind == "fp":
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(0 if arr.size == 0 else 1, -1)
        return arr % field.p
    return [[Fraction(x) for x in row] for row in rows]


def shape(M) -> tuple[int, int]:
    if isinstance(M, np.ndarray):
        return M.shape
    return (len(M), len(M[0]) if M else 0)


def stack(field: Field, top, bottom):
    if field.kind == "fp":
        return np.vstack([top, bottom])
    return [list(r) for r in top] + [list(r) for r in bottom]


def take_rows(M, idx):
    if isinstance(M, np.ndarray):
        return M[list(idx)]
    return [M[i] for i in idx]


# --------------------------------------------------------------------- F_p


def modinv_vec(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod ``p`` by Fermat exponentiation."""
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` without int64 overflow; broadcasts like ``np.matmul``."""
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 <= _INT64_LIMIT:
        return np.matmul(A, B) % p
    out = None
    for j in range(inner):
        term = A[..., :, j, None] * B[..., None, j, :] % p
        out = term if out is None else (out + term) % p
    return out


def _rref_fp(M: np.ndarray, p: int):
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit] = (R[hit] - np.outer(col[hit], R[r]) % p) % p
        pivots.append(c)
        r += 1
    return R, pivots


def _rank_fp(M: np.ndarray, p: int) -> int:
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        below = R[r + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            f = below[hit] * pow(int(R[r, c]), -1, p) % p
            R[r + 1 + hit] = (R[r + 1 + hit] - np.outer(f, R[r]) % p) % p
        r += 1
    return r


# ----------------------------------------------------------------------- Q


def _integer_rows(M) -> list[list[int]]:
    out = []
    for row in M:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
    return out


def _rank_qq(M) -> int:
    """Bareiss elimination; pivot is the smallest nonzero magnitude in its column."""
    A = _integer_rows(M)
    rows, cols = shape(A)
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        best = None
        for i in range(r, rows):
            v = A[i][c]
            if v and (best is None or abs(v) < abs(A[best][c])):
                best = i
        if best is None:
            continue
        A[r], A[best] = A[best], A[r]
        piv = A[r][c]
        prow = A[r]
        for i in range(r + 1, rows):
            row = A[i]
            a = row[c]
            for j in range(c + 1, cols):
                row[j] = (piv * row[j] - a * prow[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def _rref_qq(M):
    R = [[Fraction(x) for x in row] for row in M]
    rows, cols = shape(R)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        best = None
        for i in range(r, rows):
            v = R[i][c]
            if v and (best is None or abs(v.numerator) < abs(R[best][c].numerator)):
                best = i
        if best is None:
            continue
        R[r], R[best] = R[best], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        prow = R[r]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], prow)]
        pivots.append(c)
        r += 1
    return R, pivots


# ------------------------------------------------------------------ public


def rank(field: Field, M) -> int:
    rows, cols = shape(M)
    if rows == 0 or cols == 0:
        return 0
    if field.kind == "fp":
        return _rank_fp(M, field.p)
    return _rank_qq(M)


def rref(field: Field, M):
    """Reduced row echelon form and pivot columns."""
    if field.kind == "fp":
        return _rref_fp(M, field.p)
    return _rref_qq(M)


def nullspace(field: Field, M, ncols: int | None = None) -> list[list]:
    """Basis of ``{x : M x = 0}`` as a list of raw-value vectors."""
    rows, cols = shape(M)
    if rows == 0:
        cols = cols or (ncols or 0)
        return [[field.one if i == j else field.zero for i in range(cols)] for j in range(cols)]
    R, pivots = rref(field, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * cols
        v[f] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(field(R[i][f]))
        basis.append(v)
    return basis


def solve(field: Field, A, b):
    """One solution of ``A x = b`` (free variables set to zero) or ``None``."""
    rows, cols = shape(A)
    if field.kind == "fp":
        aug = np.hstack([np.asarray(A, dtype=np.int64), np.asarray(b, dtype=np.int64).reshape(-1, 1)])
    else:
        aug = [list(row) + [Fraction(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(field, aug)
    if cols in pivots:
        return None
    x = [field.zero] * cols
    for i, pc in enumerate(pivots):
        x[pc] = field(R[i][cols])
    return x


def dot(field: Field, u, v):
    if field.kind == "fp":
        p = field.p
        return sum(int(a) * int(b) % p for a, b in zip(u, v)) % p
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


# ---------------------------------------------------------------- batched


def batched_kernel(A: np.ndarray, p: int):
    """Kernels of a stack of ``r x m`` matrices over F_p (``r < m``).

    Returns ``(ok, K)``: ``ok[b]`` is true iff ``A[b]`` has full row rank
    ``r``, in which case ``K[b]`` holds a basis (``m - r`` rows) of its
    kernel.  Entries of ``K`` for rank-deficient matrices are meaningless.
    """
    A = np.array(A, dtype=np.int64) % p
    B, r, m = A.shape
    ar = np.arange(B)
    ok = np.ones(B, dtype=bool)
    piv = np.zeros((B, r), dtype=np.int64)
    for i in range(r):
        nz = A[:, i, :] != 0
        has = nz.any(axis=1)
        ok &= has
        c = np.argmax(nz, axis=1)
        piv[:, i] = c
        pv = A[ar, i, c]
        pv[~has] = 1
        A[:, i, :] = A[:, i, :] * modinv_vec(pv, p)[:, None] % p
        f = A[ar, :, c]
        f[:, i] = 0
        f[~has] = 0
        A = (A - f[:, :, None] * A[:, i, None, :] % p) % p
    nfree = m - r
    free = np.ones((B, m), dtype=bool)
    free[ar[:, None], piv] = False
    free[~ok] = False
    free[~ok, :nfree] = True
    free_idx = np.nonzero(free)[1].reshape(B, nfree)
    K = np.zeros((B, nfree, m), dtype=np.int64)
    jj = np.arange(nfree)[None, :]
    K[ar[:, None], jj, free_idx] = 1
    for i in range(r):
        K[ar[:, None], jj, piv[:, i][:, None]] = (-A[ar[:, None], i, free_idx]) % p
    return ok, K
