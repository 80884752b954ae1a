from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from nodalfact import linalg
from nodalfact.scalar import GF, QQ

from oracle import rank_mod, rank_q

F = GF()


def low_rank(rng, rows, cols, r, p):
    A = rng.integers(0, p, (rows, r))
    B = rng.integers(0, p, (r, cols))
    return linalg.matmul_mod(A, B, p)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 8), st.integers(0, 2**32))
@settings(max_examples=60)
def test_fp_rank_matches_oracle(rows, cols, r, seed):
    rng = np.random.default_rng(seed)
    M = low_rank(rng, rows, cols, r, F.p)
    assert linalg.rank(F, M) == rank_mod(M.tolist(), F.p)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=7))
@settings(max_examples=60)
def test_qq_rank_matches_oracle(rows):
    M = linalg.as_matrix(QQ, [[Fraction(x, 1 + abs(x)) for x in r] for r in rows])
    assert linalg.rank(QQ, M) == rank_q(M)


def test_large_prime_no_overflow(rng):
    p = 2147483647
    G = GF(p)
    M = low_rank(rng, 12, 15, 7, p)
    assert linalg.rank(G, M) == rank_mod(M.tolist(), p) == 7


def test_nullspace_and_solve(rng):
    for field in (F, QQ):
        if field is F:
            M = low_rank(rng, 5, 9, 4, F.p)
        else:
            M = [[Fraction(int(x)) for x in r] for r in rng.integers(-4, 5, (5, 9))]
        K = linalg.nullspace(field, M)
        assert len(K) == 9 - linalg.rank(field, M)
        for v in K:
            for row in (M.tolist() if field is F else M):
                assert field.is_zero(linalg.dot(field, row, v))
        x0 = [field(int(v)) for v in rng.integers(0, 50, 9)]
        b = [linalg.dot(field, row, x0) for row in (M.tolist() if field is F else M)]
        x = linalg.solve(field, M, b)
        assert [linalg.dot(field, row, x) for row in (M.tolist() if field is F else M)] == b


def test_solve_inconsistent():
    M = linalg.as_matrix(F, [[1, 1], [2, 2]])
    assert linalg.solve(F, M, [1, 3]) is None


def test_batched_kernel(rng):
    A = rng.integers(0, F.p, (200, 4, 7))
    A[:50, 3] = A[:50, 0]  # rank-deficient block
    ok, K = linalg.batched_kernel(A, F.p)
    assert not ok[:50].any() and ok[50:].all()
    for b in range(50, 200):
        assert (linalg.matmul_mod(A[b], K[b].T, F.p) == 0).all()
        assert linalg.rank(F, K[b]) == 3
