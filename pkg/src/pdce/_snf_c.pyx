# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Smith-reduction kernel: int64 arithmetic, overflow-checked.

Mirrors :func:`pdce._snf_py.smith_reduce` operation for operation (same
pivoting rule, same update order), so the two produce identical output.
Every add/sub/mul is checked; on overflow the kernel raises
``OverflowError`` instead of wrapping, and the caller retries with the
arbitrary-precision pure-Python kernel.
"""

import numpy as np

cdef extern from *:
    """
    #include <stdint.h>
    static inline int pdce_mul_ovf(int64_t a, int64_t b, int64_t *r)
        { return __builtin_mul_overflow(a, b, r); }
    static inline int pdce_add_ovf(int64_t a, int64_t b, int64_t *r)
        { return __builtin_add_overflow(a, b, r); }
    static inline int pdce_sub_ovf(int64_t a, int64_t b, int64_t *r)
        { return __builtin_sub_overflow(a, b, r); }
    """
    int pdce_mul_ovf(long long a, long long b, long long *r) nogil
    int pdce_add_ovf(long long a, long long b, long long *r) nogil
    int pdce_sub_ovf(long long a, long long b, long long *r) nogil


cdef inline long long fdiv(long long a, long long p) nogil:
    # Floor division matching Python semantics; p > 0 at all call sites.
    # (cdivision is on, so `/` truncates toward zero and needs adjusting.)
    cdef long long q = a / p
    if a % p != 0 and a < 0:
        q -= 1
    return q


cdef int _submul_row(long long[:, ::1] A, Py_ssize_t i, long long q,
                     Py_ssize_t t, Py_ssize_t n) nogil:
    # Row_i -= q * Row_t over columns [0, n); returns nonzero on overflow.
    cdef Py_ssize_t j
    cdef long long prod, res
    for j in range(n):
        if pdce_mul_ovf(q, A[t, j], &prod):
            return 1
        if pdce_sub_ovf(A[i, j], prod, &res):
            return 1
        A[i, j] = res
    return 0


cdef int _addmul_row(long long[:, ::1] A, Py_ssize_t i, long long q,
                     Py_ssize_t t, Py_ssize_t n) nogil:
    # Row_i += q * Row_t over columns [0, n); returns nonzero on overflow.
    cdef Py_ssize_t j
    cdef long long prod, res
    for j in range(n):
        if pdce_mul_ovf(q, A[t, j], &prod):
            return 1
        if pdce_add_ovf(A[i, j], prod, &res):
            return 1
        A[i, j] = res
    return 0


cdef int _submul_col(long long[:, ::1] A, Py_ssize_t j, long long q,
                     Py_ssize_t t, Py_ssize_t m) nogil:
    # Col_j -= q * Col_t over rows [0, m); returns nonzero on overflow.
    cdef Py_ssize_t i
    cdef long long prod, res
    for i in range(m):
        if pdce_mul_ovf(q, A[i, t], &prod):
            return 1
        if pdce_sub_ovf(A[i, j], prod, &res):
            return 1
        A[i, j] = res
    return 0


cdef int _addmul_col(long long[:, ::1] A, Py_ssize_t j, long long q,
                     Py_ssize_t t, Py_ssize_t m) nogil:
    cdef Py_ssize_t i
    cdef long long prod, res
    for i in range(m):
        if pdce_mul_ovf(q, A[i, t], &prod):
            return 1
        if pdce_add_ovf(A[i, j], prod, &res):
            return 1
        A[i, j] = res
    return 0


cdef inline void _swap_rows(long long[:, ::1] A, Py_ssize_t a, Py_ssize_t b,
                            Py_ssize_t n) nogil:
    cdef Py_ssize_t j
    cdef long long tmp
    for j in range(n):
        tmp = A[a, j]
        A[a, j] = A[b, j]
        A[b, j] = tmp


cdef inline void _swap_cols(long long[:, ::1] A, Py_ssize_t a, Py_ssize_t b,
                            Py_ssize_t m) nogil:
    cdef Py_ssize_t i
    cdef long long tmp
    for i in range(m):
        tmp = A[i, a]
        A[i, a] = A[i, b]
        A[i, b] = tmp


cdef int _negate_row(long long[:, ::1] A, Py_ssize_t a, Py_ssize_t n) nogil:
    cdef Py_ssize_t j
    cdef long long res
    for j in range(n):
        if pdce_sub_ovf(0, A[a, j], &res):
            return 1
        A[a, j] = res
    return 0


cdef int _negate_col(long long[:, ::1] A, Py_ssize_t a, Py_ssize_t m) nogil:
    cdef Py_ssize_t i
    cdef long long res
    for i in range(m):
        if pdce_sub_ovf(0, A[i, a], &res):
            return 1
        A[i, a] = res
    return 0


def smith_reduce_i64(mat, bint want_u=False, bint want_v=False,
                     bint want_uinv=False, bint want_vinv=False):
    """int64 twin of ``_snf_py.smith_reduce``; raises OverflowError early."""
    cdef Py_ssize_t m = len(mat)
    cdef Py_ssize_t n = len(mat[0]) if m else 0
    # np conversion raises OverflowError if any entry exceeds int64.
    Mnp = np.array(mat, dtype=np.int64) if m and n else np.zeros((m, n), dtype=np.int64)
    if Mnp.ndim != 2:
        Mnp = Mnp.reshape(m, n)
    Unp = np.eye(m, dtype=np.int64) if want_u else np.zeros((1, 1), dtype=np.int64)
    Uinp = np.eye(m, dtype=np.int64) if want_uinv else np.zeros((1, 1), dtype=np.int64)
    Vnp = np.eye(n, dtype=np.int64) if want_v else np.zeros((1, 1), dtype=np.int64)
    Vinp = np.eye(n, dtype=np.int64) if want_vinv else np.zeros((1, 1), dtype=np.int64)

    cdef long long[:, ::1] M = Mnp
    cdef long long[:, ::1] U = Unp
    cdef long long[:, ::1] Ui = Uinp
    cdef long long[:, ::1] V = Vnp
    cdef long long[:, ::1] Vi = Vinp

    cdef Py_ssize_t t = 0, limit = min(m, n)
    cdef Py_ssize_t i, j, bi, bj
    cdef long long a, p, q
    cdef long long best_abs
    cdef bint found, dirty
    cdef Py_ssize_t viol
    cdef int err = 0

    while t < limit:
        # Pivot scan: minimal |entry|, ties by (row, col); early out on 1.
        found = False
        best_abs = 0
        bi = bj = 0
        for i in range(t, m):
            for j in range(t, n):
                a = M[i, j]
                if a != 0:
                    if a < 0:
                        a = -a
                    if (not found) or a < best_abs:
                        found = True
                        best_abs = a
                        bi = i
                        bj = j
                        if a == 1:
                            break
            if found and best_abs == 1:
                break
        if not found:
            break
        if bi != t:
            _swap_rows(M, t, bi, n)
            if want_u:
                _swap_rows(U, t, bi, m)
            if want_uinv:
                _swap_cols(Ui, t, bi, m)
        if bj != t:
            _swap_cols(M, t, bj, m)
            if want_v:
                _swap_cols(V, t, bj, n)
            if want_vinv:
                _swap_rows(Vi, t, bj, n)
        if M[t, t] < 0:
            err = _negate_row(M, t, n)
            if not err and want_u:
                err = _negate_row(U, t, m)
            if not err and want_uinv:
                err = _negate_col(Ui, t, m)
            if err:
                raise OverflowError("int64 overflow in smith reduction")
        p = M[t, t]

        dirty = False
        for i in range(t + 1, m):
            a = M[i, t]
            if a != 0:
                q = fdiv(a, p)
                if q != 0:
                    # R_i -= q * R_t;  U likewise;  Ui: C_t += q * C_i
                    err = _submul_row(M, i, q, t, n)
                    if not err and want_u:
                        err = _submul_row(U, i, q, t, m)
                    if not err and want_uinv:
                        err = _addmul_col(Ui, t, q, i, m)
                    if err:
                        raise OverflowError("int64 overflow in smith reduction")
                if M[i, t] != 0:
                    dirty = True
        for j in range(t + 1, n):
            a = M[t, j]
            if a != 0:
                q = fdiv(a, p)
                if q != 0:
                    # C_j -= q * C_t;  V likewise;  Vi: R_t += q * R_j
                    err = _submul_col(M, j, q, t, m)
                    if not err and want_v:
                        err = _submul_col(V, j, q, t, n)
                    if not err and want_vinv:
                        err = _addmul_row(Vi, t, q, j, n)
                    if err:
                        raise OverflowError("int64 overflow in smith reduction")
                if M[t, j] != 0:
                    dirty = True
        if dirty:
            continue

        viol = -1
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if M[i, j] % p != 0:
                    viol = i
                    break
            if viol >= 0:
                break
        if viol >= 0:
            # R_t += R_viol;  U likewise;  Ui: C_viol -= C_t
            err = _addmul_row(M, t, 1, viol, n)
            if not err and want_u:
                err = _addmul_row(U, t, 1, viol, m)
            if not err and want_uinv:
                err = _submul_col(Ui, viol, 1, t, m)
            if err:
                raise OverflowError("int64 overflow in smith reduction")
            continue
        t += 1

    diag = [int(M[i, i]) for i in range(limit)]
    return (
        diag,
        Unp.tolist() if want_u else None,
        Vnp.tolist() if want_v else None,
        Uinp.tolist() if want_uinv else None,
        Vinp.tolist() if want_vinv else None,
    )
