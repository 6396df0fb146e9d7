"""Pure-Python kernels for exact integer matrix reduction.

Arbitrary-precision reference implementation of the Smith reduction used
throughout the package.  ``pdce._snf_c`` is a compiled twin restricted to
machine words that raises ``OverflowError`` instead of wrapping; both follow
the same pivoting rule (nonzero entry of minimal absolute value, ties broken
by (row, col) order), so their outputs agree exactly whenever the compiled
path succeeds.

All functions work on lists of lists of Python ints and never mutate their
arguments.
"""

from __future__ import annotations

__all__ = ["smith_reduce", "hermite_rows"]


def smith_reduce(mat, want_u=False, want_v=False, want_uinv=False, want_vinv=False):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns ``(diag, U, V, Uinv, Vinv)`` where ``diag`` is the full diagonal
    of the Smith form (length ``min(m, n)``, nonnegative, each entry dividing
    the next) and ``U @ mat @ V`` equals ``diag(diag)``.  Untracked transform
    slots come back as ``None``.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    M = [list(row) for row in mat]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if want_u else None
    Ui = [[int(i == j) for j in range(m)] for i in range(m)] if want_uinv else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if want_v else None
    Vi = [[int(i == j) for j in range(n)] for i in range(n)] if want_vinv else None

    def swap_rows(a, b):
        M[a], M[b] = M[b], M[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]
        if Ui is not None:
            for r in Ui:
                r[a], r[b] = r[b], r[a]

    def swap_cols(a, b):
        for r in M:
            r[a], r[b] = r[b], r[a]
        if V is not None:
            for r in V:
                r[a], r[b] = r[b], r[a]
        if Vi is not None:
            Vi[a], Vi[b] = Vi[b], Vi[a]

    def negate_row(a):
        M[a] = [-x for x in M[a]]
        if U is not None:
            U[a] = [-x for x in U[a]]
        if Ui is not None:
            for r in Ui:
                r[a] = -r[a]

    def row_sub(i, q, t):
        # R_i -= q * R_t
        M[i] = [x - q * y for x, y in zip(M[i], M[t])]
        if U is not None:
            U[i] = [x - q * y for x, y in zip(U[i], U[t])]
        if Ui is not None:
            for r in Ui:
                r[t] += q * r[i]

    def row_add(t, i):
        # R_t += R_i
        M[t] = [x + y for x, y in zip(M[t], M[i])]
        if U is not None:
            U[t] = [x + y for x, y in zip(U[t], U[i])]
        if Ui is not None:
            for r in Ui:
                r[i] -= r[t]

    def col_sub(j, q, t):
        # C_j -= q * C_t
        for r in M:
            r[j] -= q * r[t]
        if V is not None:
            for r in V:
                r[j] -= q * r[t]
        if Vi is not None:
            Vi[t] = [x + q * y for x, y in zip(Vi[t], Vi[j])]

    t = 0
    limit = min(m, n)
    while t < limit:
        # Pivot scan: nonzero entry of minimal absolute value in M[t:, t:],
        # first hit wins among equals (row-major order).
        best = None
        best_abs = 0
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                a = row[j]
                if a:
                    if a < 0:
                        a = -a
                    if best is None or a < best_abs:
                        best = (i, j)
                        best_abs = a
                        if a == 1:
                            break
            if best_abs == 1:
                break
        if best is None:
            break
        bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        if M[t][t] < 0:
            negate_row(t)
        p = M[t][t]

        dirty = False
        for i in range(t + 1, m):
            a = M[i][t]
            if a:
                q = a // p
                if q:
                    row_sub(i, q, t)
                if M[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            a = M[t][j]
            if a:
                q = a // p
                if q:
                    col_sub(j, q, t)
                if M[t][j]:
                    dirty = True
        if dirty:
            continue

        # Row and column t are clear; enforce the divisibility chain.
        viol = None
        for i in range(t + 1, m):
            row = M[i]
            for j in range(t + 1, n):
                if row[j] % p:
                    viol = i
                    break
            if viol is not None:
                break
        if viol is not None:
            row_add(t, viol)
            continue
        t += 1

    diag = [M[i][i] for i in range(limit)]
    return diag, U, V, Ui, Vi


def hermite_rows(mat):
    """Canonical row Hermite basis of the lattice spanned by ``mat``'s rows.

    Returns the unique echelon basis: pivots positive, strictly increasing
    pivot columns, zero entries below each pivot, and entries above each
    pivot reduced into ``[0, pivot)``.  Zero rows are dropped, so the result
    may have fewer rows than the input.  Two generating sets span the same
    row lattice iff their Hermite bases are identical.
    """
    if not mat:
        return []
    n = len(mat[0])
    rows = [list(r) for r in mat if any(r)]
    basis = []  # finished pivot rows, pivot columns strictly increasing
    col = 0
    while col < n and rows:
        # Rows surviving to column `col` are zero in all earlier columns.
        active = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not active:
            col += 1
            continue
        # gcd cascade on column `col`
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            head = active[0]
            new_active = [head]
            for r in active[1:]:
                q = r[col] // head[col]
                r2 = [x - q * y for x, y in zip(r, head)]
                if r2[col]:
                    new_active.append(r2)
                elif any(r2):
                    rest.append(r2)
            active = new_active
        piv = active[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = rest
        col += 1
    # Reduce entries above each pivot into [0, pivot).  Ascending pivot
    # order: later pivot rows are zero in earlier pivot columns, so the
    # already-reduced entries stay put.
    for k in range(len(basis)):
        prow = basis[k]
        pcol = next(j for j, x in enumerate(prow) if x)
        p = prow[pcol]
        for r in basis[:k]:
            q = r[pcol] // p
            if q:
                for j in range(pcol, n):
                    r[j] -= q * prow[j]
    return basis
