"""Small dense exact linear algebra over any of the supported element types.

Matrices are lists of rows.  ``zero``/``one`` are passed explicitly so the
same code runs on Fractions, residues mod p and real quadratic elements.
"""

from __future__ import annotations


def identity(n, zero, one):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matmul(a, b, zero):
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            s = zero
            for x, y in zip(row, col):
                s = s + x * y
            out_row.append(s)
        out.append(out_row)
    return out


def matvec(a, v, zero):
    out = []
    for row in a:
        s = zero
        for x, y in zip(row, v):
            s = s + x * y
        out.append(s)
    return out


def congruence(p, g, zero):
    """P^T g P."""
    return matmul(matmul(transpose(p), g, zero), p, zero)


def rref(a):
    """Reduced row echelon form and pivot columns (input untouched)."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def solve_affine(a, b, zero, one):
    """Solutions of a x = b as (particular, nullspace basis), or None."""
    cols = len(a[0])
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    m, pivots = rref(aug)
    if cols in pivots:
        return None
    x0 = [zero] * cols
    for i, c in enumerate(pivots):
        x0[c] = m[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for i, c in enumerate(pivots):
            v[c] = zero - m[i][f]
        basis.append(v)
    return x0, basis


def inverse(a, zero, one):
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(n, zero, one))]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]
