"""Pure-Python inner loops.

Reference implementation of the functions in ``_ckernels.pyx``; the two
modules must stay behaviourally identical (``tests/test_kernels.py`` runs
both).  Matrices are lists/tuples of rows holding Python ints, Fractions or
floats; nothing here assumes a fixed-width type.
"""


def triangle_violations(D, tol):
    """All ``(i, j, k)`` with ``i < k``, ``j`` distinct from both, and
    ``D[i][k] > D[i][j] + D[j][k] + tol``."""
    n = len(D)
    out = []
    for i in range(n):
        Di = D[i]
        for k in range(i + 1, n):
            dik = Di[k]
            for j in range(n):
                if j == i or j == k:
                    continue
                if dik > Di[j] + D[j][k] + tol:
                    out.append((i, j, k))
    return out


def segment_members(D, x, y, tol):
    """Indices ``z`` with ``D[x][z] + D[z][y] - D[x][y] <= tol``."""
    Dx, Dy = D[x], D[y]
    dxy = Dx[y]
    return [z for z in range(len(D)) if Dx[z] + Dy[z] - dxy <= tol]


def excess_row(D, x, y):
    """``D[x][z] + D[z][y] - D[x][y]`` for every ``z``."""
    Dx, Dy = D[x], D[y]
    dxy = Dx[y]
    return [Dx[z] + Dy[z] - dxy for z in range(len(D))]


def max_ratio(values, D):
    """Maximise ``|values[i] - values[j]| / D[i][j]`` over ``i < j``.

    Returns ``(num, den, i, j)``; ties go to the lexicographically smallest
    pair.  ``(0, 1, -1, -1)`` when every difference vanishes.
    """
    n = len(values)
    bn, bd, bi, bj = 0, 1, -1, -1
    for i in range(n):
        vi = values[i]
        Di = D[i]
        for j in range(i + 1, n):
            num = vi - values[j]
            if num < 0:
                num = -num
            if num == 0:
                continue
            den = Di[j]
            if num * bd > bn * den:
                bn, bd, bi, bj = num, den, i, j
    return bn, bd, bi, bj


def pivot(T, r, c, det):
    """Fraction-free (integer-preserving) pivot on ``T[r][c]`` in place.

    ``T`` holds integers equal to the true tableau times ``det``.  After the
    pivot they equal the new tableau times the returned determinant
    ``T[r][c]``; every division is exact.
    """
    row = T[r]
    p = row[c]
    width = len(row)
    for i in range(len(T)):
        if i == r:
            continue
        Ti = T[i]
        f = Ti[c]
        if f == 0:
            for j in range(width):
                Ti[j] = (p * Ti[j]) // det
        else:
            for j in range(width):
                Ti[j] = (p * Ti[j] - f * row[j]) // det
    return p


def ratio_test(T, c, rhs, basis, rows):
    """Bland ratio test over ``rows``: minimise ``T[i][rhs] / T[i][c]`` for
    ``T[i][c] > 0``; ties broken by smaller basic variable index.
    Returns the row index or ``-1`` (unbounded)."""
    best = -1
    bn = bd = 0
    for i in rows:
        a = T[i][c]
        if a <= 0:
            continue
        b = T[i][rhs]
        if best < 0:
            best, bn, bd = i, b, a
            continue
        lhs = b * bd
        rhs_ = bn * a
        if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
            best, bn, bd = i, b, a
    return best
