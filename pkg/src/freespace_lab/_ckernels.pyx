# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the loops in ``_pykernels``.

Entries stay Python objects (arbitrary-precision ints, Fractions, floats) so
results are bit-identical to the pure-Python path; the gain comes from
removing interpreter dispatch around the loops.
"""


def triangle_violations(D, tol):
    cdef Py_ssize_t n = len(D)
    cdef Py_ssize_t i, j, k
    cdef list out = []
    cdef object Di, dik
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


def segment_members(D, Py_ssize_t x, Py_ssize_t y, tol):
    cdef object Dx = D[x]
    cdef object Dy = D[y]
    cdef object dxy = Dx[y]
    cdef Py_ssize_t z, n = len(D)
    cdef list out = []
    for z in range(n):
        if Dx[z] + Dy[z] - dxy <= tol:
            out.append(z)
    return out


def excess_row(D, Py_ssize_t x, Py_ssize_t y):
    cdef object Dx = D[x]
    cdef object Dy = D[y]
    cdef object dxy = Dx[y]
    cdef Py_ssize_t z, n = len(D)
    return [Dx[z] + Dy[z] - dxy for z in range(n)]


def max_ratio(values, D):
    cdef Py_ssize_t n = len(values)
    cdef Py_ssize_t i, j, bi = -1, bj = -1
    cdef object bn = 0, bd = 1, vi, Di, num, den
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
                bn = num
                bd = den
                bi = i
                bj = j
    return bn, bd, bi, bj


def pivot(list T, Py_ssize_t r, Py_ssize_t c, det):
    cdef list row = T[r]
    cdef object p = row[c]
    cdef Py_ssize_t width = len(row)
    cdef Py_ssize_t i, j, m = len(T)
    cdef list Ti
    cdef object f
    for i in range(m):
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


def ratio_test(list T, Py_ssize_t c, Py_ssize_t rhs, basis, rows):
    cdef Py_ssize_t best = -1
    cdef object bn = 0, bd = 0, a, b, lhs, rr
    cdef Py_ssize_t i
    for i in rows:
        a = T[i][c]
        if a <= 0:
            continue
        b = T[i][rhs]
        if best < 0:
            best = i
            bn = b
            bd = a
            continue
        lhs = b * bd
        rr = bn * a
        if lhs < rr or (lhs == rr and basis[i] < basis[best]):
            best = i
            bn = b
            bd = a
    return best
