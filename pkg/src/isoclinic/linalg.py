"""Generic exact linear algebra over any field-like scalar type.

Matrices are lists of row lists; vectors are lists.  Entries may be
Fraction, Cyc, or complex — anything supporting +, -, *, /, bool and ==.
`zero`/`one` default to Fraction and coerce into richer scalar types via
the operators.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def _nz(x) -> bool:
    """Nonzero test that tolerates float noise in floating mode."""
    if isinstance(x, complex):
        return abs(x) > 1e-10
    return bool(x)


# ---------------------------------------------------------------------------
# basic matrix/vector ops


def mat_zeros(r, c):
    return [[ZERO] * c for _ in range(r)]


def mat_identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[_dot(row, col) for col in bt] for row in a]


def _dot(u, v):
    s = ZERO
    for x, y in zip(u, v):
        if _nz(x) and _nz(y):
            s = s + x * y
    return s


def mat_vec(a, v):
    return [_dot(row, v) for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def vec_add(u, v):
    return [x + y for x, y in zip(u, v)]


def vec_sub(u, v):
    return [x - y for x, y in zip(u, v)]


def vec_scale(u, c):
    return [c * x for x in u]


def vec_is_zero(u):
    return not any(_nz(x) for x in u)


def transpose(a):
    return [list(r) for r in zip(*a)]


def trace(a):
    s = ZERO
    for i in range(len(a)):
        s = s + a[i][i]
    return s


# ---------------------------------------------------------------------------
# elimination


def rref(mat):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(r) for r in mat]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if _nz(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(nr):
            if i != r and _nz(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows, pivots


def rank(mat):
    if not mat:
        return 0
    return len(rref(mat)[1])


def nullspace(mat, ncols=None):
    """Basis of {x : mat @ x = 0}; mat has `ncols` columns (needed if empty)."""
    if not mat:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    nc = len(mat[0])
    rows, pivots = rref(mat)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * nc
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve(mat, b):
    """One solution of mat @ x = b, or None if inconsistent."""
    if not mat:
        return None
    nc = len(mat[0])
    aug = [list(r) + [bv] for r, bv in zip(mat, b)]
    rows, pivots = rref(aug)
    if nc in pivots:
        return None
    x = [ZERO] * nc
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][nc]
    return x


def inverse(mat):
    n = len(mat)
    aug = [list(r) + list(ir) for r, ir in zip(mat, mat_identity(n))]
    rows, pivots = rref(aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in rows[:n]]


def det(mat):
    n = len(mat)
    rows = [list(r) for r in mat]
    d = ONE
    for c in range(n):
        piv = None
        for i in range(c, n):
            if _nz(rows[i][c]):
                piv = i
                break
        if piv is None:
            return ZERO * d
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        d = d * rows[c][c]
        inv = rows[c][c]
        for i in range(c + 1, n):
            if _nz(rows[i][c]):
                f = rows[i][c] / inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def char_poly(mat):
    """Monic characteristic polynomial of a square matrix.

    Faddeev–LeVerrier; returns coefficients low-to-high, length n+1,
    with leading coefficient 1: p(x) = sum c_k x^k, c_n = 1.
    """
    n = len(mat)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    m = mat_identity(n)
    c = ONE
    for k in range(1, n + 1):
        m = mat_mul(mat, m)
        c = trace(m) * Fraction(-1, k)
        coeffs[n - k] = c
        for i in range(n):
            m[i][i] = m[i][i] + c
    return coeffs


# ---------------------------------------------------------------------------
# span arithmetic


def row_space_basis(vectors):
    """Deterministic basis (RREF rows) of the span of the given vectors."""
    vecs = [v for v in vectors if any(_nz(x) for x in v)]
    if not vecs:
        return []
    rows, pivots = rref(vecs)
    return rows[: len(pivots)]


def in_span(vectors, v):
    if vec_is_zero(v):
        return True
    if not vectors:
        return False
    cols = transpose(vectors)
    return solve(cols, v) is not None


def coordinates_in_basis(basis, v):
    """Coordinates of v in the given (independent) spanning set, or None."""
    if not basis:
        return [] if vec_is_zero(v) else None
    return solve(transpose(basis), v)


def intersect_spans(a, b):
    """Basis of span(a) ∩ span(b)."""
    if not a or not b:
        return []
    n = len(a[0])
    # solve sum x_i a_i = sum y_j b_j  <=>  [A^T | -B^T] (x,y)^T = 0
    rows = []
    for i in range(n):
        rows.append([u[i] for u in a] + [-w[i] for w in b])
    sols = nullspace(rows)
    vecs = []
    for s in sols:
        x = s[: len(a)]
        v = [ZERO] * n
        for xi, u in zip(x, a):
            if _nz(xi):
                v = vec_add(v, vec_scale(u, xi))
        if not vec_is_zero(v):
            vecs.append(v)
    return row_space_basis(vecs)


# ---------------------------------------------------------------------------
# dense univariate polynomials over a field (lists, low-to-high)


def poly_trim(p):
    while len(p) > 1 and not _nz(p[-1]):
        p = p[:-1]
    return list(p)


def poly_add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else ZERO
        b = q[i] if i < len(q) else ZERO
        out.append(a + b)
    return poly_trim(out)


def poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if _nz(a):
            for j, b in enumerate(q):
                if _nz(b):
                    out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_scale(p, c):
    return poly_trim([c * a for a in p])


def poly_divmod(p, q):
    p = poly_trim(p)
    q = poly_trim(q)
    if len(q) == 1 and not _nz(q[0]):
        raise ZeroDivisionError
    rem = list(p)
    if len(p) < len(q):
        return [ZERO], rem
    quot = [ZERO] * (len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(p) - len(q), -1, -1):
        c = rem[i + len(q) - 1] / lead
        quot[i] = c
        if _nz(c):
            for j, b in enumerate(q):
                rem[i + j] = rem[i + j] - c * b
    return poly_trim(quot), poly_trim(rem)


def poly_gcd(p, q):
    a, b = poly_trim(p), poly_trim(q)
    while _nz(b[-1]) or len(b) > 1:
        _, r = poly_divmod(a, b)
        a, b = b, poly_trim(r)
        if len(b) == 1 and not _nz(b[0]):
            break
    # monic normalization
    if _nz(a[-1]):
        a = [c / a[-1] for c in a]
    return a


def poly_xgcd(p, q):
    """(g, s, t) with s*p + t*q = g, g monic."""
    a, b = poly_trim(p), poly_trim(q)
    sa, sb = [ONE], [ZERO]
    ta, tb = [ZERO], [ONE]
    while _nz(b[-1]) or len(b) > 1:
        quo, rem = poly_divmod(a, b)
        a, b = b, poly_trim(rem)
        sa, sb = sb, poly_add(sa, poly_scale(poly_mul(quo, sb), -ONE))
        ta, tb = tb, poly_add(ta, poly_scale(poly_mul(quo, tb), -ONE))
        if len(b) == 1 and not _nz(b[0]):
            break
    if _nz(a[-1]):
        lead = a[-1]
        a = [c / lead for c in a]
        sa = [c / lead for c in sa]
        ta = [c / lead for c in ta]
    return a, sa, ta


def poly_derivative(p):
    if len(p) == 1:
        return [ZERO]
    return poly_trim([i * c for i, c in enumerate(p)][1:])


def poly_eval(p, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_matrix(p, mat):
    n = len(mat)
    acc = mat_zeros(n, n)
    for c in reversed(p):
        acc = mat_mul(acc, mat)
        for i in range(n):
            acc[i][i] = acc[i][i] + c
    return acc


def squarefree_part(p):
    """p / gcd(p, p') — the radical of a univariate polynomial."""
    g = poly_gcd(p, poly_derivative(p))
    q, r = poly_divmod(p, g)
    assert poly_trim(r) == [ZERO] or not _nz(poly_trim(r)[-1])
    return poly_trim(q)
