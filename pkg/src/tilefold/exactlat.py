"""Exact integer and rational linear algebra.

All matrices are lists (or tuples) of rows of Python ints, so every
computation here is arbitrary precision by construction.  Rationals are
`fractions.Fraction`.  These routines back every other module: normal
forms for lattice computations, kernels for subtorus inclusions, and
exact rank/solve for membership tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vector = tuple[int, ...]
Matrix = list[list[int]]


def copy_matrix(m) -> Matrix:
    return [list(row) for row in m]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matrix_shape(m) -> tuple[int, int]:
    rows = len(m)
    if rows == 0:
        raise ValueError("empty matrix")
    cols = len(m[0])
    if any(len(row) != cols for row in m):
        raise ValueError("ragged matrix")
    return rows, cols


def transpose(m) -> Matrix:
    rows, cols = matrix_shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def mat_mul(a, b) -> Matrix:
    ra, ca = matrix_shape(a)
    rb, cb = matrix_shape(b)
    if ca != rb:
        raise ValueError("shape mismatch in mat_mul")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v) -> Vector:
    rows, cols = matrix_shape(m)
    if len(v) != cols:
        raise ValueError("shape mismatch in mat_vec")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def dot(u, v) -> int:
    if len(u) != len(v):
        raise ValueError("length mismatch in dot")
    return sum(x * y for x, y in zip(u, v))


def gcd_vector(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def primitive_vector(v) -> Vector:
    """Divide an integer vector by the gcd of its entries (direction kept)."""
    g = gcd_vector(v)
    if g == 0:
        return tuple(0 for _ in v)
    return tuple(x // g for x in v)


def scale_to_primitive_integer(v) -> Vector:
    """Primitive integer vector with the same direction as a rational vector."""
    den = 1
    for x in v:
        f = Fraction(x)
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    return primitive_vector(ints)


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b), g >= 0."""
    x_prev, x_cur = 1, 0
    y_prev, y_cur = 0, 1
    g_prev, g_cur = a, b
    while g_cur:
        q = g_prev // g_cur
        g_prev, g_cur = g_cur, g_prev - q * g_cur
        x_prev, x_cur = x_cur, x_prev - q * x_cur
        y_prev, y_cur = y_cur, y_prev - q * y_cur
    if g_prev < 0:
        g_prev, x_prev, y_prev = -g_prev, -x_prev, -y_prev
    return g_prev, x_prev, y_prev


def hermite_normal_form(m) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns (h, u) with u unimodular, u @ m == h, pivots positive and the
    entries above every pivot reduced into [0, pivot).  This is the single
    canonical form used to deduplicate lattice objects repository-wide.
    """
    rows, cols = matrix_shape(m)
    h = copy_matrix(m)
    u = identity_matrix(rows)
    pivot_row = 0
    for col in range(cols):
        if pivot_row >= rows:
            break
        # Clear the column below pivot_row with unimodular row operations.
        nz = [i for i in range(pivot_row, rows) if h[i][col] != 0]
        if not nz:
            continue
        if nz[0] != pivot_row:
            _swap_rows(h, pivot_row, nz[0])
            _swap_rows(u, pivot_row, nz[0])
        for i in range(pivot_row + 1, rows):
            if h[i][col] == 0:
                continue
            a, b = h[pivot_row][col], h[i][col]
            g, x, y = _xgcd(a, b)
            a_g, b_g = a // g, b // g
            hp, hi = h[pivot_row], h[i]
            up, ui = u[pivot_row], u[i]
            for k in range(cols):
                hp[k], hi[k] = x * hp[k] + y * hi[k], -b_g * hp[k] + a_g * hi[k]
            for k in range(rows):
                up[k], ui[k] = x * up[k] + y * ui[k], -b_g * up[k] + a_g * ui[k]
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        piv = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // piv
            if q:
                h[i] = [a - q * b for a, b in zip(h[i], h[pivot_row])]
                u[i] = [a - q * b for a, b in zip(u[i], u[pivot_row])]
        pivot_row += 1
    return h, u


def hnf_basis(vectors, length: int | None = None) -> list[Vector]:
    """Canonical (HNF, no zero rows) basis of the lattice spanned by vectors."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    if length is None:
        length = len(vectors[0])
    h, _ = hermite_normal_form(vectors)
    return [tuple(row) for row in h if any(row)]


def smith_normal_form(m) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: (s, u, v) with u @ m @ v == s diagonal, d_i | d_{i+1}."""
    rows, cols = matrix_shape(m)
    s = copy_matrix(m)
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def clear_position(t: int) -> None:
        while True:
            # Move a nonzero entry of minimal absolute value to (t, t).
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return
            bi, bj = best
            if bi != t:
                _swap_rows(s, t, bi)
                _swap_rows(u, t, bi)
            if bj != t:
                for row in s:
                    row[t], row[bj] = row[bj], row[t]
                for row in v:
                    row[t], row[bj] = row[bj], row[t]
            piv = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = s[i][t] // piv
                if q:
                    s[i] = [a - q * b for a, b in zip(s[i], s[t])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[t])]
                if s[i][t] != 0:
                    dirty = True
            for j in range(t + 1, cols):
                q = s[t][j] // piv
                if q:
                    for row in s:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                if s[t][j] != 0:
                    dirty = True
            if dirty:
                continue
            # Enforce that the pivot divides every remaining entry.
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if s[i][j] % piv != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                return
            s[t] = [a + b for a, b in zip(s[t], s[offender])]
            u[t] = [a + b for a, b in zip(u[t], u[offender])]

    for t in range(min(rows, cols)):
        clear_position(t)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return s, u, v


def smith_invariants(m) -> list[int]:
    s, _, _ = smith_normal_form(m)
    rows, cols = matrix_shape(m)
    return [s[i][i] for i in range(min(rows, cols)) if s[i][i] != 0]


def integer_kernel(m) -> list[Vector]:
    """Saturated lattice basis of {v : m @ v == 0}, each vector primitive.

    The basis is returned in Hermite normal form, the canonical choice.
    Basis vectors of a saturated lattice are automatically primitive.
    """
    rows, cols = matrix_shape(m)
    h, u = hermite_normal_form(transpose(m))
    raw = [u[i] for i in range(cols) if not any(h[i])]
    return hnf_basis(raw, cols)


def rational_rank(m) -> int:
    """Rank over Q by fraction-free Gaussian elimination (independent of HNF)."""
    rows, cols = matrix_shape(m)
    a = copy_matrix(m)
    rank = 0
    row = 0
    for col in range(cols):
        piv = None
        for i in range(row, rows):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        _swap_rows(a, row, piv)
        for i in range(row + 1, rows):
            if a[i][col] != 0:
                f, g = a[row][col], a[i][col]
                a[i] = [f * x - g * y for x, y in zip(a[i], a[row])]
        rank += 1
        row += 1
        if row == rows:
            break
    return rank


def det(m) -> int:
    """Determinant of a square integer matrix (Bareiss, exact)."""
    n, cols = matrix_shape(m)
    if n != cols:
        raise ValueError("determinant of a non-square matrix")
    a = copy_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            _swap_rows(a, k, piv)
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m) -> bool:
    try:
        return abs(det(m)) == 1
    except ValueError:
        return False


def solve_left_integer(a, b):
    """Integer x with x @ a == b, or None.  Decides row-lattice membership."""
    rows, cols = matrix_shape(a)
    if len(b) != cols:
        raise ValueError("shape mismatch in solve_left_integer")
    h, u = hermite_normal_form(a)
    # Solve y @ h == b by forward substitution on the staircase of h.
    y = [0] * rows
    residue = list(b)
    for i in range(rows):
        piv_col = next((j for j in range(cols) if h[i][j] != 0), None)
        if piv_col is None:
            break
        if residue[piv_col] % h[i][piv_col] != 0:
            return None
        q = residue[piv_col] // h[i][piv_col]
        y[i] = q
        if q:
            residue = [r - q * hv for r, hv in zip(residue, h[i])]
    if any(residue):
        return None
    return tuple(sum(y[i] * u[i][k] for i in range(rows)) for k in range(rows))


def in_row_lattice(a, b) -> bool:
    return solve_left_integer(a, b) is not None


def solve_rational(a, b):
    """Solution x (tuple of Fractions) of a @ x == b over Q, or None."""
    rows, cols = matrix_shape(a)
    if len(b) != rows:
        raise ValueError("shape mismatch in solve_rational")
    aug = [[Fraction(x) for x in row] + [Fraction(bb)] for row, bb in zip(a, b)]
    pivots = []
    row = 0
    for col in range(cols):
        piv = next((i for i in range(row, rows) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for i in range(rows):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, rows):
        if aug[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, col in enumerate(pivots):
        x[col] = aug[r][cols]
    return tuple(x)


def orthogonal_complement_projection(v, basis):
    """Component of v orthogonal to span(basis), as a tuple of Fractions.

    Used to canonicalize cone data modulo lineality: the orthogonal component
    of a ray representative is independent of the representative chosen.
    """
    if not basis:
        return tuple(Fraction(x) for x in v)
    gram = [[dot(bi, bj) for bj in basis] for bi in basis]
    rhs = [dot(bi, v) for bi in basis]
    coeffs = solve_rational(gram, rhs)
    assert coeffs is not None  # Gram matrix of independent vectors
    out = [Fraction(x) for x in v]
    for c, b in zip(coeffs, basis):
        if c:
            out = [o - c * bb for o, bb in zip(out, b)]
    return tuple(out)
