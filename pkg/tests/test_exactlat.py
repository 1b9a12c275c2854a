import random
from math import gcd

from hypothesis import given, settings, strategies as st

from tilefold.exactlat import (
    det,
    hermite_normal_form,
    hnf_basis,
    identity_matrix,
    in_row_lattice,
    integer_kernel,
    is_unimodular,
    mat_mul,
    mat_vec,
    primitive_vector,
    rational_rank,
    smith_invariants,
    smith_normal_form,
    solve_left_integer,
    solve_rational,
)

small_matrix = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


def is_row_hnf(h):
    pivots = []
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        p = nz[0]
        if pivots and p <= pivots[-1]:
            return False
        if row[p] <= 0:
            return False
        pivots.append(p)
    # entries above each pivot reduced into [0, pivot)
    for i, row in enumerate(h):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        p = nz[0]
        for k in range(i):
            if not (0 <= h[k][p] < row[p]):
                return False
    # zero rows at the bottom
    seen_zero = False
    for row in h:
        if not any(row):
            seen_zero = True
        elif seen_zero:
            return False
    return True


def row_lattices_equal(a, b):
    return all(in_row_lattice(b, tuple(r)) for r in a) and all(
        in_row_lattice(a, tuple(r)) for r in b
    )


class TestHermite:
    def test_identity(self):
        h, u = hermite_normal_form(identity_matrix(3))
        assert h == identity_matrix(3)
        assert u == identity_matrix(3)

    def test_worked_example(self):
        m = [[2, 4], [6, 8]]
        h, u = hermite_normal_form(m)
        assert h == [[2, 0], [0, 4]]
        assert mat_mul(u, m) == h
        assert is_unimodular(u)

    def test_weight_matrix_full_rank(self):
        from tilefold.quotientfan import COKERNEL_MATRIX

        h, u = hermite_normal_form(COKERNEL_MATRIX)
        pivot_rows = sum(1 for row in h if any(row))
        assert pivot_rows == 3
        assert rational_rank(COKERNEL_MATRIX) == 3

    @settings(max_examples=150, deadline=None)
    @given(small_matrix)
    def test_properties(self, m):
        h, u = hermite_normal_form(m)
        assert mat_mul(u, m) == h
        assert is_unimodular(u)
        assert is_row_hnf(h)
        assert row_lattices_equal(m, h)


def minor_gcd_invariants(m):
    # independent oracle: d_1...d_k = gcd of all k x k minors
    from itertools import combinations

    rows, cols = len(m), len(m[0])
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                sub = [[m[i][j] for j in ci] for i in ri]
                g = gcd(g, det(sub))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


class TestSmith:
    def test_zero(self):
        s, u, v = smith_normal_form([[0, 0], [0, 0]])
        assert s == [[0, 0], [0, 0]]

    def test_diag_2_3(self):
        m = [[2, 0], [0, 3]]
        s, u, v = smith_normal_form(m)
        assert s == [[1, 0], [0, 6]]
        assert mat_mul(mat_mul(u, m), v) == s
        assert is_unimodular(u) and is_unimodular(v)
        assert minor_gcd_invariants(m) == [1, 6]

    def test_divcalc_relation_matrix(self):
        from tilefold.divcalc import relation_vectors

        rels = [list(r) for r in relation_vectors()]
        assert len(rels) == 9 and len(rels[0]) == 21
        assert smith_invariants(rels) == [1] * 9
        assert rational_rank(rels) == 9

    @settings(max_examples=100, deadline=None)
    @given(small_matrix)
    def test_properties(self, m):
        s, u, v = smith_normal_form(m)
        assert mat_mul(mat_mul(u, m), v) == s
        assert is_unimodular(u) and is_unimodular(v)
        diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
        for i in range(len(diag) - 1):
            if diag[i + 1] != 0:
                assert diag[i] != 0 and diag[i + 1] % diag[i] == 0
        for i, row in enumerate(s):
            for j, x in enumerate(row):
                if i != j:
                    assert x == 0
        assert minor_gcd_invariants(m) == smith_invariants(m)

    @settings(max_examples=60, deadline=None)
    @given(small_matrix, st.randoms(use_true_random=False))
    def test_invariants_stable_under_unimodular(self, m, rng):
        rows, cols = len(m), len(m[0])

        def random_unimodular(n):
            u = identity_matrix(n)
            for _ in range(4):
                i, j = rng.randrange(n), rng.randrange(n)
                if i != j:
                    c = rng.randint(-2, 2)
                    for k in range(n):
                        u[i][k] += c * u[j][k]
            return u

        left = random_unimodular(rows)
        right = random_unimodular(cols)
        assert smith_invariants(mat_mul(mat_mul(left, m), right)) == smith_invariants(m)


class TestKernel:
    def test_identity(self):
        assert integer_kernel(identity_matrix(2)) == []

    def test_forced_primitive(self):
        assert integer_kernel([[1, 1]]) == [(1, -1)]

    def test_cokernel_matches_projection(self):
        from tilefold.quotientfan import COKERNEL_MATRIX, WEIGHT_MATRIX

        ker = integer_kernel(WEIGHT_MATRIX)
        assert len(ker) == 3
        # kernel of the weight matrix is the row lattice of the cokernel matrix
        assert row_lattices_equal([list(k) for k in ker], COKERNEL_MATRIX)

    @settings(max_examples=150, deadline=None)
    @given(small_matrix)
    def test_properties(self, m):
        ker = integer_kernel(m)
        cols = len(m[0])
        for v in ker:
            assert mat_vec(m, v) == tuple(0 for _ in m)
            assert primitive_vector(v) == v
        assert len(ker) == cols - rational_rank(m)
        # saturation: any integer kernel vector lies in the lattice
        if ker:
            rng = random.Random(0)
            coeffs = [rng.randint(-3, 3) for _ in ker]
            combo = tuple(
                sum(c * k[j] for c, k in zip(coeffs, ker)) for j in range(cols)
            )
            assert in_row_lattice([list(k) for k in ker], combo)


class TestSolvers:
    def test_solve_left(self):
        a = [[2, 0, 1], [0, 3, 1]]
        b = tuple(x + y for x, y in zip(a[0], a[1]))
        x = solve_left_integer(a, b)
        assert x == (1, 1)
        assert solve_left_integer(a, (1, 0, 0)) is None

    def test_solve_rational(self):
        x = solve_rational([[2, 0], [0, 4]], (1, 2))
        assert x is not None and [2 * x[0], 4 * x[1]] == [1, 2]
        assert solve_rational([[1, 1], [1, 1]], (0, 1)) is None

    def test_hnf_basis_canonical(self):
        assert hnf_basis([(-1, 1)]) == [(1, -1)]
        assert hnf_basis([(2, 0), (0, 2), (1, 1)]) == [(1, 1), (0, 2)]
