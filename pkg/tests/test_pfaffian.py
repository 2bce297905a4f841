from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from liaison.ideal import Ideal, ideal_quotient
from liaison.liaison import is_regular_sequence, least_ci_degrees
from liaison.pfaffian import (PfaffianError, SkewSymmetricMatrix, annihilates, buchsbaum_eisenbud_ideal,
                              check_pf_squared, determinant, even_principal_submatrices, pfaffian,
                              random_be_matrix, submaximal_pfaffians, watanabe_u)
from liaison.resolution import BettiTable, betti_table
from liaison.ring import Ring, random_form

R = Ring()
P = R.characteristic


def random_alternating(size, degree, seed):
    rng = np.random.default_rng(seed)
    rows = [[R.zero()] * size for _ in range(size)]
    for i, j in combinations(range(size), 2):
        e = random_form(R, degree, rng)
        rows[i][j], rows[j][i] = e, -e
    return rows


def matching_pfaffian(a, idx=None):
    """Pfaffian of an integer matrix as a signed sum over perfect matchings."""
    idx = list(range(len(a))) if idx is None else idx
    if not idx:
        return 1
    first, rest = idx[0], idx[1:]
    total = 0
    for pos, j in enumerate(rest):
        sign = -1 if pos % 2 else 1
        total += sign * a[first][j] * matching_pfaffian(a, rest[:pos] + rest[pos + 1:])
    return total % P


def evaluate(rows, point):
    return [[e.evaluate(point) for e in r] for r in rows]


def test_small_pfaffians():
    a = R.parse("x0 + x1")
    assert pfaffian([[R.zero(), a], [-a, R.zero()]]) == a
    entries = {k: R.var(k % 4) * (k + 1) for k in range(6)}
    a12, a13, a14, a23, a24, a34 = (entries[k] for k in range(6))
    z = R.zero()
    M = [[z, a12, a13, a14], [-a12, z, a23, a24], [-a13, -a23, z, a34], [-a14, -a24, -a34, z]]
    assert pfaffian(M) == a12 * a34 - a13 * a24 + a14 * a23


def test_rejects_non_alternating():
    with pytest.raises(PfaffianError):
        pfaffian([[R.one(), R.zero()], [R.zero(), R.zero()]])
    with pytest.raises(PfaffianError):
        SkewSymmetricMatrix.from_upper(R, 4, [R.var(0)] * 6)


@pytest.mark.parametrize("seed", range(10))
def test_pf_squared_is_det_size_6(seed):
    rows = random_alternating(6, 1, seed)
    pf = pfaffian(rows, R)
    assert pf * pf == determinant(rows, R)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 4, 6, 8]), st.integers(0, 2**32))
def test_pf_squared_at_points(size, seed):
    rows = random_alternating(size, 1, seed)
    rng = np.random.default_rng(seed)
    point = [int(v) for v in rng.integers(0, P, size=4)]
    a = evaluate(rows, point)
    pf = pfaffian(rows, R)
    assert pf.evaluate(point) == matching_pfaffian(a)
    det = int(sympy.Matrix(a).det()) % P
    assert pf.evaluate(point) ** 2 % P == det
    assert determinant(rows, R).evaluate(point) == det


def test_pf_squared_size_8_exact():
    M = random_be_matrix(R, 9, [1] * 9, 3)
    assert check_pf_squared(M, list(range(8)))


def test_submaximal_examples():
    a, b, c = R.gens()[:3]
    M = SkewSymmetricMatrix.from_upper(R, 3, [a, b, c])
    assert submaximal_pfaffians(M) == [c, -b, a]
    assert buchsbaum_eisenbud_ideal(M) == Ideal(R, [a, b, c])


@pytest.mark.parametrize("s,pattern", [(5, [1] * 5), (5, [1, 1, 1, 2, 2]), (7, [1] * 7),
                                       (7, [1, 1, 1, 1, 1, 2, 2])])
def test_generic_be_ideals(s, pattern):
    M = random_be_matrix(R, s, pattern, 11)
    pfs = submaximal_pfaffians(M)
    assert annihilates(M, pfs)
    I = buchsbaum_eisenbud_ideal(M)
    assert I.codimension() == 3
    table = betti_table(I)
    assert table.length() == 3 and table.ranks() == [s, s, 1]
    assert table.is_self_dual()
    assert table.generator_degrees() == sorted(M.generator_degrees())


def test_seven_by_seven_linear_table():
    I = buchsbaum_eisenbud_ideal(random_be_matrix(R, 7, [1] * 7, 1))
    assert betti_table(I) == BettiTable.from_shape({0: {3: 7}, 1: {4: 7}, 2: {7: 1}})


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 2**32))
def test_annihilation_random(s, seed):
    M = random_be_matrix(R, s, [1] * s, seed)
    assert annihilates(M, submaximal_pfaffians(M))


def test_random_be_matrix_determinism():
    A = random_be_matrix(R, 5, [1] * 5, 1)
    B = random_be_matrix(R, 5, [1] * 5, 1)
    assert A == B and A.to_text() == B.to_text()
    assert len(buchsbaum_eisenbud_ideal(A).groebner) >= 5
    from liaison.liaison import mu
    assert mu(buchsbaum_eisenbud_ideal(A)) == 5
    C = random_be_matrix(R, 3, [1] * 3, 5)
    assert is_regular_sequence(submaximal_pfaffians(C))


def test_watanabe_u_single_entry():
    M = random_be_matrix(R, 5, [1] * 5, 2)
    u, ok = watanabe_u(M, 0, 1, 2)
    assert ok and u == M.entry(3, 4)
    assert watanabe_u(random_be_matrix(R, 3, [1] * 3, 2), 0, 1, 2) == (R.one(), False)
    with pytest.raises(PfaffianError):
        watanabe_u(M, 0, 0, 1)


@pytest.mark.parametrize("pattern", [[1] * 5, [1, 1, 1, 2, 2], [1] * 7])
def test_watanabe_colon_identity(pattern):
    M = random_be_matrix(R, len(pattern), pattern, 7)
    I = buchsbaum_eisenbud_ideal(M)
    pfs = submaximal_pfaffians(M)
    checked = 0
    for i, j, k in combinations(range(M.size), 3):
        trio = [pfs[i], pfs[j], pfs[k]]
        if not is_regular_sequence(trio):
            continue
        u, _ = watanabe_u(M, i, j, k)
        c = Ideal(R, trio)
        assert ideal_quotient(c, I) == Ideal(R, trio + [u])
        checked += 1
        if checked == 4:
            break
    assert checked


@pytest.mark.parametrize("k", range(20))
def test_u_below_g_degree_bound(k):
    patterns = [[1] * 5, [1, 1, 1, 2, 2], [1, 2, 2, 2, 2], [1] * 7, [1, 1, 1, 1, 1, 2, 2]]
    pattern = patterns[k % len(patterns)]
    M, _ = random_be_matrix(R, len(pattern), pattern, 500 + k).canonical()
    I = buchsbaum_eisenbud_ideal(M)
    pfs = submaximal_pfaffians(M)
    least = least_ci_degrees(I, 3)
    found = 0
    for i, j, k3 in combinations(range(M.size), 3):
        trio = sorted([pfs[i], pfs[j], pfs[k3]], key=lambda q: q.degree)
        if tuple(q.degree for q in trio) != least or not is_regular_sequence(trio):
            continue
        u, _ = watanabe_u(M, i, j, k3)
        assert u.degree < trio[1].degree
        found += 1
    assert found


def test_even_principal_submatrices():
    M = random_be_matrix(R, 5, [1] * 5, 1)
    subs = even_principal_submatrices(M)
    assert len(subs) == 5 + 10
    assert all(check_pf_squared(M, keep) for keep in subs[:5])


def test_matrix_text_round_trip():
    M = random_be_matrix(R, 5, [1, 1, 1, 2, 2], 4)
    N = SkewSymmetricMatrix.from_text(M.to_text())
    assert N == M
    assert all(N.entry_degree(i, j) == M.entry_degree(i, j) for i, j in combinations(range(5), 2))
    C, perm = M.canonical()
    assert list(C.row_degrees) == sorted(M.row_degrees)
    assert sorted(perm) == list(range(5))
