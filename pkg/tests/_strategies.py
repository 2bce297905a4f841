"""Shared hypothesis strategies and small independent oracles for the tests."""

from itertools import combinations_with_replacement

import sympy
from hypothesis import strategies as st

from liaison.ideal import Ideal
from liaison.ring import Ring


def exponent_vectors(n, d):
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


@st.composite
def forms(draw, ring, degree, max_terms=4):
    mons = exponent_vectors(ring.num_vars, degree)
    chosen = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=max_terms, unique=True))
    coeffs = draw(st.lists(st.integers(1, ring.characteristic - 1), min_size=len(chosen), max_size=len(chosen)))
    return ring.from_dict(dict(zip(chosen, coeffs)))


@st.composite
def ideals(draw, ring, max_gens=3, max_degree=2):
    k = draw(st.integers(1, max_gens))
    gens = [draw(forms(ring, draw(st.integers(1, max_degree)))) for _ in range(k)]
    return Ideal(ring, gens)


@st.composite
def monomial_lists(draw, n, max_gens=4, max_degree=3):
    k = draw(st.integers(1, max_gens))
    return [tuple(draw(st.lists(st.integers(0, max_degree), min_size=n, max_size=n)))
            for _ in range(k)]


def to_sympy(poly):
    syms = sympy.symbols(f"x0:{poly.ring.num_vars}")
    return sympy.Poly(sympy.sympify(str(poly).replace("^", "**"), locals={str(s): s for s in syms}),
                      *syms, modulus=poly.ring.characteristic)


def sympy_groebner(ideal):
    syms = sympy.symbols(f"x0:{ideal.ring.num_vars}")
    exprs = [to_sympy(g).as_expr() for g in ideal.generators]
    return sympy.groebner(exprs, *syms, order="grevlex", modulus=ideal.ring.characteristic)


def rank_mod_p(rows, p):
    """Plain Gaussian elimination over GF(p) on lists of ints."""
    rows = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def slice_dim(ideal, d):
    """dim I_d from the span of generator times monomial products."""
    ring = ideal.ring
    mons = exponent_vectors(ring.num_vars, d)
    index = {m: i for i, m in enumerate(mons)}
    rows = []
    for g in ideal.generators:
        if g.degree > d:
            continue
        for m in exponent_vectors(ring.num_vars, d - g.degree):
            row = [0] * len(mons)
            for exps, c in g.exponents():
                row[index[tuple(a + b for a, b in zip(exps, m))]] = c
            rows.append(row)
    return rank_mod_p(rows, ring.characteristic) if rows else 0


SMALL = Ring(3, 101)


def koszul_betti(ideal, max_degree):
    """Betti numbers of ``ideal`` from Koszul homology ``Tor_i(R/I, k)_j``.

    Independent of the Schreyer machinery: only normal forms and ranks over GF(p).
    Index ``i`` is shifted by one so that ``0`` counts generators.
    """
    from itertools import combinations

    ring = ideal.ring
    n, p = ring.num_vars, ring.characteristic
    lead_ideal = [g.lead_monomial() for g in ideal.groebner]

    def standard(d):
        return [m for m in ring.monomials_of_degree(d) if not any(ring.divides(l, m) for l in lead_ideal)]

    std = {d: standard(d) for d in range(max_degree + 1)}
    wedge = {i: list(combinations(range(n), i)) for i in range(n + 1)}

    def basis(i, j):
        d = j - i
        if d < 0 or d > max_degree or i < 0 or i > n:
            return []
        return [(S, m) for S in wedge[i] for m in std[d]]

    def rank_of(i, j):
        src, tgt = basis(i, j), basis(i - 1, j)
        if not src or not tgt:
            return 0
        pos = {b: k for k, b in enumerate(tgt)}
        rows = []
        for S, m in src:
            row = [0] * len(tgt)
            for k, v in enumerate(S):
                rest = S[:k] + S[k + 1:]
                nf = ideal.normal_form(ring.var(v).shift(m))
                for mm, c in nf.terms.items():
                    row[pos[(rest, mm)]] += (-1) ** k * c
            rows.append(row)
        return rank_mod_p(rows, p)

    out = {}
    for i in range(1, n + 1):
        for j in range(i, max_degree + i):
            dim = len(basis(i, j)) - rank_of(i, j) - rank_of(i + 1, j)
            if dim:
                out[(i - 1, j)] = dim
    return out
