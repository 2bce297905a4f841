"""Hilbert series of monomial ideals by recursive pivoting.

For a monomial ideal ``M`` in ``n`` variables the Hilbert series of ``R/M``
is ``K(t) / (1 - t)^n``; :func:`kpoly` returns the coefficient list of the
K-polynomial ``K``.  A pivot monomial ``q`` splits the computation through
``K(M) = K(M + (q)) + t^deg(q) * K(M : q)``.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, List, Sequence, Tuple

Mono = Tuple[int, ...]


def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimalize(gens: Sequence[Mono]) -> List[Mono]:
    """Minimal monomial generators, sorted."""
    uniq = sorted(set(gens), key=lambda m: (sum(m), m))
    out: List[Mono] = []
    for g in uniq:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def _poly_add(a: List[int], b: List[int], shift: int = 0) -> List[int]:
    n = max(len(a), len(b) + shift)
    out = a + [0] * (n - len(a))
    for i, c in enumerate(b):
        out[i + shift] += c
    return out


def _trim(a: List[int]) -> List[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _coprime_product(gens: Sequence[Mono]) -> List[int]:
    out = [1]
    for g in gens:
        out = _poly_add(out, [-c for c in out], sum(g))
    return _trim(out)


def _pairwise_coprime(gens: Sequence[Mono]) -> bool:
    n = len(gens[0]) if gens else 0
    seen = [False] * n
    for g in gens:
        for i, e in enumerate(g):
            if e:
                if seen[i]:
                    return False
                seen[i] = True
    return True


def _colon(gens: Sequence[Mono], q: Mono) -> List[Mono]:
    return minimalize([tuple(max(a - b, 0) for a, b in zip(g, q)) for g in gens])


def _kpoly(gens: FrozenSet[Mono], cache: Dict[FrozenSet[Mono], List[int]]) -> List[int]:
    hit = cache.get(gens)
    if hit is not None:
        return hit
    glist = sorted(gens)
    if not glist:
        res = [1]
    elif any(sum(g) == 0 for g in glist):
        res = [0]
    elif _pairwise_coprime(glist):
        res = _coprime_product(glist)
    else:
        # Pivot on the variable occurring in the most generators, power = median exponent.
        n = len(glist[0])
        mixed = [g for g in glist if sum(1 for x in g if x) > 1]
        counts = [sum(1 for g in mixed if g[i]) for i in range(n)]
        v = max(range(n), key=lambda i: counts[i])
        exps = sorted(g[v] for g in glist if g[v])
        e = exps[len(exps) // 2]
        pure = [g[v] for g in glist if g[v] and sum(g) == g[v]]
        if pure:
            e = min(e, pure[0] - 1)
        q = tuple(e if i == v else 0 for i in range(n))
        plus = frozenset(minimalize(glist + [q]))
        colon = frozenset(_colon(glist, q))
        res = _poly_add(_kpoly(plus, cache), _kpoly(colon, cache), e)
        res = _trim(res)
    cache[gens] = res
    return res


def kpoly(gens: Sequence[Mono]) -> List[int]:
    """K-polynomial coefficients (index = degree) of ``R/(gens)``."""
    return _kpoly(frozenset(minimalize(gens)), {})


def reduce_series(numerator: Sequence[int], num_vars: int) -> Tuple[List[int], int]:
    """Divide ``numerator/(1-t)^num_vars`` down to ``h(t)/(1-t)^dim`` with ``h(1) != 0``."""
    h = list(numerator)
    dim = num_vars
    if not any(h):
        return [0], 0
    while dim > 0 and sum(h) == 0:
        # synthetic division by (1 - t): q_i = sum_{k<=i} h_k
        q = []
        acc = 0
        for c in h[:-1]:
            acc += c
            q.append(acc)
        h = _trim(q) if q else [0]
        dim -= 1
    return h, dim


def hilbert_function(numerator: Sequence[int], num_vars: int, degree: int) -> int:
    """Coefficient of ``t^degree`` in ``numerator/(1-t)^num_vars``."""
    from math import comb

    total = 0
    for i, c in enumerate(numerator):
        k = degree - i
        if k >= 0 and c:
            total += c * comb(k + num_vars - 1, num_vars - 1)
    return total
