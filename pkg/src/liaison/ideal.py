"""Homogeneous ideals and the ideal-theoretic operations built on Groebner bases."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .groebner import Basis, basis_from_elements, groebner_with_minimal
from .hilbert import hilbert_function, kpoly, reduce_series
from .kernel import kernel
from .ring import IDX_BITS, Polynomial, Ring, RingError

SATURATION_CAP = 50


class IdealError(ValueError):
    pass


def _to_elem(poly: Polynomial) -> Dict[int, int]:
    return {m << IDX_BITS: c for m, c in poly.terms.items()}


def _from_elem(ring: Ring, elem: Dict[int, int]) -> Polynomial:
    return Polynomial(ring, {t >> IDX_BITS: c for t, c in elem.items()})


@dataclass(frozen=True)
class HVector:
    """Reduced Hilbert-series numerator and Krull dimension of ``R/I``."""

    coefficients: Tuple[int, ...]
    dimension: int

    @property
    def degree(self) -> int:
        return sum(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)


class Ideal:
    """Homogeneous ideal given by generators; the reduced Groebner basis is cached.

    Instances are immutable.  The cache is filled at most once (guarded by a
    lock) and never mutated afterwards.
    """

    def __init__(self, ring: Ring, generators: Iterable[Polynomial]):
        gens = []
        for g in generators:
            if isinstance(g, int):
                g = ring.const(g)
            if g.ring != ring:
                raise IdealError("generator from a different ring")
            if not g.is_homogeneous():
                raise IdealError(f"generator {g} is not homogeneous")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._gb: Optional[Tuple[Polynomial, ...]] = None
        self._basis: Optional[Basis] = None
        self._minimal: Optional[Tuple[int, ...]] = None
        self._series: Optional[Tuple[List[int], HVector]] = None
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, ring: Ring, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    @classmethod
    def unit(cls, ring: Ring) -> "Ideal":
        return cls(ring, [ring.one()])

    def __repr__(self) -> str:
        return f"Ideal({', '.join(str(g) for g in self.generators)})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    # -- Groebner data -----------------------------------------------------

    @property
    def groebner(self) -> Tuple[Polynomial, ...]:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    elems, essential = groebner_with_minimal(
                        self.ring, [_to_elem(g) for g in self.generators])
                    self._minimal = tuple(essential)
                    self._basis = basis_from_elements(self.ring, elems)
                    self._gb = tuple(_from_elem(self.ring, e) for e in elems)
        return self._gb

    @property
    def reducer(self) -> Basis:
        self.groebner
        return self._basis

    def has_groebner(self) -> bool:
        return self._gb is not None

    def lead_exponents(self) -> List[Tuple[int, ...]]:
        return [self.ring.unpack(g.lead_monomial()) for g in self.groebner]

    def normal_form(self, poly: Polynomial) -> Polynomial:
        if poly.ring != self.ring:
            raise RingError("polynomial from a different ring")
        rem = self.reducer.reduce(_to_elem(poly))
        return _from_elem(self.ring, rem)

    def contains(self, poly: Polynomial) -> bool:
        return self.normal_form(poly).is_zero()

    def __contains__(self, poly: Polynomial) -> bool:
        return self.contains(poly)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.groebner)

    def is_zero(self) -> bool:
        return not self.generators

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner == other.groebner

    def __hash__(self) -> int:
        return hash((self.ring, self.groebner))

    # -- Hilbert data ------------------------------------------------------

    def _hilbert(self) -> Tuple[List[int], HVector]:
        if self._series is None:
            n = self.ring.num_vars
            if self.is_zero():
                num = [1]
            else:
                num = kpoly(self.lead_exponents())
            h, dim = reduce_series(num, n)
            self._series = (num, HVector(tuple(h), dim))
        return self._series

    def kpolynomial(self) -> List[int]:
        """Numerator of the Hilbert series of ``R/I`` over ``(1-t)^num_vars``."""
        return list(self._hilbert()[0])

    def hvector(self) -> HVector:
        return self._hilbert()[1]

    def dimension(self) -> int:
        return self.hvector().dimension

    def codimension(self) -> int:
        return self.ring.num_vars - self.dimension()

    def degree(self) -> int:
        return self.hvector().degree

    def hilbert_function(self, d: int) -> int:
        """``dim_k (R/I)_d``."""
        return hilbert_function(self._hilbert()[0], self.ring.num_vars, d)

    def slice_dimension(self, d: int) -> int:
        """``dim_k I_d``."""
        return len(self.ring.monomials_of_degree(d)) - self.hilbert_function(d)

    def generator_degrees(self) -> List[int]:
        return sorted(g.degree for g in self.generators)

    def truncated(self, d: int) -> "Ideal":
        """Ideal generated by the given generators of degree at most ``d``."""
        return Ideal(self.ring, [g for g in self.generators if g.degree <= d])


# -- operations -------------------------------------------------------------


def groebner_basis(ideal: Ideal) -> Ideal:
    ideal.groebner
    return ideal


def normal_form(poly: Polynomial, ideal: Ideal) -> Polynomial:
    return ideal.normal_form(poly)


def _generators_outside(I: Ideal, J: Ideal) -> List[Polynomial]:
    """Generators of ``J`` that together with ``I`` generate ``I + J``, none redundant."""
    ring = I.ring
    _, essential = groebner_with_minimal(
        ring, [_to_elem(g) for g in I.generators] + [_to_elem(g) for g in J.generators])
    k = len(I.generators)
    return [J.generators[i - k] for i in essential if i >= k]


def ideal_quotient(I: Ideal, J: Ideal, max_degree: Optional[int] = None) -> Ideal:
    """``I : J``, read off the first coordinate of a syzygy computation.

    ``max_degree`` caps the degree of the quotient generators looked for and
    is only safe when a bound on them is known.
    """
    _same_ring(I, J)
    ring = I.ring
    outside = _generators_outside(I, J)
    if not outside:
        return Ideal.unit(ring)
    if I.is_zero():
        return Ideal(ring, [])
    ig = list(I.generators)
    r = len(outside)
    target_twists = [-g.degree for g in outside]
    columns = [{k: dict(g.terms) for k, g in enumerate(outside)}]
    source_twists = [0]
    for k in range(r):
        for f in ig:
            columns.append({k: dict(f.terms)})
            source_twists.append(target_twists[k] + f.degree)
    syz = kernel(ring, columns, target_twists, source_twists, max_degree=max_degree)
    gens = [Polynomial(ring, dict(vec[0])) for vec in syz if 0 in vec]
    return minimalized(Ideal(ring, list(I.generators) + gens))


def saturate(I: Ideal, J: Ideal) -> Ideal:
    """``I : J^inf`` by iterated quotients."""
    current = I
    for _ in range(SATURATION_CAP):
        nxt = ideal_quotient(current, J)
        if nxt == current:
            return current
        current = nxt
    raise IdealError(f"saturation did not stabilise within {SATURATION_CAP} steps")


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I cap J`` from the syzygies of the concatenated generator lists."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    fs = list(I.generators)
    gs = list(J.generators)
    columns = [{0: dict(f.terms)} for f in fs] + [{0: dict(g.terms)} for g in gs]
    twists = [f.degree for f in fs] + [g.degree for g in gs]
    syz = kernel(ring, columns, [0], twists)
    gens = []
    for vec in syz:
        total = ring.zero()
        for j, poly in vec.items():
            if j < len(fs):
                total = total + Polynomial(ring, dict(poly)) * fs[j]
        if total:
            gens.append(total)
    return minimalized(Ideal(ring, gens))


def hilbert_series(ideal: Ideal) -> Tuple[List[int], int]:
    h = ideal.hvector()
    return list(h.coefficients), h.dimension


def codimension(ideal: Ideal) -> int:
    return ideal.codimension()


def slice_matrix(ring: Ring, polys: Sequence[Polynomial], d: int) -> Tuple[np.ndarray, List[int]]:
    mons = ring.monomials_of_degree(d)
    col = {m: i for i, m in enumerate(mons)}
    mat = np.zeros((len(polys), len(mons)), dtype=np.int64)
    for r, f in enumerate(polys):
        for m, c in f.terms.items():
            mat[r, col[m]] = c
    return mat, mons


def rows_to_polys(ring: Ring, mat: np.ndarray, mons: Sequence[int]) -> List[Polynomial]:
    out = []
    for row in mat:
        nz = np.nonzero(row)[0]
        out.append(Polynomial(ring, {mons[i]: int(row[i]) for i in nz}))
    return out


def degree_slice_basis(ideal: Ideal, d: int, canonical: bool = False) -> List[Polynomial]:
    """Basis of ``I_d``.

    One product ``m * g`` (``g`` in the Groebner basis) per leading monomial
    of ``I_d``; distinct leading terms make them independent and their count
    is ``dim I_d``.  ``canonical=True`` row-reduces them to the reduced
    echelon form, which depends only on the ideal.
    """
    ring = ideal.ring
    if d < 0:
        return []
    products = []
    seen = set()
    for g in ideal.groebner:
        e = d - g.degree
        if e < 0:
            continue
        lead = g.lead_monomial()
        for m in ring.monomials_of_degree(e):
            if lead + m in seen:
                continue
            seen.add(lead + m)
            products.append(g.shift(m))
    if not products or not canonical:
        return products
    mat, mons = slice_matrix(ring, products, d)
    red = linalg.rref(mat, ring.characteristic)
    return rows_to_polys(ring, red, mons)


def minimal_generators(ideal: Ideal) -> List[Polynomial]:
    """A minimal homogeneous generating set drawn from the given generators.

    The homogeneous Buchberger run reduces each input generator only after
    every S-element of its degree, so an input is kept exactly when it is not
    in the ideal spanned by the lower-degree part and the earlier inputs.
    """
    ideal.groebner
    return [ideal.generators[i] for i in ideal._minimal]


def minimalized(ideal: Ideal) -> Ideal:
    """Same ideal, re-presented by a minimal generating set."""
    gens = [g.monic() for g in minimal_generators(ideal)]
    out = Ideal(ideal.ring, gens)
    out._gb = ideal._gb
    out._basis = ideal._basis
    out._minimal = tuple(range(len(gens)))
    return out


def ideal_sum(*ideals: Ideal) -> Ideal:
    ring = ideals[0].ring
    return Ideal(ring, [g for I in ideals for g in I.generators])


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, [f * g for f in I.generators for g in J.generators])


def _same_ring(I: Ideal, J: Ideal) -> None:
    if I.ring != J.ring:
        raise IdealError("ideals live in different rings")
