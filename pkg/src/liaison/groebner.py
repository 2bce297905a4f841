"""Buchberger's algorithm for homogeneous submodules of graded free modules.

Elements are dicts ``term -> coefficient`` in the packed module encoding of
:mod:`liaison.ring`.  Every element handed to this module must be
homogeneous for the grading in which the total degree of a term is the
degree field of its packed monomial (weights included); that is what makes
``min`` the leading term.

An optional *block* field sits above the monomial.  Terms in block 0 beat
every term in block 1, which turns the order into an elimination order for
the block-0 components; :func:`liaison.resolution.syzygies` relies on it.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Tuple

from .ring import FIELD_BITS, IDX_BITS, IDX_MASK, Ring

Element = Dict[int, int]


class GroebnerError(RuntimeError):
    pass


class TermCodec:
    """Bit layout helpers for module terms over ``ring``."""

    def __init__(self, ring: Ring):
        self.ring = ring
        mono_bits = FIELD_BITS * (ring.num_vars + 1)
        self.mono_mask = (1 << mono_bits) - 1
        self.block_shift = IDX_BITS + mono_bits + 1
        self.deg_shift = IDX_BITS + ring.deg_shift
        self.div_mask = (ring.guard << IDX_BITS) | IDX_MASK | (0xFF << self.block_shift)
        self.frame_mask = ~(self.mono_mask << IDX_BITS)

    def term(self, mono: int, comp: int = 0, block: int = 0) -> int:
        return (block << self.block_shift) | (mono << IDX_BITS) | comp

    def mono(self, t: int) -> int:
        return (t >> IDX_BITS) & self.mono_mask

    def comp(self, t: int) -> int:
        return t & IDX_MASK

    def block(self, t: int) -> int:
        return t >> self.block_shift

    def degree(self, t: int) -> int:
        return (t >> self.deg_shift) & 0xFF

    def divides(self, a: int, b: int) -> bool:
        return ((b - a) & self.div_mask) == 0

    def lcm(self, a: int, b: int) -> int:
        m = self.ring.mono_lcm(self.mono(a), self.mono(b))
        return (a & self.frame_mask) | (m << IDX_BITS)


class Basis:
    """A growing list of monic elements used as a reduction system."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.p = ring.characteristic
        self.codec = TermCodec(ring)
        self.leads: List[int] = []
        self.polys: List[Element] = []
        self.tails: List[List[Tuple[int, int]]] = []
        self.by_frame: Dict[int, List[int]] = defaultdict(list)
        self._hit: Dict[int, int] = {}
        self._miss: set = set()

    def __len__(self) -> int:
        return len(self.leads)

    def add(self, elem: Element) -> int:
        """Append a nonzero element (made monic); return its index."""
        lead = min(elem)
        c = elem[lead]
        p = self.p
        if c != 1:
            inv = pow(c, p - 2, p)
            elem = {t: v * inv % p for t, v in elem.items()}
        idx = len(self.leads)
        self.leads.append(lead)
        self.polys.append(elem)
        self.tails.append([(t, v) for t, v in elem.items() if t != lead])
        self.by_frame[lead & self.codec.frame_mask].append(idx)
        self._miss.clear()
        return idx

    def replace(self, idx: int, elem: Element) -> None:
        lead = self.leads[idx]
        if elem.get(lead) != 1:
            raise GroebnerError("replacement must keep the monic leading term")
        self.polys[idx] = elem
        self.tails[idx] = [(t, v) for t, v in elem.items() if t != lead]

    def find(self, t: int) -> Optional[int]:
        hit = self._hit.get(t)
        if hit is not None:
            return hit
        if t in self._miss:
            return None
        mask = self.codec.div_mask
        leads = self.leads
        tails = self.tails
        best = None
        for i in self.by_frame.get(t & self.codec.frame_mask, ()):
            if ((t - leads[i]) & mask) == 0:
                if best is None or len(tails[i]) < len(tails[best]):
                    best = i
        if best is None:
            self._miss.add(t)
        else:
            self._hit[t] = best
        return best

    def reduce(self, f: Element, record: Optional[list] = None) -> Element:
        """Full normal form of ``f`` (consumed).

        With ``record`` given, each division step appends ``(index, shift,
        coefficient)`` so that ``f = sum coeff * shift * polys[index] + rem``.
        """
        p = self.p
        leads = self.leads
        tails = self.tails
        find = self.find
        heap = list(f)
        heapq.heapify(heap)
        pop = heapq.heappop
        push = heapq.heappush
        rem: Element = {}
        while heap:
            t = pop(heap)
            c = f.pop(t, None)
            if c is None:
                continue
            i = find(t)
            if i is None:
                rem[t] = c
                continue
            s = t - leads[i]
            if record is not None:
                record.append((i, s, c))
            nc = p - c
            get = f.get
            for tt, cc in tails[i]:
                u = tt + s
                v = get(u)
                if v is None:
                    f[u] = nc * cc % p
                    push(heap, u)
                else:
                    v = (v + nc * cc) % p
                    if v:
                        f[u] = v
                    else:
                        del f[u]
        return rem

    def is_reducible_to_zero(self, f: Element) -> bool:
        return not self.reduce(dict(f))


class _Pair:
    __slots__ = ("lcm", "i", "j")

    def __init__(self, lcm: int, i: int, j: int):
        self.lcm = lcm
        self.i = i
        self.j = j


def _s_element(basis: Basis, pair: _Pair) -> Element:
    p = basis.p
    si = pair.lcm - basis.leads[pair.i]
    sj = pair.lcm - basis.leads[pair.j]
    out = {t + si: c for t, c in basis.tails[pair.i]}
    get = out.get
    for t, c in basis.tails[pair.j]:
        u = t + sj
        v = (get(u, 0) - c) % p
        if v:
            out[u] = v
        else:
            out.pop(u, None)
    return out


class GroebnerRun:
    """Homogeneous Buchberger run with Gebauer-Moeller pair elimination.

    Pairs are processed degree by degree (the normal strategy, which for
    homogeneous input coincides with sugar).  ``product_criterion`` is only
    valid for ideals (rank one).
    """

    def __init__(self, ring: Ring, product_criterion: bool = True,
                 max_degree: Optional[int] = None):
        self.ring = ring
        self.codec = TermCodec(ring)
        self.basis = Basis(ring)
        self.product_criterion = product_criterion
        self.max_degree = max_degree
        self.pairs: Dict[int, List[_Pair]] = defaultdict(list)
        self.pending: Dict[int, List[Element]] = defaultdict(list)
        self.zero_reductions = 0
        self.truncated = False
        self.essential: List[int] = []

    def add_generators(self, gens: Iterable[Element]) -> None:
        """Queue input generators; their positions are tags for :attr:`essential`."""
        deg = self.codec.degree
        base = sum(len(v) for v in self.pending.values())
        for n, g in enumerate(gens):
            if g:
                self.pending[deg(next(iter(g)))].append((base + n, dict(g)))

    def _coprime(self, a: int, b: int) -> bool:
        ring = self.ring
        return ring.mono_gcd(self.codec.mono(a), self.codec.mono(b)) == 0

    def _update(self, k: int) -> None:
        basis = self.basis
        codec = self.codec
        leads = basis.leads
        lk = leads[k]
        frame = lk & codec.frame_mask
        lcm = codec.lcm
        divides = codec.divides
        deg = codec.degree

        # Criterion B on pairs already queued.
        for d, plist in list(self.pairs.items()):
            kept = []
            for pr in plist:
                if (pr.lcm & codec.frame_mask) == frame and divides(lk, pr.lcm):
                    if lcm(leads[pr.i], lk) != pr.lcm and lcm(leads[pr.j], lk) != pr.lcm:
                        continue
                kept.append(pr)
            self.pairs[d] = kept

        cands = []
        for i in basis.by_frame.get(frame, ()):
            if i == k:
                continue
            li = leads[i]
            cands.append((lcm(li, lk), i, self.product_criterion and self._coprime(li, lk)))
        if not cands:
            return
        # Criterion M: drop pairs whose lcm is a proper multiple of another's.
        survivors = []
        for a in cands:
            redundant = False
            for b in cands:
                if b[0] != a[0] and divides(b[0], a[0]):
                    redundant = True
                    break
            if not redundant:
                survivors.append(a)
        # Criterion F plus the product criterion on each lcm class.
        by_lcm: Dict[int, list] = defaultdict(list)
        for a in survivors:
            by_lcm[a[0]].append(a)
        for l, group in by_lcm.items():
            if any(g[2] for g in group):
                continue
            i = min(g[1] for g in group)
            self.pairs[deg(l)].append(_Pair(l, i, k))

    def run(self) -> Basis:
        basis = self.basis
        while True:
            live = [d for d, v in self.pairs.items() if v] + [d for d, v in self.pending.items() if v]
            if not live:
                break
            d = min(live)
            if self.max_degree is not None and d > self.max_degree:
                self.truncated = True
                break
            work = [(None, _s_element(basis, pr)) for pr in self.pairs.pop(d, [])]
            # Inputs come after the S-elements of the same degree, so an input
            # survives reduction exactly when it is a minimal generator.
            work.extend(self.pending.pop(d, []))
            for tag, f in work:
                r = basis.reduce(f)
                if r:
                    k = basis.add(r)
                    self._update(k)
                    if tag is not None:
                        self.essential.append(tag)
                else:
                    self.zero_reductions += 1
        return basis


def interreduce(basis: Basis) -> List[Element]:
    """Reduced basis: minimal leads, reduced tails, sorted by leading term."""
    leads = basis.leads
    div = basis.codec.divides
    keep = []
    for i, li in enumerate(leads):
        if any(j != i and div(lj, li) and (lj != li or j < i) for j, lj in enumerate(leads)):
            continue
        keep.append(i)
    red = Basis(basis.ring)
    order = sorted(keep, key=lambda i: leads[i])
    for i in order:
        red.add(dict(basis.polys[i]))
    out = []
    for idx in range(len(red)):
        lead = red.leads[idx]
        tail = {t: c for t, c in red.polys[idx].items() if t != lead}
        rem = red.reduce(tail)
        rem[lead] = 1
        red.replace(idx, rem)
        out.append(rem)
    return out


def groebner_elements(ring: Ring, gens: Iterable[Element], product_criterion: bool = True,
                      max_degree: Optional[int] = None) -> List[Element]:
    run = GroebnerRun(ring, product_criterion=product_criterion, max_degree=max_degree)
    run.add_generators(gens)
    return interreduce(run.run())


def groebner_with_minimal(ring: Ring, gens: List[Element]) -> Tuple[List[Element], List[int]]:
    """Reduced basis plus the positions of a minimal subset of ``gens``."""
    run = GroebnerRun(ring)
    run.add_generators(gens)
    basis = run.run()
    return interreduce(basis), sorted(run.essential)


def basis_from_elements(ring: Ring, elems: Iterable[Element]) -> Basis:
    b = Basis(ring)
    for e in elems:
        b.add(dict(e))
    return b
