"""Graded free resolutions, Betti tables and deficiency modules.

Resolutions of ``R/I`` are built with Schreyer's construction from the
reduced Groebner basis of ``I`` and then minimized by cancelling unit
entries.  The Schreyer frame keeps, for every basis element, only the
S-pairs whose leading monomials generate the lead module of the syzygies,
so the non-minimal resolution stays small.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .groebner import Basis, TermCodec
from .ideal import Ideal, minimal_generators
from .kernel import kernel
from .ring import FIELD_BITS, FIELD_MASK, IDX_BITS, IDX_MASK, Polynomial, Ring, add_terms, mul_terms

PolyDict = Dict[int, int]


class ResolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class GradedFreeModule:
    """``R(-a_1) (+) ... (+) R(-a_r)``; ``twists`` holds the ``a_i``."""

    twists: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)

    def is_canonical(self) -> bool:
        return all(a <= b for a, b in zip(self.twists, self.twists[1:]))


class GradedMap:
    """Homogeneous map ``source -> target`` stored column-wise.

    ``columns[j]`` maps target indices to nonzero polynomials; entry
    ``(i, j)`` has degree ``source.twists[j] - target.twists[i]``.
    """

    def __init__(self, ring: Ring, source: GradedFreeModule, target: GradedFreeModule,
                 columns: Sequence[Mapping[int, Polynomial]], check: bool = True):
        self.ring = ring
        self.source = source
        self.target = target
        self.columns: List[Dict[int, Polynomial]] = [
            {i: f for i, f in col.items() if f} for col in columns]
        if len(self.columns) != source.rank:
            raise ResolutionError("column count differs from source rank")
        if check:
            for j, col in enumerate(self.columns):
                for i, f in col.items():
                    if not 0 <= i < target.rank:
                        raise ResolutionError(f"row {i} outside target")
                    want = source.twists[j] - target.twists[i]
                    if not f.is_homogeneous() or f.degree != want:
                        raise ResolutionError(
                            f"entry ({i},{j}) has degree {f.degree}, expected {want}")

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[Polynomial]],
                  source_twists: Sequence[int], target_twists: Sequence[int]) -> "GradedMap":
        ncols = len(source_twists)
        cols = [{i: rows[i][j] for i in range(len(rows)) if rows[i][j]} for j in range(ncols)]
        return cls(ring, GradedFreeModule(tuple(source_twists)),
                   GradedFreeModule(tuple(target_twists)), cols)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.columns[j].get(i, self.ring.zero())

    def rows(self) -> List[List[Polynomial]]:
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self o other`` (apply ``other`` first)."""
        cols = []
        for col in other.columns:
            acc: Dict[int, Polynomial] = {}
            for k, f in col.items():
                for i, g in self.columns[k].items():
                    acc[i] = acc.get(i, self.ring.zero()) + g * f
            cols.append(acc)
        return GradedMap(self.ring, other.source, self.target, cols, check=False)

    def is_zero(self) -> bool:
        return all(not col for col in self.columns)

    def has_unit_entries(self) -> bool:
        return any(f.is_constant() for col in self.columns for f in col.values())


@dataclass
class BettiTable:
    """Graded Betti numbers of an ideal ``I``: ``betti[(i, j)]`` is the rank of
    ``R(-j)`` in the ``i``-th module of a minimal resolution of ``I`` (so
    ``i = 0`` counts minimal generators)."""

    betti: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.betti = {k: v for k, v in self.betti.items() if v}
        if any(v < 0 for v in self.betti.values()):
            raise ResolutionError("negative Betti number")

    @classmethod
    def from_modules(cls, modules: Sequence[GradedFreeModule]) -> "BettiTable":
        table: Dict[Tuple[int, int], int] = defaultdict(int)
        for i, mod in enumerate(modules[1:]):
            for a in mod.twists:
                table[(i, a)] += 1
        return cls(dict(table))

    @classmethod
    def from_shape(cls, shape: Mapping[int, Mapping[int, int]]) -> "BettiTable":
        """``{i: {twist: rank}}``, e.g. ``{0: {2: 4}, 1: {3: 4}, 2: {4: 1}}``."""
        return cls({(i, j): r for i, row in shape.items() for j, r in row.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self.betti == other.betti

    def __hash__(self) -> int:
        return hash(frozenset(self.betti.items()))

    def entries(self) -> List[Tuple[int, int, int]]:
        return sorted((i, j, r) for (i, j), r in self.betti.items())

    def length(self) -> int:
        return max((i for i, _ in self.betti), default=-1) + 1

    def ranks(self) -> List[int]:
        out = [0] * self.length()
        for (i, _), r in self.betti.items():
            out[i] += r
        return out

    def generator_degrees(self) -> List[int]:
        return sorted(j for (i, j), r in self.betti.items() if i == 0 for _ in range(r))

    def mu(self) -> int:
        return sum(r for (i, _), r in self.betti.items() if i == 0)

    def kpolynomial(self) -> List[int]:
        """K-polynomial of ``R/I``: ``1 - sum_i (-1)^i sum_j beta_ij t^j``."""
        top = max((j for _, j in self.betti), default=0)
        out = [0] * (top + 1)
        out[0] = 1
        for (i, j), r in self.betti.items():
            out[j] += (-1) ** (i + 1) * r
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def is_self_dual(self) -> bool:
        """Symmetric shape ``beta_{i,j} = beta_{L-1-i, s-j}`` of a Gorenstein ideal."""
        L = self.length()
        if L == 0:
            return True
        last = [(j, r) for (i, j), r in self.betti.items() if i == L - 1]
        if len(last) != 1 or last[0][1] != 1:
            return False
        s = last[0][0]
        for (i, j), r in self.betti.items():
            if i == L - 1:
                continue
            if self.betti.get((L - 2 - i, s - j), 0) != r:
                return False
        return True

    def to_json(self) -> dict:
        return {"betti": [list(e) for e in self.entries()]}

    @classmethod
    def from_json(cls, data) -> "BettiTable":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({(int(i), int(j)): int(r) for i, j, r in data["betti"]})

    def display(self) -> str:
        """Macaulay-style table: column ``i``, row ``j - i``."""
        if not self.betti:
            return "(zero ideal)"
        L = self.length()
        rows = sorted({j - i for i, j in self.betti})
        lines = ["      " + "".join(f"{i:>6}" for i in range(L))]
        lines.append("total:" + "".join(f"{r:>6}" for r in self.ranks()))
        for s in range(rows[0], rows[-1] + 1):
            cells = []
            for i in range(L):
                r = self.betti.get((i, i + s), 0)
                cells.append(f"{r if r else '.':>6}")
            lines.append(f"{s:>5}:" + "".join(cells))
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.display()

    def __repr__(self) -> str:
        return f"BettiTable({self.entries()})"


@dataclass
class FreeResolution:
    """``0 <- F_0 <- F_1 <- ... <- F_L`` resolving ``R/I``; ``maps[k]: F_{k+1} -> F_k``."""

    ring: Ring
    modules: List[GradedFreeModule]
    maps: List[GradedMap]
    minimal: bool = False

    @property
    def length(self) -> int:
        return len(self.maps)

    def betti(self) -> BettiTable:
        if not self.minimal:
            raise ResolutionError("Betti numbers need a minimal resolution; call minimize()")
        return BettiTable.from_modules(self.modules)

    def is_complex(self) -> bool:
        return all(self.maps[k].compose(self.maps[k + 1]).is_zero()
                   for k in range(len(self.maps) - 1))

    def constant_rank_betti(self) -> BettiTable:
        """Minimal Betti numbers read off any (possibly non-minimal) resolution.

        ``beta_{i,j} = f_{i,j} - r_{i,j} - r_{i+1,j}`` where ``r_{i,j}`` is the
        rank of the scalar block of ``d_i`` between the degree-``j`` summands.
        """
        p = self.ring.characteristic
        counts: Dict[Tuple[int, int], int] = defaultdict(int)
        for k, mod in enumerate(self.modules):
            for a in mod.twists:
                counts[(k, a)] += 1
        ranks: Dict[Tuple[int, int], int] = defaultdict(int)
        for k, phi in enumerate(self.maps, start=1):
            by_deg: Dict[int, List[Tuple[int, int, int]]] = defaultdict(list)
            for j, col in enumerate(phi.columns):
                for i, f in col.items():
                    if f.is_constant():
                        by_deg[phi.source.twists[j]].append((i, j, f.constant_value()))
            for d, entries in by_deg.items():
                rows = sorted({i for i, _, _ in entries})
                cols = sorted({j for _, j, _ in entries})
                ri = {r: n for n, r in enumerate(rows)}
                ci = {c: n for n, c in enumerate(cols)}
                mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
                for i, j, c in entries:
                    mat[ri[i], ci[j]] = c
                ranks[(k, d)] = linalg.rank(mat, p)
        table = {}
        for (k, a), f in counts.items():
            if k == 0:
                continue
            b = f - ranks.get((k, a), 0) - ranks.get((k + 1, a), 0)
            if b:
                table[(k - 1, a)] = b
        return BettiTable(table)


# -- syzygies of a map --------------------------------------------------------


def syzygies(phi: GradedMap, max_degree: Optional[int] = None) -> GradedMap:
    """A map onto ``ker(phi)``; the source lists the syzygies in order."""
    ring = phi.ring
    cols = [{i: dict(f.terms) for i, f in col.items()} for col in phi.columns]
    if not cols:
        return GradedMap(ring, GradedFreeModule(()), phi.source, [])
    vecs = kernel(ring, cols, phi.target.twists, phi.source.twists, max_degree=max_degree)
    twists = []
    out_cols = []
    for vec in vecs:
        col = {j: Polynomial(ring, dict(t)) for j, t in vec.items()}
        j0 = next(iter(col))
        twists.append(col[j0].degree + phi.source.twists[j0])
        out_cols.append(col)
    order = sorted(range(len(twists)), key=lambda k: twists[k])
    return GradedMap(ring, GradedFreeModule(tuple(twists[k] for k in order)), phi.source,
                     [out_cols[k] for k in order])


# -- Schreyer resolution ---------------------------------------------------------


def _minimal_monomials(ring: Ring, cands: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Keep ``(mono, tag)`` whose monomial is minimal; ties keep the first tag."""
    cands = sorted(cands, key=lambda c: (c[0] >> ring.deg_shift, c[0], c[1]))
    kept: List[Tuple[int, int]] = []
    for m, tag in cands:
        if any(ring.divides(k, m) for k, _ in kept):
            continue
        kept.append((m, tag))
    return kept


def _exponent(ring: Ring, mono: int, v: int) -> int:
    return (mono >> (FIELD_BITS * v)) & FIELD_MASK


def _decode_columns(ring: Ring, codec: TermCodec, elems: Sequence[PolyDict],
                    weights: Sequence[int]) -> List[Dict[int, Polynomial]]:
    cols = []
    for e in elems:
        col: Dict[int, PolyDict] = defaultdict(dict)
        for t, c in e.items():
            i = t & IDX_MASK
            col[i][codec.mono(t) - weights[i]] = c
        cols.append({i: Polynomial(ring, d) for i, d in col.items()})
    return cols


def free_resolution(ideal: Ideal) -> FreeResolution:
    """Schreyer resolution of ``R/I``; usually not minimal.

    Within each lead component the basis elements of a level are ordered by
    decreasing exponent of one variable (``x_{n-1}`` at level one, then
    ``x_{n-2}``, ...), so the leading monomials of level ``k + 1`` avoid
    ``k`` variables and the frame stops after at most ``num_vars`` steps.
    """
    ring = ideal.ring
    codec = TermCodec(ring)
    n = ring.num_vars
    p = ring.characteristic
    modules = [GradedFreeModule((0,))]
    maps: List[GradedMap] = []
    gb = list(ideal.groebner)
    if not gb:
        return FreeResolution(ring, modules, maps, minimal=True)

    gb.sort(key=lambda g: (-_exponent(ring, g.lead_monomial(), n - 1), g.lead_monomial()))
    elems: List[PolyDict] = [{m << IDX_BITS: c for m, c in g.monic().terms.items()} for g in gb]
    prev_weights = [0]
    level = 1
    while elems:
        if level > n:
            raise ResolutionError(f"Schreyer frame longer than {n} steps")
        basis = Basis(ring)
        for e in elems:
            basis.add(e)
        leads = basis.leads
        weights = [codec.mono(t) for t in leads]
        modules.append(GradedFreeModule(tuple(ring.mono_degree(w) for w in weights)))
        maps.append(GradedMap(ring, modules[-1], modules[-2],
                              _decode_columns(ring, codec, basis.polys, prev_weights), check=False))
        base = [(w << IDX_BITS) | i for i, w in enumerate(weights)]
        groups: Dict[int, List[int]] = defaultdict(list)
        for i, t in enumerate(leads):
            groups[t & IDX_MASK].append(i)
        v = n - 1 - level
        nxt: List[PolyDict] = []
        for a, lead_a in enumerate(leads):
            ma = weights[a]
            later = [b for b in groups[lead_a & IDX_MASK] if b > a]
            cands = [(ring.mono_lcm(ma, weights[b]) - ma, b) for b in later]
            kept = _minimal_monomials(ring, cands)
            if v >= 0:
                kept.sort(key=lambda qb: (-_exponent(ring, qb[0], v), qb[0]))
            for q, b in kept:
                qb = ma + q - weights[b]
                s = {t + (q << IDX_BITS): c for t, c in basis.polys[a].items()}
                for t, c in basis.polys[b].items():
                    u = t + (qb << IDX_BITS)
                    w = (s.get(u, 0) - c) % p
                    if w:
                        s[u] = w
                    else:
                        s.pop(u, None)
                record: list = []
                if basis.reduce(s, record):
                    raise ResolutionError("S-element did not reduce to zero")
                sig: PolyDict = {base[a] + (q << IDX_BITS): 1}
                sig[base[b] + (qb << IDX_BITS)] = p - 1
                for i, sh, c in record:
                    u = base[i] + sh
                    w = (sig.get(u, 0) - c) % p
                    if w:
                        sig[u] = w
                    else:
                        sig.pop(u, None)
                if min(sig) != base[a] + (q << IDX_BITS):
                    raise ResolutionError("Schreyer lead term mismatch")
                nxt.append(sig)
        prev_weights = weights
        elems = nxt
        level += 1
    return FreeResolution(ring, modules, maps, minimal=False)


# -- minimization ----------------------------------------------------------------


def minimize(res: FreeResolution) -> Tuple[FreeResolution, BettiTable]:
    """Cancel unit entries until none are left; twists end up sorted."""
    ring = res.ring
    p = ring.characteristic
    if res.minimal:
        return _canonical(res), _betti_of(res)
    L = len(res.maps)
    twists = [list(m.twists) for m in res.modules]
    cols: List[Optional[List[Optional[Dict[int, PolyDict]]]]] = [None]
    rows: List[Optional[Dict[int, set]]] = [None]
    for phi in res.maps:
        cc = [{i: dict(f.terms) for i, f in col.items()} for col in phi.columns]
        ri: Dict[int, set] = defaultdict(set)
        for j, col in enumerate(cc):
            for i in col:
                ri[i].add(j)
        cols.append(cc)
        rows.append(ri)
    alive = [set(range(len(t))) for t in twists]

    def pivot(k: int, r: int, c: int) -> None:
        colc = cols[k][c]
        uinv = pow(colc[r][0], p - 2, p)
        for c2 in list(rows[k][r]):
            if c2 == c:
                continue
            col2 = cols[k][c2]
            factor = {m: (p - v) * uinv % p for m, v in col2[r].items()}
            for r2, poly in colc.items():
                upd = add_terms(col2.get(r2, {}), mul_terms(factor, poly, p), 1, p)
                if upd:
                    col2[r2] = upd
                    rows[k][r2].add(c2)
                else:
                    col2.pop(r2, None)
                    rows[k][r2].discard(c2)
        for r2 in colc:
            rows[k][r2].discard(c)
        cols[k][c] = None
        alive[k].discard(c)
        alive[k - 1].discard(r)
        if k < L:
            for c3 in rows[k + 1].pop(c, ()):
                cols[k + 1][c3].pop(c, None)
        if k > 1:
            for r3 in cols[k - 1][r]:
                rows[k - 1][r3].discard(r)
            cols[k - 1][r] = None

    for k in range(1, L + 1):
        changed = True
        while changed:
            changed = False
            for c in sorted(alive[k]):
                if c not in alive[k]:
                    continue
                tw = twists[k][c]
                for r, poly in cols[k][c].items():
                    if twists[k - 1][r] == tw:
                        pivot(k, r, c)
                        changed = True
                        break

    order = [sorted(a, key=lambda i: (tw[i], i)) for a, tw in zip(alive, twists)]
    while len(order) > 1 and not order[-1]:
        order.pop()
    index = [{old: new for new, old in enumerate(o)} for o in order]
    modules = [GradedFreeModule(tuple(twists[k][i] for i in o)) for k, o in enumerate(order)]
    maps = []
    for k in range(1, len(order)):
        mcols = []
        for c in order[k]:
            mcols.append({index[k - 1][r]: Polynomial(ring, d) for r, d in cols[k][c].items()})
        maps.append(GradedMap(ring, modules[k], modules[k - 1], mcols, check=False))
    out = FreeResolution(ring, modules, maps, minimal=True)
    if any(phi.has_unit_entries() for phi in maps):
        raise ResolutionError("unit entry survived minimization")
    return out, _betti_of(out)


def _canonical(res: FreeResolution) -> FreeResolution:
    if all(m.is_canonical() for m in res.modules):
        return res
    order = [sorted(range(m.rank), key=lambda i: (m.twists[i], i)) for m in res.modules]
    index = [{old: new for new, old in enumerate(o)} for o in order]
    modules = [GradedFreeModule(tuple(m.twists[i] for i in o)) for m, o in zip(res.modules, order)]
    maps = []
    for k, phi in enumerate(res.maps):
        mcols = [{index[k][r]: f for r, f in phi.columns[c].items()} for c in order[k + 1]]
        maps.append(GradedMap(res.ring, modules[k + 1], modules[k], mcols, check=False))
    return FreeResolution(res.ring, modules, maps, minimal=res.minimal)


def _betti_of(res: FreeResolution) -> BettiTable:
    if not res.modules or (res.modules[0].rank == 0):
        return BettiTable({(0, 0): 1})
    return BettiTable.from_modules(res.modules)


def minimal_resolution(ideal: Ideal) -> Tuple[FreeResolution, BettiTable]:
    return minimize(free_resolution(ideal))


def betti_table(ideal: Ideal) -> BettiTable:
    return minimal_resolution(ideal)[1]


def minimal_generator_degrees(ideal: Ideal) -> Tuple[List[int], int]:
    """Sorted degrees of a minimal generating set, and their number ``mu``."""
    degs = sorted(g.degree for g in minimal_generators(ideal))
    return degs, len(degs)


# -- deficiency module --------------------------------------------------------------


@dataclass(frozen=True)
class DeficiencyProfile:
    """``t -> dim H^1(I_C(t))`` over ``window``; degrees outside the support are 0."""

    dims: Tuple[Tuple[int, int], ...]
    window: Tuple[int, int]

    def __getitem__(self, t: int) -> int:
        return dict(self.dims).get(t, 0)

    def support(self) -> List[int]:
        return [t for t, d in self.dims if d]

    def total(self) -> int:
        return sum(d for _, d in self.dims)

    def as_dict(self) -> Dict[int, int]:
        return {t: d for t, d in self.dims if d}

    def shifted(self, s: int) -> Dict[int, int]:
        return {t + s: d for t, d in self.as_dict().items()}

    def to_json(self) -> dict:
        lo, hi = self.window
        return {"h1": [[t, self[t]] for t in range(lo, hi + 1)]}


def _dual_cokernel_dims(ring: Ring, phi: GradedMap) -> Dict[int, int]:
    """Nonzero graded dimensions of ``coker(phi^T)`` for ``phi: F -> G``.

    ``phi^T: G^* -> F^*``; ``G^* = (+) R(a_j)`` for the target twists ``a_j``.
    Assumes the cokernel has finite length.
    """
    p = ring.characteristic
    b = phi.source.twists
    a = phi.target.twists
    rows_by_target: Dict[int, List[Tuple[int, Polynomial]]] = defaultdict(list)
    for k, col in enumerate(phi.columns):
        for j, f in col.items():
            rows_by_target[j].append((k, f))
    out: Dict[int, int] = {}
    s = -max(b)
    top = -min(b)
    while True:
        offs = {}
        ncols = 0
        for k, bk in enumerate(b):
            d = s + bk
            if d >= 0:
                mons = ring.monomials_of_degree(d)
                offs[k] = (ncols, {m: i for i, m in enumerate(mons)})
                ncols += len(mons)
        rank = 0
        if ncols:
            mat_rows = []
            for j, aj in enumerate(a):
                d = s + aj
                if d < 0 or not rows_by_target[j]:
                    continue
                for m in ring.monomials_of_degree(d):
                    row = np.zeros(ncols, dtype=np.int64)
                    for k, f in rows_by_target[j]:
                        start, idx = offs[k]
                        for mm, c in f.terms.items():
                            row[start + idx[mm + m]] = c
                    mat_rows.append(row)
            if mat_rows:
                rank = linalg.rank(np.array(mat_rows), p)
        dim = ncols - rank
        if dim:
            out[s] = dim
        elif s >= top:
            break
        s += 1
    return out


def deficiency_profile(ideal: Ideal, window: Optional[Tuple[int, int]] = None,
                       resolution: Optional[FreeResolution] = None) -> DeficiencyProfile:
    """Graded dimensions of ``H^1_*`` of the ideal sheaf of the curve ``V(I)``.

    Uses ``H^1(I_C(t)) = Ext^{n-1}(R/I, R)_{-t-n}`` (dual), the cokernel of the
    transpose of the map ``F_{n-1} -> F_{n-2}`` in the minimal resolution.
    An ACM curve has ``pd = n - 2`` and the profile vanishes.
    """
    ring = ideal.ring
    n = ring.num_vars
    if ideal.dimension() != 2:
        raise ResolutionError(f"deficiency profile needs a curve: dim R/I = {ideal.dimension()}, not 2")
    if resolution is None or not resolution.minimal:
        resolution = minimal_resolution(ideal)[0]
    L = resolution.length
    if L > n - 1:
        raise ResolutionError("ideal is not saturated (projective dimension is maximal)")
    dims: Dict[int, int] = {}
    if L == n - 1:
        for s, d in _dual_cokernel_dims(ring, resolution.maps[n - 2]).items():
            dims[-s - n] = d
    if window is None:
        window = (min(dims), max(dims)) if dims else (0, 0)
    lo, hi = window
    return DeficiencyProfile(tuple((t, dims.get(t, 0)) for t in range(lo, hi + 1)), (lo, hi))
