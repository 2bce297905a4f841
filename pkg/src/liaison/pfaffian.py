"""Pfaffians of alternating matrices and Buchsbaum-Eisenbud ideals."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .ideal import Ideal
from .ring import Polynomial, Ring, random_form


class PfaffianError(ValueError):
    pass


def _check_alternating(rows: Sequence[Sequence[Polynomial]]) -> int:
    s = len(rows)
    for i in range(s):
        if len(rows[i]) != s:
            raise PfaffianError("matrix is not square")
        if rows[i][i]:
            raise PfaffianError(f"diagonal entry ({i},{i}) is nonzero")
        for j in range(i + 1, s):
            if rows[i][j] + rows[j][i]:
                raise PfaffianError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
    return s


def pfaffian(rows: Sequence[Sequence[Polynomial]], ring: Optional[Ring] = None) -> Polynomial:
    """Pfaffian of an even-size alternating matrix (first-row expansion, memoized)."""
    s = len(rows)
    if s % 2:
        raise PfaffianError(f"Pfaffian of odd size {s} matrix")
    if s == 0:
        if ring is None:
            raise PfaffianError("empty matrix needs a ring")
        return ring.one()
    _check_alternating(rows)
    return _pf_indices(rows, tuple(range(s)), ring or rows[0][1].ring)


def _pf_indices(rows: Sequence[Sequence[Polynomial]], idx: Tuple[int, ...], ring: Ring) -> Polynomial:
    @lru_cache(maxsize=None)
    def pf(sub: Tuple[int, ...]) -> Polynomial:
        if not sub:
            return ring.one()
        a = sub[0]
        acc = ring.zero()
        for m in range(1, len(sub)):
            entry = rows[a][sub[m]]
            if not entry:
                continue
            rest = sub[1:m] + sub[m + 1:]
            term = entry * pf(rest)
            acc = acc + term if m % 2 == 1 else acc - term
        return acc

    return pf(idx)


def determinant(rows: Sequence[Sequence[Polynomial]], ring: Optional[Ring] = None) -> Polynomial:
    """Exact determinant by Laplace expansion along rows, memoized on column sets."""
    n = len(rows)
    if n == 0:
        if ring is None:
            raise PfaffianError("empty matrix needs a ring")
        return ring.one()
    ring = ring or rows[0][0].ring

    @lru_cache(maxsize=None)
    def det(cols: Tuple[int, ...]) -> Polynomial:
        k = n - len(cols)
        if not cols:
            return ring.one()
        acc = ring.zero()
        for pos, c in enumerate(cols):
            entry = rows[k][c]
            if not entry:
                continue
            term = entry * det(cols[:pos] + cols[pos + 1:])
            acc = acc + term if pos % 2 == 0 else acc - term
        return acc

    return det(tuple(range(n)))


class SkewSymmetricMatrix:
    """Odd-size alternating matrix of forms with a row-degree vector.

    Entry ``(i, j)`` is zero or homogeneous of degree
    ``row_degrees[i] + row_degrees[j] - shift``.
    """

    def __init__(self, ring: Ring, rows: Sequence[Sequence[Polynomial]],
                 row_degrees: Optional[Sequence[int]] = None, shift: Optional[int] = None):
        rows = [[ring.const(e) if isinstance(e, int) else e for e in r] for r in rows]
        s = _check_alternating(rows)
        if s < 3 or s % 2 == 0:
            raise PfaffianError(f"size must be odd and at least 3, got {s}")
        for r in rows:
            for e in r:
                if e and not e.is_homogeneous():
                    raise PfaffianError(f"entry {e} is not homogeneous")
        self.ring = ring
        self.size = s
        self.rows: Tuple[Tuple[Polynomial, ...], ...] = tuple(tuple(r) for r in rows)
        if row_degrees is None:
            row_degrees, shift = self._infer_degrees()
        elif shift is None:
            raise PfaffianError("row_degrees given without shift")
        self.row_degrees: Tuple[int, ...] = tuple(int(d) for d in row_degrees)
        self.shift = int(shift)
        if len(self.row_degrees) != s:
            raise PfaffianError("row_degrees has the wrong length")
        for i in range(s):
            for j in range(i + 1, s):
                e = self.rows[i][j]
                if e and e.degree != self.entry_degree(i, j):
                    raise PfaffianError(
                        f"entry ({i},{j}) has degree {e.degree}, expected {self.entry_degree(i, j)}")

    @classmethod
    def from_upper(cls, ring: Ring, size: int, upper: Sequence[Polynomial], **kw) -> "SkewSymmetricMatrix":
        """Build from the strict upper triangle listed row by row."""
        if len(upper) != size * (size - 1) // 2:
            raise PfaffianError("wrong number of upper-triangle entries")
        rows = [[ring.zero()] * size for _ in range(size)]
        it = iter(upper)
        for i in range(size):
            for j in range(i + 1, size):
                e = next(it)
                e = ring.const(e) if isinstance(e, int) else e
                rows[i][j] = e
                rows[j][i] = -e
        return cls(ring, rows, **kw)

    def _infer_degrees(self) -> Tuple[List[int], int]:
        # Unknowns r_1..r_{s-1} and the shift, with r_0 = 0.
        s = self.size
        eqs, rhs = [], []
        for i in range(s):
            for j in range(i + 1, s):
                e = self.rows[i][j]
                if e:
                    row = [0.0] * (s + 1)
                    if i:
                        row[i] += 1
                    row[j] += 1
                    row[s] = -1
                    eqs.append(row)
                    rhs.append(e.degree)
        if not eqs:
            return [0] * s, 0
        a = np.array(eqs)
        sol, _, rank, _ = np.linalg.lstsq(a, np.array(rhs, dtype=float), rcond=None)
        if rank < s:
            raise PfaffianError("entry degrees do not determine row degrees; pass row_degrees")
        ints = np.rint(sol).astype(int)
        if not np.allclose(a @ ints, rhs):
            raise PfaffianError("entries admit no consistent row-degree vector")
        r = [0] + [int(v) for v in ints[1:s]]
        return r, int(ints[s])

    def entry(self, i: int, j: int) -> Polynomial:
        return self.rows[i][j]

    def entry_degree(self, i: int, j: int) -> int:
        return self.row_degrees[i] + self.row_degrees[j] - self.shift

    def matrix(self) -> List[List[Polynomial]]:
        return [list(r) for r in self.rows]

    def upper(self) -> List[Polynomial]:
        return [self.rows[i][j] for i in range(self.size) for j in range(i + 1, self.size)]

    def pfaffian_of_deletion(self, deleted: Sequence[int]) -> Polynomial:
        keep = tuple(i for i in range(self.size) if i not in set(deleted))
        if len(keep) % 2:
            raise PfaffianError("deletion leaves an odd-size matrix")
        return _pf_indices(self.rows, keep, self.ring)

    def generator_degrees(self) -> List[int]:
        """Degree of the Pfaffian obtained by deleting row and column ``i``."""
        total = sum(self.row_degrees)
        half = (self.size - 1) // 2
        return [total - r - half * self.shift for r in self.row_degrees]

    def canonical(self) -> Tuple["SkewSymmetricMatrix", List[int]]:
        """Rows permuted to non-decreasing row degree; also the permutation used."""
        perm = sorted(range(self.size), key=lambda i: (self.row_degrees[i], i))
        rows = [[self.rows[a][b] for b in perm] for a in perm]
        out = SkewSymmetricMatrix(self.ring, rows, [self.row_degrees[i] for i in perm], self.shift)
        return out, perm

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewSymmetricMatrix) and self.ring == other.ring and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def to_text(self) -> str:
        lines = [self.ring.header(), f"skew s={self.size}"]
        lines.extend(str(e) for e in self.upper())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, ring: Optional[Ring] = None) -> "SkewSymmetricMatrix":
        from .io import parse_ring_header

        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if lines and lines[0].startswith("ring"):
            ring = parse_ring_header(lines.pop(0))
        if ring is None:
            ring = Ring()
        if not lines or not lines[0].startswith("skew"):
            raise PfaffianError("missing 'skew s=<size>' header")
        try:
            size = int(lines[0].split("=", 1)[1])
        except (IndexError, ValueError):
            raise PfaffianError(f"bad header {lines[0]!r}") from None
        return cls.from_upper(ring, size, [ring.parse(ln) for ln in lines[1:]])


def submaximal_pfaffians(M: SkewSymmetricMatrix) -> List[Polynomial]:
    """``(-1)^i Pf(M minus row/column i)`` for 0-based ``i``; ``M`` annihilates the vector."""
    out = []
    for i in range(M.size):
        pf = M.pfaffian_of_deletion([i])
        out.append(pf if i % 2 == 0 else -pf)
    return out


def annihilates(M: SkewSymmetricMatrix, vec: Sequence[Polynomial]) -> bool:
    for row in M.rows:
        acc = M.ring.zero()
        for e, v in zip(row, vec):
            if e and v:
                acc = acc + e * v
        if acc:
            return False
    return True


def buchsbaum_eisenbud_ideal(M: SkewSymmetricMatrix) -> Ideal:
    return Ideal(M.ring, submaximal_pfaffians(M))


def watanabe_u(M: SkewSymmetricMatrix, i: int, j: int, k: int) -> Tuple[Polynomial, bool]:
    """Pfaffian of ``M`` with rows/columns ``i, j, k`` deleted (0-based).

    The flag is ``False`` for ``s = 3``: ``u = 1`` and the ideal is a complete
    intersection, outside the hypotheses where ``u`` means anything.
    """
    if len({i, j, k}) != 3 or not all(0 <= x < M.size for x in (i, j, k)):
        raise PfaffianError("indices must be distinct and in range")
    if M.size == 3:
        return M.ring.one(), False
    return M.pfaffian_of_deletion([i, j, k]), True


def random_be_matrix(ring: Ring, s: int, degree_pattern: Sequence[int], seed: int,
                     shift: Optional[int] = None) -> SkewSymmetricMatrix:
    """Random alternating matrix with entry degrees ``r_i + r_j - shift``.

    ``degree_pattern`` is the row-degree vector ``r``; the default shift
    makes the smallest entry linear.  Entries are dense random forms drawn
    from ``numpy.random.default_rng(seed)``.
    """
    if s < 3 or s % 2 == 0:
        raise PfaffianError(f"size must be odd and at least 3, got {s}")
    r = [int(d) for d in degree_pattern]
    if len(r) != s:
        raise PfaffianError(f"degree pattern has length {len(r)}, expected {s}")
    if shift is None:
        shift = min(r[i] + r[j] for i in range(s) for j in range(i + 1, s)) - 1
    degs = {(i, j): r[i] + r[j] - shift for i in range(s) for j in range(i + 1, s)}
    bad = [ij for ij, d in degs.items() if d < 0]
    if bad:
        raise PfaffianError(f"degree pattern gives negative entry degrees at {bad}")
    rng = np.random.default_rng(seed)
    upper = [random_form(ring, degs[(i, j)], rng) for i in range(s) for j in range(i + 1, s)]
    return SkewSymmetricMatrix.from_upper(ring, s, upper, row_degrees=r, shift=shift)


def even_principal_submatrices(M: SkewSymmetricMatrix) -> List[Tuple[int, ...]]:
    """Index sets of the even principal submatrices whose Pfaffians a BE ideal uses."""
    s = M.size
    return [tuple(c) for k in (s - 1, s - 3) if k >= 2 for c in combinations(range(s), k)]


def check_pf_squared(M: SkewSymmetricMatrix, keep: Sequence[int]) -> bool:
    sub = [[M.rows[a][b] for b in keep] for a in keep]
    pf = _pf_indices(M.rows, tuple(keep), M.ring)
    return pf * pf == determinant(sub, M.ring)
