"""Polynomial ring over a prime field with a packed monomial encoding.

A monomial in ``n`` variables is one Python int: exponent of ``x_i`` in the
8-bit field at ``8*i`` and the total degree in the field at ``8*n``.  Every
field keeps its top bit clear, so divisibility is a single subtraction and
mask test, and multiplication is integer addition.

Among monomials of equal degree a *smaller* packed value is a *larger*
monomial in graded reverse lexicographic order (the last variable is the
most significant field).  All polynomials used by the algorithms are
homogeneous, so leading terms are found with ``min``.

Module elements reuse the encoding: a term ``x^u e_a`` is
``(packed(x^u * w_a) << IDX_BITS) | a`` where ``w_a`` is a weight monomial
attached to the basis element ``a``.
"""

from __future__ import annotations

import ast
import re
from functools import reduce
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

FIELD_BITS = 8
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1
IDX_BITS = 20
IDX_MASK = (1 << IDX_BITS) - 1

DEFAULT_PRIME = 32003


class RingError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


class Ring:
    """``GF(p)[x0, ..., x{n-1}]`` with graded reverse lexicographic order."""

    __slots__ = ("num_vars", "characteristic", "deg_shift", "guard", "_var_monos", "_hash")

    def __init__(self, num_vars: int = 4, characteristic: int = DEFAULT_PRIME):
        if num_vars < 2:
            raise RingError(f"need at least 2 variables, got {num_vars}")
        if num_vars > 12:
            raise RingError("packed monomials support at most 12 variables")
        if not is_prime(characteristic):
            raise RingError(f"characteristic {characteristic} is not prime")
        if characteristic >= 1 << 31:
            raise RingError("characteristic must be below 2**31")
        self.num_vars = num_vars
        self.characteristic = characteristic
        self.deg_shift = FIELD_BITS * num_vars
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(num_vars + 1))
        self._var_monos = tuple((1 << (FIELD_BITS * i)) | (1 << self.deg_shift) for i in range(num_vars))
        self._hash = hash((num_vars, characteristic))

    @property
    def p(self) -> int:
        return self.characteristic

    def __eq__(self, other) -> bool:
        return (isinstance(other, Ring) and other.num_vars == self.num_vars
                and other.characteristic == self.characteristic)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Ring(num_vars={self.num_vars}, characteristic={self.characteristic})"

    def header(self) -> str:
        return f"ring p={self.characteristic} n={self.num_vars}"

    # -- monomials ---------------------------------------------------------

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.num_vars:
            raise RingError(f"expected {self.num_vars} exponents, got {len(exps)}")
        m = 0
        deg = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXPONENT:
                raise RingError(f"exponent {e} out of range")
            m |= e << (FIELD_BITS * i)
            deg += e
        if deg > MAX_EXPONENT:
            raise RingError(f"degree {deg} out of range")
        return m | (deg << self.deg_shift)

    def unpack(self, m: int) -> Tuple[int, ...]:
        return tuple((m >> (FIELD_BITS * i)) & FIELD_MASK for i in range(self.num_vars))

    def mono_degree(self, m: int) -> int:
        return m >> self.deg_shift

    def var_mono(self, i: int) -> int:
        return self._var_monos[i]

    def divides(self, a: int, b: int) -> bool:
        return ((b - a) & self.guard) == 0

    def mono_lcm(self, a: int, b: int) -> int:
        r = 0
        deg = 0
        for i in range(self.num_vars):
            sh = FIELD_BITS * i
            e = max((a >> sh) & FIELD_MASK, (b >> sh) & FIELD_MASK)
            r |= e << sh
            deg += e
        return r | (deg << self.deg_shift)

    def mono_gcd(self, a: int, b: int) -> int:
        r = 0
        deg = 0
        for i in range(self.num_vars):
            sh = FIELD_BITS * i
            e = min((a >> sh) & FIELD_MASK, (b >> sh) & FIELD_MASK)
            r |= e << sh
            deg += e
        return r | (deg << self.deg_shift)

    def monomials_of_degree(self, d: int) -> List[int]:
        """All monomials of degree ``d``, largest first in grevlex."""
        if d < 0:
            return []
        out = []
        n = self.num_vars

        def rec(i: int, left: int, acc: Tuple[int, ...]) -> None:
            if i == n - 1:
                out.append(acc + (left,))
                return
            for e in range(left, -1, -1):
                rec(i + 1, left - e, acc + (e,))

        rec(0, d, ())
        packed = [self.pack(e) for e in out]
        packed.sort()
        return packed

    def mono_str(self, m: int) -> str:
        parts = []
        for i, e in enumerate(self.unpack(m)):
            if e == 1:
                parts.append(f"x{i}")
            elif e > 1:
                parts.append(f"x{i}^{e}")
        return "*".join(parts) if parts else "1"

    def sort_key(self, m: int) -> Tuple[int, int]:
        """Ascending sort key whose order is reversed grevlex (largest first)."""
        return (-(m >> self.deg_shift), m)

    # -- polynomials -------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def const(self, c: int) -> "Polynomial":
        c %= self.characteristic
        return Polynomial(self, {0: c} if c else {})

    def var(self, i: int) -> "Polynomial":
        if not 0 <= i < self.num_vars:
            raise RingError(f"no variable x{i} in {self!r}")
        return Polynomial(self, {self._var_monos[i]: 1})

    def gens(self) -> List["Polynomial"]:
        return [self.var(i) for i in range(self.num_vars)]

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        c = coeff % self.characteristic
        return Polynomial(self, {self.pack(exps): c} if c else {})

    def from_dict(self, terms: Mapping[Tuple[int, ...], int]) -> "Polynomial":
        p = self.characteristic
        out: Dict[int, int] = {}
        for exps, c in terms.items():
            m = self.pack(exps)
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        """Parse infix text such as ``3*x0^2*x1 - x2^3``."""
        src = text.strip().replace("^", "**")
        if not src:
            raise RingError("empty polynomial text")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            raise RingError(f"cannot parse polynomial {text!r}") from exc
        return self._eval(tree.body, text)

    def _eval(self, node: ast.AST, text: str) -> "Polynomial":
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise RingError(f"non-integer exponent in {text!r}")
                return self._eval(node.left, text) ** node.right.value
            left = self._eval(node.left, text)
            right = self._eval(node.right, text)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            raise RingError(f"unsupported operator in {text!r}")
        if isinstance(node, ast.UnaryOp):
            val = self._eval(node.operand, text)
            if isinstance(node.op, ast.USub):
                return -val
            if isinstance(node.op, ast.UAdd):
                return val
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return self.const(node.value)
        if isinstance(node, ast.Name):
            m = re.fullmatch(r"x(\d+)", node.id)
            if m:
                return self.var(int(m.group(1)))
        raise RingError(f"unsupported syntax in {text!r}")


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps packed monomial to coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Dict[int, int]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        sh = self.ring.deg_shift
        it = iter(self.terms)
        d = next(it) >> sh
        return all((m >> sh) == d for m in it)

    @property
    def degree(self) -> int:
        """Total degree (``-1`` for zero)."""
        if not self.terms:
            return -1
        sh = self.ring.deg_shift
        return max(m >> sh for m in self.terms)

    def sorted_terms(self) -> List[Tuple[int, int]]:
        key = self.ring.sort_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def lead_monomial(self) -> int:
        return min(self.terms, key=self.ring.sort_key)

    def lead_coefficient(self) -> int:
        return self.terms[self.lead_monomial()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        p = self.ring.characteristic
        inv = pow(self.lead_coefficient(), p - 2, p)
        return Polynomial(self.ring, {m: c * inv % p for m, c in self.terms.items()})

    def is_constant(self) -> bool:
        return all(m == 0 for m in self.terms)

    def constant_value(self) -> int:
        return self.terms.get(0, 0)

    def exponents(self) -> Iterator[Tuple[Tuple[int, ...], int]]:
        for m, c in self.sorted_terms():
            yield self.ring.unpack(m), c

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.characteristic
        total = 0
        for exps, c in self.exponents():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = v * pow(x, e, p) % p
            total += v
        return total % p

    def variables(self) -> List[int]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(self.ring.unpack(m)):
                if e:
                    used.add(i)
        return sorted(used)

    def substitute_linear(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace ``x_i`` by ``images[i]`` (used for coordinate changes)."""
        result = self.ring.zero()
        powers: Dict[Tuple[int, int], Polynomial] = {}
        for exps, c in self.exponents():
            term = self.ring.const(c)
            for i, e in enumerate(exps):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = images[i] ** e
                    term = term * powers[key]
            result = result + term
        return result

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if other.ring != self.ring:
            raise RingError("polynomials live in different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, add_terms(self.terms, other.terms, 1, self.ring.characteristic))

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, add_terms(self.terms, other.terms, -1, self.ring.characteristic))

    def __rsub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self) -> "Polynomial":
        p = self.ring.characteristic
        return Polynomial(self.ring, {m: (p - c) % p for m, c in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            p = self.ring.characteristic
            c = other % p
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, mul_terms(self.terms, other.terms, self.ring.characteristic))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise RingError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, mono: int, coeff: int = 1) -> "Polynomial":
        p = self.ring.characteristic
        return Polynomial(self.ring, {m + mono: c * coeff % p for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            if m == 0:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(self.ring.mono_str(m))
            else:
                pieces.append(f"{c}*{self.ring.mono_str(m)}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def add_terms(a: Dict[int, int], b: Dict[int, int], sign: int, p: int) -> Dict[int, int]:
    out = dict(a)
    for m, c in b.items():
        v = (out.get(m, 0) + sign * c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def mul_terms(a: Dict[int, int], b: Dict[int, int], p: int) -> Dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    out: Dict[int, int] = {}
    get = out.get
    for mb, cb in b.items():
        for ma, ca in a.items():
            m = ma + mb
            out[m] = (get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def poly_sum(ring: Ring, polys: Iterable[Polynomial]) -> Polynomial:
    return reduce(lambda x, y: x + y, polys, ring.zero())


def random_form(ring: Ring, degree: int, rng, monomials: Optional[List[int]] = None) -> Polynomial:
    """Dense random homogeneous form; ``rng`` is a ``numpy.random.Generator``."""
    mons = monomials if monomials is not None else ring.monomials_of_degree(degree)
    p = ring.characteristic
    coeffs = rng.integers(0, p, size=len(mons))
    return Polynomial(ring, {m: int(c) for m, c in zip(mons, coeffs) if c})
