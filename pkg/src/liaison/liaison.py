"""Linkage by complete intersections and the drivers iterating it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .ideal import (Ideal, _generators_outside, degree_slice_basis, ideal_quotient,
                    minimal_generators, minimalized, slice_matrix)
from .resolution import BettiTable, betti_table
from .ring import Polynomial

SAMPLE_TRIES = 12

TERMINAL_CI = "complete_intersection_reached"
TERMINAL_CYCLE = "cycle_detected"
TERMINAL_LIMIT = "step_limit"


class LinkageError(RuntimeError):
    pass


class SamplingError(LinkageError):
    def __init__(self, message: str, diagnostics: Dict[str, object]):
        super().__init__(f"{message}: {diagnostics}")
        self.diagnostics = diagnostics


def child_seed(root: int, *path) -> int:
    """Deterministic seed for a sampling site below ``root``."""
    words = [int(root) & 0xFFFFFFFF]
    for part in path:
        if isinstance(part, str):
            words.extend(part.encode())
        else:
            words.append(int(part) & 0xFFFFFFFF)
    return int(np.random.SeedSequence(words).generate_state(1)[0])


def mu(ideal: Ideal) -> int:
    return len(minimal_generators(ideal))


@dataclass(frozen=True)
class CompleteIntersection:
    forms: Tuple[Polynomial, ...]
    degrees: Tuple[int, ...]

    @classmethod
    def from_forms(cls, forms: Sequence[Polynomial], check: bool = True) -> "CompleteIntersection":
        forms = tuple(sorted(forms, key=lambda f: f.degree))
        if check and not is_regular_sequence(forms):
            raise LinkageError(f"forms of degrees {[f.degree for f in forms]} are not a regular sequence")
        return cls(forms, tuple(f.degree for f in forms))

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.forms[0].ring, self.forms)

    @property
    def degree(self) -> int:
        return math.prod(self.degrees)

    @property
    def codimension(self) -> int:
        return len(self.forms)


def is_regular_sequence(forms: Sequence[Polynomial]) -> bool:
    """Homogeneous forms are regular iff they cut out the expected codimension."""
    forms = list(forms)
    if not forms or any(not f for f in forms):
        return False
    return Ideal(forms[0].ring, forms).codimension() == len(forms)


def least_ci_degrees(ideal: Ideal, c: int) -> Tuple[int, ...]:
    """``a_i`` = least ``t`` with the generators of degree ``<= t`` of codimension ``>= i``."""
    if ideal.codimension() < c:
        raise LinkageError(f"ideal has codimension {ideal.codimension()} < {c}")
    gens = sorted(minimal_generators(ideal), key=lambda g: g.degree)
    levels = sorted({g.degree for g in gens})
    codim_at = {}
    for t in levels:
        codim_at[t] = Ideal(ideal.ring, [g for g in gens if g.degree <= t]).codimension()
    out = []
    for i in range(1, c + 1):
        out.append(next(t for t in levels if codim_at[t] >= i))
    return tuple(out)


def _independent_mod_lower(ideal: Ideal, forms: Sequence[Polynomial], d: int) -> bool:
    """Whether ``forms`` (all of degree ``d``) are independent modulo ``(m I)_d``."""
    ring = ideal.ring
    lower = Ideal(ring, [g for g in minimal_generators(ideal) if g.degree < d])
    rows = degree_slice_basis(lower, d) if not lower.is_zero() else []
    base_rank = len(rows)
    mat, _ = slice_matrix(ring, list(rows) + list(forms), d)
    return linalg.rank(mat, ring.characteristic) == base_rank + len(forms)


def sample_ci(ideal: Ideal, degrees: Sequence[int], seed: int, tries: int = SAMPLE_TRIES,
              require_minimal: bool = True) -> CompleteIntersection:
    """Random regular sequence of the given degrees inside ``ideal``.

    Each form is a random combination of a basis of ``I_d``.  With
    ``require_minimal`` the forms must also extend to a minimal generating set.
    """
    ring = ideal.ring
    p = ring.characteristic
    degrees = sorted(int(a) for a in degrees)
    rng = np.random.default_rng(seed)
    slices = {d: degree_slice_basis(ideal, d) for d in set(degrees)}
    empty = [d for d, b in slices.items() if not b]
    if empty:
        raise SamplingError("no forms of the requested degree", {"degrees": degrees, "empty": empty})
    failures = {"not_regular": 0, "not_minimal": 0}
    for _ in range(tries):
        forms = []
        for d in degrees:
            coeffs = rng.integers(0, p, size=len(slices[d]))
            f = ring.zero()
            for c, b in zip(coeffs, slices[d]):
                if c:
                    f = f + b * int(c)
            forms.append(f)
        if not is_regular_sequence(forms):
            failures["not_regular"] += 1
            continue
        if require_minimal and not all(
                _independent_mod_lower(ideal, [f for f in forms if f.degree == d], d)
                for d in set(degrees)):
            failures["not_minimal"] += 1
            continue
        return CompleteIntersection.from_forms(forms, check=False)
    raise SamplingError("retries exhausted", {"degrees": degrees, "tries": tries, "seed": seed, **failures})


@dataclass
class LinkStep:
    ci: CompleteIntersection
    source_ideal: Ideal
    residual_ideal: Ideal
    minimal_flag: bool
    betti_before: BettiTable
    betti_after: BettiTable
    mu_before: int
    mu_after: int
    degree_before: int
    degree_after: int
    involution: Optional[bool] = None
    seed: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "ci_type": list(self.ci.degrees),
            "minimal": self.minimal_flag,
            "mu_before": self.mu_before,
            "mu_after": self.mu_after,
            "degree_before": self.degree_before,
            "degree_after": self.degree_after,
            "betti_before": self.betti_before.to_json(),
            "betti_after": self.betti_after.to_json(),
        }
        if self.involution is not None:
            out["involution"] = self.involution
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def link(ideal: Ideal, ci: CompleteIntersection, minimal: bool = False,
         verify_involution: bool = True, seed: Optional[int] = None) -> LinkStep:
    """Residual ``ci : I`` with Betti, generator and degree snapshots.

    ``I`` must be unmixed of codimension ``len(ci)``; this is not checked, but
    a failed degree count exposes most violations.
    """
    c = ci.ideal
    if not ideal.contains_ideal(c):
        raise LinkageError("complete intersection is not contained in the ideal")
    if c.contains_ideal(ideal):
        raise LinkageError("ideal equals the complete intersection; the residual would be the unit ideal")
    residual = ideal_quotient(c, ideal)
    deg_before, deg_after = ideal.degree(), residual.degree()
    if residual.codimension() != ci.codimension or deg_before + deg_after != ci.degree:
        raise LinkageError(
            f"degree bookkeeping failed: {deg_before} + {deg_after} != {ci.degree} "
            f"(is the ideal unmixed of codimension {ci.codimension}?)")
    involution = None
    if verify_involution:
        involution = ideal_quotient(c, residual) == ideal
    return LinkStep(ci, ideal, residual, minimal, betti_table(ideal), betti_table(residual),
                    mu(ideal), mu(residual), deg_before, deg_after, involution, seed)


def minimal_link(ideal: Ideal, seed: int, verify_involution: bool = True) -> LinkStep:
    c = ideal.codimension()
    degrees = least_ci_degrees(ideal, c)
    ci = sample_ci(ideal, degrees, seed)
    return link(ideal, ci, minimal=True, verify_involution=verify_involution, seed=seed)


def basic_double_link(ideal: Ideal, f: Polynomial, ell: Polynomial) -> Ideal:
    """``ell * I + (f)``, checked to be saturated."""
    ring = ideal.ring
    if not ell.is_homogeneous() or ell.degree != 1:
        raise LinkageError("ell must be a linear form")
    if not ideal.contains(f):
        raise LinkageError("f is not in the ideal")
    if not is_regular_sequence([ell, f]):
        raise LinkageError("(ell, f) is not a regular sequence")
    out = minimalized(Ideal(ring, [ell * g for g in ideal.generators] + [f]))
    irrelevant = Ideal(ring, ring.gens())
    if ideal_quotient(out, irrelevant) != out:
        raise LinkageError("basic double link is not saturated")
    return out


@dataclass
class LinkTrace:
    steps: List[LinkStep] = field(default_factory=list)
    terminal_status: str = TERMINAL_LIMIT
    seed: Optional[int] = None
    ring_header: str = ""

    def final_ideal(self, start: Ideal) -> Ideal:
        return self.steps[-1].residual_ideal if self.steps else start

    def ci_types(self) -> List[Tuple[int, ...]]:
        return [s.ci.degrees for s in self.steps]

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps], "terminal": self.terminal_status,
                "seed": self.seed, "ring": self.ring_header}


def _is_ci(ideal: Ideal) -> bool:
    return mu(ideal) == ideal.codimension()


def minimal_licci_run(ideal: Ideal, max_double_steps: int, seed: int,
                      verify_involution: bool = True) -> LinkTrace:
    """Link minimally until a complete intersection or a period-2 Betti cycle."""
    trace = LinkTrace(seed=seed, ring_header=ideal.ring.header())
    current = ideal
    for t in range(2 * max_double_steps):
        if _is_ci(current):
            trace.terminal_status = TERMINAL_CI
            return trace
        step = minimal_link(current, child_seed(seed, "link", t), verify_involution)
        trace.steps.append(step)
        current = step.residual_ideal
        if len(trace.steps) >= 2 and trace.steps[-1].betti_after == trace.steps[-2].betti_before:
            trace.terminal_status = TERMINAL_CYCLE
            return trace
    trace.terminal_status = TERMINAL_CI if _is_ci(current) else TERMINAL_LIMIT
    return trace


# -- Gorenstein double links ----------------------------------------------------------


@dataclass
class GorensteinReport:
    mu_before: int
    mu_middle: int
    mu_after: int
    first_ci: Tuple[int, ...]
    second_ci: Tuple[int, ...]
    deg_u: int
    deg_f: int
    deg_g: int
    u_below_g: bool
    u_f_regular: bool
    mu_drop_ok: bool
    descent: bool
    second_contains_u_degree: bool
    gorenstein_after: bool
    u_degree_by_triple: Optional[List[dict]] = None

    @property
    def ok(self) -> bool:
        checks = [self.u_below_g, self.u_f_regular, self.mu_drop_ok, self.descent, self.gorenstein_after]
        if self.u_degree_by_triple is not None:
            checks.append(all(r["ok"] for r in self.u_degree_by_triple))
        return all(checks)

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["first_ci"] = list(self.first_ci)
        out["second_ci"] = list(self.second_ci)
        out["ok"] = self.ok
        return out


class GorensteinCheckError(LinkageError):
    def __init__(self, report: GorensteinReport):
        super().__init__(f"Gorenstein double link check failed: {report.to_json()}")
        self.report = report


def residual_generator(ci: CompleteIntersection, residual: Ideal) -> Polynomial:
    """The generator ``u`` with ``ci : I = ci + (u)``."""
    extra = _generators_outside(ci.ideal, residual)
    if len(extra) != 1:
        raise LinkageError(f"residual needs {len(extra)} generators beyond the complete intersection, not 1")
    return extra[0]


def gorenstein_double_link(ideal: Ideal, seed: int, matrix=None,
                           verify_involution: bool = True) -> Tuple[LinkStep, LinkStep, GorensteinReport]:
    """Two minimal links of a codimension-3 Gorenstein ideal with the descent checks.

    ``matrix`` (a Buchsbaum-Eisenbud matrix of ``ideal``) adds the Pfaffian
    degree bound deg u < deg g over every index triple realizing the least CI type.
    """
    if ideal.codimension() != 3:
        raise LinkageError("expected a codimension 3 ideal")
    if _is_ci(ideal):
        raise LinkageError("ideal is already a complete intersection")
    before = betti_table(ideal)
    if not before.is_self_dual():
        raise LinkageError("ideal is not Gorenstein: Betti table is not self-dual")
    first = minimal_link(ideal, child_seed(seed, "first"), verify_involution)
    u = residual_generator(first.ci, first.residual_ideal)
    f, g, h = first.ci.forms
    second = minimal_link(first.residual_ideal, child_seed(seed, "second"), verify_involution)
    report = GorensteinReport(
        mu_before=first.mu_before,
        mu_middle=first.mu_after,
        mu_after=second.mu_after,
        first_ci=first.ci.degrees,
        second_ci=second.ci.degrees,
        deg_u=u.degree,
        deg_f=f.degree,
        deg_g=g.degree,
        u_below_g=u.degree < g.degree,
        u_f_regular=is_regular_sequence([u, f]),
        mu_drop_ok=second.mu_after == first.mu_before - 2,
        descent=sum(second.ci.degrees) < sum(first.ci.degrees),
        second_contains_u_degree=u.degree in second.ci.degrees,
        gorenstein_after=second.betti_after.is_self_dual(),
        u_degree_by_triple=u_degree_by_triple(matrix, ideal) if matrix is not None else None,
    )
    if not report.ok:
        raise GorensteinCheckError(report)
    return first, second, report


def u_degree_by_triple(matrix, ideal: Ideal) -> List[dict]:
    """``deg u < deg g`` for each index triple whose Pfaffians form a least-degree CI."""
    from .pfaffian import submaximal_pfaffians, watanabe_u

    pfs = submaximal_pfaffians(matrix)
    least = least_ci_degrees(ideal, 3)
    rows = []
    for i, j, k in combinations(range(matrix.size), 3):
        trio = sorted([pfs[i], pfs[j], pfs[k]], key=lambda q: q.degree)
        if tuple(q.degree for q in trio) != least or not is_regular_sequence(trio):
            continue
        u, _ = watanabe_u(matrix, i, j, k)
        rows.append({"indices": [i, j, k], "deg_u": u.degree, "deg_g": trio[1].degree,
                     "ok": u.degree < trio[1].degree})
    return rows
