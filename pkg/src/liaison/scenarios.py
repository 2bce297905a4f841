"""Named example constructions and the checks run against each of them.

Every expected value in a report carries a tag: ``PAPER`` for values
displayed in the source literature, ``DERIVED`` for values produced by an
independent computation, ``TRIVIAL`` for identities that hold by definition.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .ideal import HVector, Ideal, degree_slice_basis, intersect, saturate
from .liaison import (TERMINAL_CI, TERMINAL_CYCLE, GorensteinReport, LinkStep, LinkTrace,
                      basic_double_link, child_seed, gorenstein_double_link, least_ci_degrees,
                      link, minimal_licci_run, minimal_link, mu, sample_ci)
from .pfaffian import (SkewSymmetricMatrix, buchsbaum_eisenbud_ideal, check_pf_squared,
                       even_principal_submatrices, random_be_matrix)
from .resolution import BettiTable, betti_table, deficiency_profile
from .ring import DEFAULT_PRIME, Polynomial, Ring, random_form

SECOND_PRIME = 31013

PAPER = "PAPER"
DERIVED = "DERIVED"
TRIVIAL = "TRIVIAL"


class ScenarioError(ValueError):
    pass


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    tag: str
    finding: bool = False

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_json(self) -> dict:
        return {"name": self.name, "expected": _jsonable(self.expected), "actual": _jsonable(self.actual),
                "tag": self.tag, "pass": self.passed, "finding": self.finding}


def _jsonable(v):
    if isinstance(v, Ideal):
        return [str(g) for g in v.generators]
    if isinstance(v, HVector):
        return {"h": list(v.coefficients), "dim": v.dimension}
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class Scenario:
    name: str
    params: Dict[str, int]
    ring: Ring
    ideal: Ideal
    extras: Dict[str, object] = field(default_factory=dict)


@dataclass
class ScenarioReport:
    scenario: str
    params: Dict[str, int]
    trace: Optional[LinkTrace]
    checks: List[Check]
    runtime: float
    gorenstein: List[GorensteinReport] = field(default_factory=list)
    ring_header: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.finding)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "params": dict(self.params),
            "ring": self.ring_header,
            "trace": self.trace.to_json() if self.trace else None,
            "gorenstein_reports": [r.to_json() for r in self.gorenstein],
            "checks": [c.to_json() for c in self.checks],
            "pass": self.passed,
            "runtime": round(self.runtime, 3),
        }

    def text(self) -> str:
        lines = [f"scenario {self.scenario} {self.params}  ({self.ring_header})"]
        if self.trace is not None:
            for k, step in enumerate(self.trace.steps):
                lines.append(f"  link {k + 1}: CI {step.ci.degrees}  mu {step.mu_before} -> {step.mu_after}"
                             f"  deg {step.degree_before} -> {step.degree_after}")
            lines.append(f"  terminal: {self.trace.terminal_status}")
        for c in self.checks:
            mark = "ok  " if c.passed else ("FIND" if c.finding else "FAIL")
            lines.append(f"  [{mark}] {c.name} [{c.tag}]")
            if not c.passed:
                lines.append(f"         expected {_jsonable(c.expected)}")
                lines.append(f"         actual   {_jsonable(c.actual)}")
        lines.append(f"  {'PASS' if self.passed else 'FAIL'} in {self.runtime:.2f}s")
        return "\n".join(lines)


# -- constructions -------------------------------------------------------------------


def _embed_plane_form(ring: Ring, rng: np.random.Generator, d: int, avoid: Optional[List[int]] = None,
                      force: Optional[List[int]] = None) -> Polynomial:
    """Random form of degree ``d`` in ``x0, x1, x2``.

    Monomials in ``avoid`` get coefficient 0; those in ``force`` a nonzero one.
    """
    mons = [m for m in ring.monomials_of_degree(d) if ring.unpack(m)[3] == 0]
    avoid = set(avoid or [])
    force = set(force or [])
    p = ring.characteristic
    terms = {}
    for m in mons:
        if m in avoid:
            continue
        c = int(rng.integers(1 if m in force else 0, p))
        if c:
            terms[m] = c
    return Polynomial(ring, terms)


def skew_lines(ring: Ring) -> Ideal:
    x0, x1, x2, x3 = ring.gens()
    return intersect(Ideal(ring, [x0, x1]), Ideal(ring, [x2, x3]))


def line_plus_plane_curve(ring: Ring, d: int, seed: int) -> Tuple[Ideal, Polynomial]:
    """Line ``x0 = x1 = 0`` plus a plane curve ``x3 = F = 0`` missing it."""
    if d < 1:
        raise ScenarioError("line_plus_plane_curve needs d >= 1")
    x0, x1, x2, x3 = ring.gens()
    rng = np.random.default_rng(child_seed(seed, "plane form"))
    # the line meets the plane at (0:0:1:0); F must not vanish there
    F = _embed_plane_form(ring, rng, d, force=[ring.pack((0, 0, d, 0))])
    return intersect(Ideal(ring, [x0, x1]), Ideal(ring, [x3, F])), F


def thm34_curve(ring: Ring, d: int, e: int, seed: int) -> Tuple[Ideal, Ideal, Polynomial, Polynomial]:
    """``ell * I_C1 + (f)`` with ``deg f = e``; returns ``(I_C, I_C1, f, ell)``."""
    if not 4 <= e <= d:
        raise ScenarioError(f"thm34_curve needs 4 <= e <= d, got d={d}, e={e}")
    c1, _ = line_plus_plane_curve(ring, d, seed)
    rng = np.random.default_rng(child_seed(seed, "thm34"))
    p = ring.characteristic
    basis = degree_slice_basis(c1, e)
    f = ring.zero()
    for b, c in zip(basis, rng.integers(0, p, size=len(basis))):
        if c:
            f = f + b * int(c)
    ell = random_form(ring, 1, rng)
    return basic_double_link(c1, f, ell), c1, f, ell


def twisted_cubic_points(ring: Ring, m: int) -> Ideal:
    """Points ``(1 : t : t^2 : t^3)`` for ``t = 1..m``."""
    if m < 1 or m >= ring.characteristic:
        raise ScenarioError("twisted_cubic_points needs 1 <= m < p")
    x0, x1, x2, x3 = ring.gens()
    out = None
    for t in range(1, m + 1):
        pt = Ideal(ring, [x1 - x0 * t, x2 - x0 * (t * t), x3 - x0 * (t ** 3)])
        out = pt if out is None else intersect(out, pt)
    return out


def bd_example(ring: Ring, d: int, npoints: int, seed: int) -> Ideal:
    """Plane complete intersection of type (d, d) through ``P = (1:0:0:0)`` with
    ``P`` removed, together with ``npoints`` points on the line ``x1 = x2 = 0``."""
    x0, x1, x2, x3 = ring.gens()
    rng = np.random.default_rng(child_seed(seed, "bd", d))
    xd = ring.pack((d, 0, 0, 0))
    F = _embed_plane_form(ring, rng, d, avoid=[xd])
    G = _embed_plane_form(ring, rng, d, avoid=[xd])
    X = Ideal(ring, [x3, F, G])
    Z1 = saturate(X, Ideal(ring, [x1, x2, x3]))
    g = ring.one()
    for t in range(1, npoints + 1):
        g = g * (x0 - x3 * t)
    Z2 = Ideal(ring, [x1, x2, g])
    return intersect(Z1, Z2)


def be_generic(ring: Ring, s: int, entry_degree: int, seed: int) -> Tuple[Ideal, SkewSymmetricMatrix]:
    M = random_be_matrix(ring, s, [entry_degree] * s, child_seed(seed, "be"), shift=entry_degree)
    return buchsbaum_eisenbud_ideal(M), M


DEFAULTS: Dict[str, Dict[str, int]] = {
    "skew_lines": {},
    "line_plus_plane_curve": {"d": 4},
    "thm34_curve": {"d": 4, "e": 4},
    "twisted_cubic_points": {"n": 8},
    "bd_ex1": {},
    "bd_ex2": {},
    "be_generic": {"s": 7, "e": 1},
}
COMMON = {"seed": 1, "prime": DEFAULT_PRIME, "max_steps": 6}


def scenario_names() -> List[str]:
    return list(DEFAULTS)


def _params(name: str, params: Optional[Dict[str, int]]) -> Dict[str, int]:
    if name not in DEFAULTS:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {', '.join(DEFAULTS)}")
    out = dict(COMMON)
    out.update(DEFAULTS[name])
    for k, v in (params or {}).items():
        if v is None:
            continue
        if k not in out:
            raise ScenarioError(f"scenario {name} takes no parameter {k!r}")
        out[k] = int(v)
    return out


def build_scenario(name: str, params: Optional[Dict[str, int]] = None) -> Scenario:
    prm = _params(name, params)
    ring = Ring(4, prm["prime"])
    seed = prm["seed"]
    extras: Dict[str, object] = {}
    if name == "skew_lines":
        I = skew_lines(ring)
    elif name == "line_plus_plane_curve":
        I, _ = line_plus_plane_curve(ring, prm["d"], seed)
    elif name == "thm34_curve":
        I, c1, f, ell = thm34_curve(ring, prm["d"], prm["e"], seed)
        extras.update(c1=c1, f=f, ell=ell)
    elif name == "twisted_cubic_points":
        I = twisted_cubic_points(ring, prm["n"])
    elif name == "bd_ex1":
        I = bd_example(ring, 3, 4, seed)
    elif name == "bd_ex2":
        I = bd_example(ring, 6, 10, seed)
    else:
        if prm["s"] < 3 or prm["s"] % 2 == 0:
            raise ScenarioError("be_generic needs an odd size s >= 3")
        if prm["e"] < 1:
            raise ScenarioError("be_generic needs entry degree e >= 1")
        I, M = be_generic(ring, prm["s"], prm["e"], seed)
        extras["matrix"] = M
    return Scenario(name, prm, ring, I, extras)


# -- running --------------------------------------------------------------------------


def _koszul_betti(degrees) -> BettiTable:
    """Betti table of a complete intersection: exterior powers of the generators."""
    from itertools import combinations

    table: Dict[Tuple[int, int], int] = {}
    for k in range(1, len(degrees) + 1):
        for sub in combinations(degrees, k):
            key = (k - 1, sum(sub))
            table[key] = table.get(key, 0) + 1
    return BettiTable(table)


def _invariant_checks(ideals: List[Tuple[str, Ideal]], steps: List[LinkStep]) -> List[Check]:
    out = []
    for label, I in ideals:
        out.append(Check(f"K-polynomial of Betti table = Hilbert numerator ({label})",
                         I.kpolynomial(), betti_table(I).kpolynomial(), TRIVIAL))
    for k, st in enumerate(steps, start=1):
        out.append(Check(f"link {k}: c : (c : I) = I", True, st.involution, TRIVIAL))
        out.append(Check(f"link {k}: deg I + deg residual = deg CI", st.ci.degree,
                         st.degree_before + st.degree_after, TRIVIAL))
    return out


def _gorenstein_loop(I: Ideal, seed: int, max_double_steps: int, matrix=None):
    """Repeated Gorenstein double links; returns (trace, reports)."""
    trace = LinkTrace(seed=seed, ring_header=I.ring.header())
    reports = []
    current = I
    for t in range(max_double_steps):
        if mu(current) == current.codimension():
            trace.terminal_status = TERMINAL_CI
            break
        a, b, rep = gorenstein_double_link(current, child_seed(seed, "double", t),
                                           matrix=matrix if t == 0 else None)
        trace.steps.extend([a, b])
        reports.append(rep)
        current = b.residual_ideal
    else:
        if mu(current) == current.codimension():
            trace.terminal_status = TERMINAL_CI
    return trace, reports


def run_scenario(name: str, params: Optional[Dict[str, int]] = None) -> ScenarioReport:
    start = time.perf_counter()
    sc = build_scenario(name, params)
    prm = sc.params
    I = sc.ideal
    seed = prm["seed"]
    checks: List[Check] = []
    trace: Optional[LinkTrace] = None
    reports: List[GorensteinReport] = []
    betti = betti_table(I)
    shape = BettiTable.from_shape

    if name == "skew_lines":
        x0, x1, x2, x3 = sc.ring.gens()
        checks.append(Check("ideal", Ideal(sc.ring, [x0 * x2, x0 * x3, x1 * x2, x1 * x3]), I, TRIVIAL))
        checks.append(Check("Betti table", shape({0: {2: 4}, 1: {3: 4}, 2: {4: 1}}), betti, PAPER))
        checks.append(Check("degree", 2, I.degree(), PAPER))
        checks.append(Check("deficiency profile", {0: 1}, deficiency_profile(I).as_dict(), PAPER))
        checks.append(Check("least CI type", (2, 2), least_ci_degrees(I, 2), DERIVED))
        trace = minimal_licci_run(I, prm["max_steps"], seed)
        checks.append(Check("first residual Betti equals source", betti, trace.steps[0].betti_after, DERIVED))
        checks.append(Check("terminal status", TERMINAL_CYCLE, trace.terminal_status, DERIVED))

    elif name == "line_plus_plane_curve":
        d = prm["d"]
        checks.append(Check("Betti table", shape({0: {2: 2, d + 1: 2}, 1: {3: 1, d + 2: 3}, 2: {d + 3: 1}}),
                            betti, PAPER))
        checks.append(Check("deficiency profile", {t: 1 for t in range(d)},
                            deficiency_profile(I).as_dict(), PAPER))
        checks.append(Check("least CI type", (2, d + 1), least_ci_degrees(I, 2), PAPER))
        trace = minimal_licci_run(I, prm["max_steps"], seed)
        res = trace.steps[0].residual_ideal
        checks.append(Check("minimal link residual has the same deficiency profile",
                            deficiency_profile(I).as_dict(), deficiency_profile(res).as_dict(), PAPER))
        checks.append(Check("terminal status", TERMINAL_CYCLE, trace.terminal_status, DERIVED))

    elif name == "thm34_curve":
        d, e = prm["d"], prm["e"]
        c1: Ideal = sc.extras["c1"]
        checks.append(Check("least CI type", (3, d + 2), least_ci_degrees(I, 2), PAPER, finding=True))
        checks.append(Check("degree = deg C1 + e", d + 1 + e, I.degree(), TRIVIAL))
        prof_c, prof_c1 = deficiency_profile(I).as_dict(), deficiency_profile(c1).as_dict()
        checks.append(Check("deficiency profile is C1's shifted one degree right",
                            {t + 1: v for t, v in prof_c1.items()}, prof_c, PAPER))
        trace = minimal_licci_run(I, 3, seed)
        checks.append(Check("Betti table after two minimal links", betti,
                            trace.steps[1].betti_after if len(trace.steps) > 1 else None, PAPER))
        checks.append(Check("terminal status", TERMINAL_CYCLE, trace.terminal_status, PAPER))
        checks.append(Check("cycle within 3 double steps", True, len(trace.steps) <= 6, PAPER))

    elif name == "twisted_cubic_points":
        m = prm["n"]
        if m == 8:
            checks.append(Check("h-vector", (1, 3, 3, 1), I.hvector().coefficients, PAPER))
            checks.append(Check("least CI type", (2, 2, 3), least_ci_degrees(I, 3), PAPER))
        trace, reports = _gorenstein_loop(I, seed, prm["max_steps"])
        if m == 8:
            checks.append(Check("residual h-vector", (1, 2, 1),
                                trace.steps[0].residual_ideal.hvector().coefficients, PAPER))
        checks.append(Check("terminal status", TERMINAL_CI, trace.terminal_status, PAPER))

    elif name in ("bd_ex1", "bd_ex2"):
        if name == "bd_ex1":
            want = shape({0: {2: 2, 3: 2, 4: 1}, 1: {3: 1, 4: 2, 5: 2}, 2: {7: 1}})
            want_res = shape({0: {2: 2, 3: 1, 4: 1}, 1: {4: 2, 5: 2, 6: 1}, 2: {6: 1, 7: 1}})
            first, deg_u = (2, 3, 4), 2
        else:
            want = shape({0: {2: 2, 6: 2, 10: 1}, 1: {3: 1, 7: 2, 11: 2}, 2: {13: 1}})
            want_res = shape({0: {2: 1, 5: 1, 6: 1, 10: 1}, 1: {7: 2, 11: 2, 15: 1}, 2: {12: 1, 16: 1}})
            first, deg_u = (2, 6, 10), 5
        checks.append(Check("Betti table", want, betti, PAPER))
        if name == "bd_ex1":
            checks.append(Check("h-vector", (1, 3, 4, 3, 1), I.hvector().coefficients, PAPER))
        trace, reports = _gorenstein_loop(I, seed, prm["max_steps"])
        checks.append(Check("first minimal link type", first, trace.steps[0].ci.degrees, PAPER))
        checks.append(Check("residual Betti table", want_res, trace.steps[0].betti_after, PAPER))
        checks.append(Check("deg u", deg_u, reports[0].deg_u, PAPER))
        checks.append(Check("deg f", 2, reports[0].deg_f, PAPER))
        if name == "bd_ex1":
            checks.append(Check("residual h-vector", (1, 3, 4, 3, 1),
                                trace.steps[0].residual_ideal.hvector().coefficients, PAPER))
            checks.append(Check("link types", [(2, 3, 4), (2, 2, 4)], trace.ci_types(), PAPER))
            final = trace.final_ideal(I)
            checks.append(Check("terminal complete intersection type", [1, 2, 2],
                                sorted(g.degree for g in final.generators), PAPER))
        checks.append(Check("terminal status", TERMINAL_CI, trace.terminal_status, PAPER))

    else:
        s, e = prm["s"], prm["e"]
        M: SkewSymmetricMatrix = sc.extras["matrix"]
        checks.append(Check("codimension", 3, I.codimension(), DERIVED))
        checks.append(Check("pf^2 = det on even principal submatrices", True,
                            all(check_pf_squared(M, k) for k in even_principal_submatrices(M)), TRIVIAL))
        gdeg = (s - 1) // 2 * e
        tag = PAPER if (s, e) == (7, 1) else DERIVED
        checks.append(Check("Betti table", shape({0: {gdeg: s}, 1: {gdeg + e: s}, 2: {2 * gdeg + e: 1}}),
                            betti, tag))
        if (s, e) == (7, 1):
            rng_seed = child_seed(seed, "example 6.9")
            step1 = minimal_link(I, child_seed(rng_seed, "first"))
            J = step1.residual_ideal
            checks.append(Check("first minimal link type", (3, 3, 3), step1.ci.degrees, PAPER))
            checks.append(Check("residual Betti table",
                                shape({0: {2: 1, 3: 3}, 1: {5: 7}, 2: {6: 4}}), step1.betti_after, PAPER))
            general = sample_ci(J, (3, 3, 3), child_seed(rng_seed, "cubics"))
            step2 = link(J, general, minimal=False)
            checks.append(Check("non-minimal (3,3,3) second link keeps mu", 7, step2.mu_after, PAPER))
            checks.append(Check("non-minimal second link Betti shape", betti, step2.betti_after, PAPER))
            step3 = minimal_link(J, child_seed(rng_seed, "second"))
            checks.append(Check("minimal second link drops mu to 5", 5, step3.mu_after, PAPER))
            checks.extend(_invariant_checks([("example residual", J)], [step1, step2, step3]))
        trace, reports = _gorenstein_loop(I, seed, prm["max_steps"], matrix=M)
        checks.append(Check("double steps to a CI", (s - 3) // 2, len(reports), PAPER))
        checks.append(Check("terminal status", TERMINAL_CI, trace.terminal_status, PAPER))

    for k, rep in enumerate(reports, start=1):
        checks.append(Check(f"double step {k}: mu drops by 2", True, rep.mu_drop_ok, PAPER))
        checks.append(Check(f"double step {k}: deg u < deg g", True, rep.u_below_g, PAPER))
        checks.append(Check(f"double step {k}: (u, f) regular", True, rep.u_f_regular, PAPER))
        checks.append(Check(f"double step {k}: CI degree sum decreases", True, rep.descent, PAPER))
        if rep.u_degree_by_triple is not None:
            checks.append(Check(f"double step {k}: deg u < deg g for all Pfaffian index triples", True,
                                all(r["ok"] for r in rep.u_degree_by_triple), PAPER))

    ideals = [("input", I)]
    if trace is not None:
        ideals += [(f"residual {k}", st.residual_ideal) for k, st in enumerate(trace.steps, start=1)]
    checks.extend(_invariant_checks(ideals, trace.steps if trace else []))
    return ScenarioReport(name, prm, trace, checks, time.perf_counter() - start, reports, sc.ring.header())
