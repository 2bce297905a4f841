import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liaison.ideal import Ideal, degree_slice_basis, intersect
from liaison.liaison import (TERMINAL_CI, TERMINAL_CYCLE, CompleteIntersection, LinkageError, SamplingError,
                             basic_double_link, child_seed, gorenstein_double_link, is_regular_sequence,
                             least_ci_degrees, link, minimal_licci_run, minimal_link, mu, sample_ci)
from liaison.pfaffian import buchsbaum_eisenbud_ideal, random_be_matrix
from liaison.resolution import BettiTable
from liaison.ring import Ring, random_form
from liaison.scenarios import bd_example, line_plus_plane_curve, skew_lines, thm34_curve, twisted_cubic_points

R = Ring()
SKEW = BettiTable.from_shape({0: {2: 4}, 1: {3: 4}, 2: {4: 1}})


@pytest.fixture(scope="module")
def points():
    return twisted_cubic_points(R, 8)


@pytest.fixture(scope="module")
def thm34():
    return thm34_curve(R, 4, 4, 1)


def test_is_regular_sequence_examples(thm34):
    x0, x1, x2, x3 = R.gens()
    assert is_regular_sequence([x0, x1, x2])
    assert not is_regular_sequence([x0 * x1, x0 * x2])
    _, _, _, ell = thm34
    h = random_form(R, 1, np.random.default_rng(0))
    assert not is_regular_sequence([ell * x3 * x0, x3 * h])


def test_least_ci_degrees_examples(points):
    assert least_ci_degrees(skew_lines(R), 2) == (2, 2)
    for d in (3, 4):
        c1, _ = line_plus_plane_curve(R, d, 1)
        assert least_ci_degrees(c1, 2) == (2, d + 1)
    assert least_ci_degrees(points, 3) == (2, 2, 3)
    with pytest.raises(LinkageError):
        least_ci_degrees(skew_lines(R), 3)


def test_sample_ci_skew_lines():
    I = skew_lines(R)
    for seed in range(3):
        ci = sample_ci(I, (2, 2), seed)
        assert ci.degrees == (2, 2) and is_regular_sequence(ci.forms)
        assert I.contains_ideal(ci.ideal)
    assert sample_ci(I, (2, 2), 9).forms == sample_ci(I, (2, 2), 9).forms


def test_sample_ci_exhausts_on_cubics(thm34):
    I_C = thm34[0]
    cubics = degree_slice_basis(I_C, 3)
    assert len(cubics) == 2
    with pytest.raises(SamplingError) as info:
        sample_ci(I_C, (3, 3), 1)
    assert info.value.diagnostics["not_regular"] == info.value.diagnostics["tries"]


def test_link_skew_lines():
    x0, x1, x2, x3 = R.gens()
    I = skew_lines(R)
    step = link(I, CompleteIntersection.from_forms([x0 * x2, x1 * x3]))
    expected = intersect(Ideal(R, [x0, x3]), Ideal(R, [x1, x2]))
    assert step.residual_ideal == expected
    assert step.betti_after == step.betti_before == SKEW
    assert step.involution
    assert step.degree_before + step.degree_after == 4


def test_link_points(points):
    assert list(points.hvector()) == [1, 3, 3, 1]
    step = minimal_link(points, 1)
    assert step.ci.degrees == (2, 2, 3)
    assert list(step.residual_ideal.hvector()) == [1, 2, 1]
    assert step.involution


def test_link_errors():
    x0, x1, x2, x3 = R.gens()
    with pytest.raises(LinkageError):
        link(skew_lines(R), CompleteIntersection.from_forms([x0 * x0, x3 * x3]))
    ci = CompleteIntersection.from_forms([x0, x1])
    with pytest.raises(LinkageError):
        link(Ideal(R, [x0, x1]), ci)
    with pytest.raises(LinkageError):
        CompleteIntersection.from_forms([x0 * x1, x0 * x2])


def test_minimal_link_examples(thm34):
    c1, _ = line_plus_plane_curve(R, 4, 1)
    step = minimal_link(c1, 3)
    assert step.ci.degrees == (2, 5)
    assert step.betti_after == step.betti_before
    assert minimal_link(thm34[0], 3).ci.degrees == (3, 6)
    Z = bd_example(R, 3, 4, 1)
    assert minimal_link(Z, 3).ci.degrees == (2, 3, 4)


def test_basic_double_link_examples(thm34):
    x0, x1, x2, _ = R.gens()
    assert basic_double_link(Ideal(R, [x0, x1]), x0, x2) == Ideal(R, [x0, x1 * x2])
    I_C, c1, f, ell = thm34
    assert I_C == Ideal(R, [ell * g for g in c1.generators] + [f])
    assert I_C.degree() == c1.degree() + f.degree
    with pytest.raises(LinkageError):
        basic_double_link(Ideal(R, [x0, x1]), x2, x0)
    with pytest.raises(LinkageError):
        basic_double_link(Ideal(R, [x0, x1]), x0, x0 * x1)
    with pytest.raises(LinkageError):
        basic_double_link(Ideal(R, [x0, x1]), x0, x0)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 4))
def test_basic_double_link_degree_additive(seed, e):
    rng = np.random.default_rng(seed)
    I = skew_lines(R)
    basis = degree_slice_basis(I, e)
    f = R.zero()
    for b, c in zip(basis, rng.integers(1, R.characteristic, size=len(basis))):
        f = f + b * int(c)
    J = basic_double_link(I, f, random_form(R, 1, rng))
    assert J.degree() == I.degree() + e
    assert J.codimension() == 2


def test_licci_runs(points, thm34):
    trace = minimal_licci_run(points, 4, 1)
    assert trace.terminal_status == TERMINAL_CI
    assert len(trace.steps) == 2
    trace = minimal_licci_run(thm34[0], 3, 1)
    assert trace.terminal_status == TERMINAL_CYCLE
    assert len(trace.steps) == 2
    assert trace.steps[1].betti_after == trace.steps[0].betti_before
    ci = Ideal(R, R.gens()[:2])
    trace = minimal_licci_run(ci, 3, 1)
    assert trace.steps == [] and trace.terminal_status == TERMINAL_CI


def test_licci_run_is_reproducible(points):
    a = minimal_licci_run(points, 4, 17).to_json()
    b = minimal_licci_run(points, 4, 17).to_json()
    assert a == b


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["skew", "c1", "points"]))
def test_link_invariants(seed, which):
    if which == "skew":
        I = skew_lines(R)
    elif which == "c1":
        I = line_plus_plane_curve(R, 3, seed % 50)[0]
    else:
        I = twisted_cubic_points(R, 5)
    step = minimal_link(I, seed)
    assert step.involution
    assert step.degree_before + step.degree_after == step.ci.degree
    c = I.codimension()
    after = least_ci_degrees(step.residual_ideal, c)
    assert all(a <= b for a, b in zip(after, step.ci.degrees))


def test_gorenstein_double_link_linear_5x5():
    M = random_be_matrix(R, 5, [1] * 5, 1)
    first, second, report = gorenstein_double_link(buchsbaum_eisenbud_ideal(M), 1, matrix=M)
    assert (report.mu_before, report.mu_after) == (5, 3)
    assert report.ok and report.u_below_g and report.u_f_regular
    assert mu(second.residual_ideal) == 3


def test_gorenstein_double_link_bd_example():
    Z = bd_example(R, 3, 4, 1)
    first, second, report = gorenstein_double_link(Z, 1)
    assert report.first_ci == (2, 3, 4) and report.second_ci == (2, 2, 4)
    assert sum(report.first_ci) == 9 and sum(report.second_ci) == 8
    assert (report.mu_before, report.mu_after) == (5, 3)


def test_gorenstein_rejects_non_gorenstein():
    with pytest.raises(LinkageError):
        gorenstein_double_link(skew_lines(R), 1)
    six = twisted_cubic_points(R, 6)
    assert list(six.hvector()) == [1, 3, 2]
    with pytest.raises(LinkageError):
        gorenstein_double_link(six, 1)


def test_child_seeds_are_stable_and_distinct():
    assert child_seed(1, "link", 0) == child_seed(1, "link", 0)
    assert len({child_seed(1, "link", t) for t in range(50)}) == 50
