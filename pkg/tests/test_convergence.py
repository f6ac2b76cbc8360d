import numpy as np
import pytest
from hypothesis import assume, given, settings

from purikit.bell_core import XState, random_density
from purikit.convergence import (
    Attractor, Verdict, classify_by_iteration, condition_general, condition_x,
    quadratic_form_F,
)
from purikit.purification_map import apply_general, apply_x
from purikit.states import example1, example2

from strategies import x_states


@pytest.mark.parametrize("r1, r2, expected", [(1, 0, 1), (0.5, 0.3, 0), (0.5, 0.9, 0),
                                              (0.7, 0.1, 0.32)])
def test_quadratic_form(r1, r2, expected):
    assert quadratic_form_F(r1, r2) == pytest.approx(expected, abs=1e-15)


def test_condition_x_examples():
    assert condition_x(XState(0.7, 0.1, 0.1, 0.1)).verdict is Verdict.PURIFIES_PSI_MINUS
    assert condition_x(XState(0.1, 0.1, 0.1, 0.7)).verdict is Verdict.PURIFIES_PSI_PLUS
    # F(1/4, 1/4) = -1/4: the maximally mixed state is strictly non-purifiable
    mixed = condition_x(XState(0.25, 0.25, 0.25, 0.25))
    assert mixed.verdict is Verdict.NO_PURIFICATION
    assert mixed.psi_minus.lhs == mixed.psi_plus.lhs == -0.25
    assert condition_x(XState(0.5, 0.3, 0.1, 0.1)).verdict is Verdict.BOUNDARY
    assert condition_x(XState(0.3, 0.3, 0.2, 0.2)).verdict is Verdict.NO_PURIFICATION


def test_condition_general_example1():
    c = condition_general(example1(0.6))
    assert c.psi_minus.lhs == pytest.approx(-0.16, abs=1e-15)
    assert c.psi_minus.rhs == pytest.approx(-0.36, abs=1e-15)
    assert c.verdict is Verdict.PURIFIES_PSI_MINUS


@pytest.mark.parametrize("c", [0.01, 0.1, 0.3, 0.5])
def test_condition_general_example2(c):
    cls = condition_general(example2(c))
    assert cls.psi_minus.lhs == pytest.approx(2 * c - 1, abs=1e-15)
    assert cls.psi_minus.rhs == pytest.approx(-(1 - c) ** 2, abs=1e-15)
    assert cls.verdict is Verdict.PURIFIES_PSI_MINUS


def test_condition_general_reduces_to_condition_x_on_bell_diagonal():
    for seed in range(200):
        rho = random_density(seed, "bell_diagonal")
        g = condition_general(rho)
        x = condition_x(XState.from_matrix(rho))
        assert g.verdict is x.verdict
        assert g.psi_minus.value == x.psi_minus.value


def test_classification_json():
    d = condition_x(XState(0.7, 0.1, 0.1, 0.1)).to_dict()
    assert d["verdict"] == "PurifiesPsiMinus"
    assert set(d["margins"]) == {"psi_minus", "psi_plus"}


def test_classify_by_iteration_examples():
    assert classify_by_iteration(XState(0.7, 0.1, 0.1, 0.1)).attractor is Attractor.PSI_MINUS
    mixed = classify_by_iteration(XState(0.25, 0.25, 0.25, 0.25))
    assert mixed.attractor is Attractor.MIXED and mixed.steps == 0
    stuck = classify_by_iteration(XState(0.5, 0, 0, 0.5, 0.5), max_steps=20)
    assert stuck.attractor is Attractor.NON_CONVERGENT
    assert stuck.final == XState(0.5, 0, 0, 0.5, 0.5)


def test_classify_detects_period_two():
    # a genuine two-cycle on the r3 = 0 face
    v = np.array([0.5, 0.2071067811865476, 0.0, 0.2928932188134524])
    s = XState(*v)
    res = classify_by_iteration(s, max_steps=4)
    assert res.attractor is Attractor.NON_CONVERGENT and res.period_two


@settings(max_examples=300, deadline=None)
@given(x_states())
def test_F_monotone_in_purifiable_region(s):
    assume(s.r1 > 0.5 or s.r2 > 0.5)
    out = apply_x(s).x
    before, after = quadratic_form_F(s.r1, s.r2), quadratic_form_F(out.r1, out.r2)
    assert after >= before - 1e-15
    if s.r3 + s.r4 > 1e-6:
        assert after > before


@settings(max_examples=300, deadline=None)
@given(x_states())
def test_coherence_ratio(s):
    denom = abs(s.r14) + abs(s.r23)
    assume(denom > 1e-12)
    out = apply_x(s).x
    assert (abs(out.r14) + abs(out.r23)) / denom <= 1 + 1e-14


def test_general_condition_soundness_sample():
    hits = 0
    for seed in range(3000):
        rho = random_density(seed)
        if condition_general(rho).verdict is Verdict.PURIFIES_PSI_MINUS:
            hits += 1
            assert apply_general(rho).state[0, 0].real > 0.5
        if condition_general(rho).verdict is Verdict.PURIFIES_PSI_PLUS:
            assert apply_general(rho).state[3, 3].real > 0.5
    assert hits > 100
