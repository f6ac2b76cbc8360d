from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from purikit.bell_core import XState, bell_state, validate_density, X_MASK
from purikit.errors import DegenerateNormalization
from purikit.purification_map import apply_general, apply_x, iterate
from purikit.states import example1, example2, werner

from strategies import general_states, x_states


def exact_x_map(r1, r2, r3, r4):
    """Rational-arithmetic reference for the diagonal part of the X map."""
    r1, r2, r3, r4 = map(Fraction, (r1, r2, r3, r4))
    n = (r1 + r2) ** 2 + (r3 + r4) ** 2
    return ((r1 ** 2 + r2 ** 2) / n, 2 * r3 * r4 / n, 2 * r1 * r2 / n,
            (r3 ** 2 + r4 ** 2) / n), n


def test_werner_one_step():
    (e1, e2, e3, e4), n = exact_x_map("0.7", "0.1", "0.1", "0.1")
    assert n == Fraction(17, 25)
    out = apply_x(werner(0.7))
    assert np.allclose(out.state.diagonal().real,
                       [float(e1), float(e2), float(e3), float(e4)], atol=1e-15, rtol=0)
    assert out.normalization == pytest.approx(0.68, abs=1e-15)
    assert np.allclose(out.state.diagonal().real,
                       [0.7352941, 0.0294118, 0.2058824, 0.0294118], atol=1e-7)


def test_psi_minus_is_fixed():
    out = apply_general(bell_state(1))
    assert np.array_equal(out.state, bell_state(1))
    assert out.success_probability == 0.5


def test_maximally_mixed():
    out = apply_general(np.eye(4) / 4)
    assert np.allclose(out.state, np.eye(4) / 4, atol=1e-16)
    assert out.success_probability == pytest.approx(0.25, abs=1e-16)
    assert out.normalization == pytest.approx(0.5, abs=1e-16)


@pytest.mark.parametrize("x", [0.55, 0.6, 0.75, 0.9, 1.0])
def test_example1_r1(x):
    out = apply_general(example1(x))
    assert out.state[0, 0].real == pytest.approx(x ** 2 / (x ** 2 + (1 - x) ** 2), abs=1e-12)


def test_table_fixed_points_map_to_themselves():
    s = XState(0.1409, 0.2344, 0.1245, 0.5, check=False)
    out = apply_x(s).x
    assert np.abs(out.to_vector() - s.to_vector()).max() < 5e-4
    q = XState(0.25, 0.25, 0.25, 0.25, 0.25, 0.25)
    assert apply_x(q).x == q
    q = XState(0.25, 0.25, 0.25, 0.25, 0.25, -0.25)
    assert apply_x(q).x == q


def test_apply_x_agrees_with_apply_general(x_states):
    for s in x_states:
        a = apply_x(s)
        b = apply_general(s.to_matrix())
        assert np.abs(a.state - b.state).max() <= 1e-14
        assert abs(a.success_probability - b.success_probability) <= 1e-14


def test_outputs_are_valid_x_states(general_states):
    for rho in general_states:
        out = apply_general(rho)
        assert validate_density(out.state).ok
        assert np.all(out.state[~X_MASK] == 0)
        assert out.success_probability == out.normalization / 2


def test_degenerate_normalization():
    # N = (r1+r2)^2 + (r3+r4)^2 - (2 Re r12)^2 - (2 Re r34)^2 vanishes here
    rho = np.full((4, 4), 0.25, dtype=complex)
    with pytest.raises(DegenerateNormalization):
        apply_general(rho)


def test_iterate_fixed_point_is_constant():
    traj = iterate(XState(1, 0, 0, 0), 10)
    assert len(traj) == 10
    assert all(t.x == XState(1, 0, 0, 0) for t in traj)
    assert traj[-1].p_cumulative == pytest.approx(0.5 ** 10)


def test_iterate_werner_monotone():
    traj = iterate(werner(0.7), 20)
    r1 = [0.7] + [t.x.r1 for t in traj]
    assert all(b > a for a, b in zip(r1, r1[1:]) if a < 1 - 1e-15)
    assert r1[-1] > 1 - 1e-9


def test_iterate_stops_early():
    traj = iterate(werner(0.7), 100, stop_tolerance=1e-12)
    assert len(traj) < 100


@pytest.mark.parametrize("c", [0.05, 0.2, 0.5])
def test_example2_one_step(c):
    traj = iterate(example2(c), 3)
    assert traj[0].x.r1 == pytest.approx(1, abs=1e-12)
    assert traj[0].outcome.success_probability == pytest.approx(c * c / 2, abs=1e-14)


def test_iterate_reports_failing_step():
    with pytest.raises(DegenerateNormalization) as info:
        iterate(np.full((4, 4), 0.25, dtype=complex), 5)
    assert info.value.step == 1


@settings(max_examples=300, deadline=None)
@given(x_states())
def test_swap_equivariance(s):
    a = apply_x(s.swapped()).x.to_vector()
    b = apply_x(s).x.swapped().to_vector()
    assert np.abs(a - b).max() <= 1e-14


@settings(max_examples=300, deadline=None)
@given(x_states())
def test_diagonal_swap_leaves_coherences_alone(s):
    t = XState(s.r4, s.r3, s.r2, s.r1, s.r14, s.r23)
    a, b = apply_x(t).x, apply_x(s).x
    assert np.abs(a.diagonal - b.diagonal[::-1]).max() <= 1e-14
    assert abs(a.r14 - b.r14) <= 1e-14 and abs(a.r23 - b.r23) <= 1e-14


@settings(max_examples=300, deadline=None)
@given(x_states())
def test_x_map_inequalities(s):
    out = apply_x(s)
    x = out.x
    assert x.r1 >= x.r3 - 1e-15 and x.r4 >= x.r2 - 1e-15
    assert out.normalization >= 0.5 - 1e-15
    assert abs(x.r14) + abs(x.r23) <= abs(s.r14) + abs(s.r23) + 1e-14
    assert validate_density(out.state).ok


@settings(max_examples=300, deadline=None)
@given(general_states())
def test_general_map_orderings(rho):
    out = apply_general(rho)
    d = out.state.diagonal().real
    assert d[0] >= d[2] - 1e-14 and d[3] >= d[1] - 1e-14
    assert validate_density(out.state).ok


def test_normalization_minimum_on_half_plane():
    s = XState(0.3, 0.2, 0.1, 0.4, 0.2, 0.1)
    assert apply_x(s).normalization == pytest.approx(0.5, abs=1e-15)
