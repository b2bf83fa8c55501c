from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spin_rwa import InvalidSpin, NotNormalized, SpinQuantum, StateVector, enumerate_substates, spin_matrices
from spin_rwa.spin import commutator_residual, m_label


@pytest.mark.parametrize("twice_s, expected", [
    (1, [1, -1]),
    (2, [2, 0, -2]),
    (9, [9, 7, 5, 3, 1, -1, -3, -5, -7, -9]),
])
def test_enumerate_substates(twice_s, expected):
    assert enumerate_substates(SpinQuantum(twice_s)) == expected


@given(st.integers(min_value=0, max_value=80))
def test_substates_descend_in_steps_of_two(twice_s):
    subs = enumerate_substates(SpinQuantum(twice_s))
    assert len(subs) == twice_s + 1 == SpinQuantum(twice_s).dimension()
    assert subs[0] == twice_s and subs[-1] == -twice_s
    assert all(a - b == 2 for a, b in zip(subs, subs[1:]))
    assert [SpinQuantum(twice_s).index(m) for m in subs] == list(range(twice_s + 1))


@pytest.mark.parametrize("value, twice_s", [
    ("7/2", 7), ("3.5", 7), (4.5, 9), (Fraction(65, 2), 65), (2, 4), ("0", 0),
])
def test_from_value(value, twice_s):
    assert SpinQuantum.from_value(value).twice_s == twice_s


@pytest.mark.parametrize("value", ["1/3", 0.3, -1, "abc", float("nan")])
def test_from_value_rejects(value):
    with pytest.raises(InvalidSpin):
        SpinQuantum.from_value(value)


def test_rejects_non_integer_twice_s():
    with pytest.raises(InvalidSpin):
        SpinQuantum(1.5)


def test_spin_half_matrices():
    ops = spin_matrices(SpinQuantum(1))
    np.testing.assert_array_equal(ops.sx, [[0, 0.5], [0.5, 0]])
    np.testing.assert_array_equal(ops.sy, [[0, -0.5j], [0.5j, 0]])
    np.testing.assert_array_equal(ops.sz, [[0.5, 0], [0, -0.5]])


def test_spin_one_matrices():
    # ladder element sqrt(s(s+1) - m(m+1)) = sqrt(2) for both steps, halved in S_x
    ops = spin_matrices(SpinQuantum(2))
    np.testing.assert_array_equal(ops.sz, np.diag([1, 0, -1]))
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(ops.sx, [[0, r, 0], [r, 0, r], [0, r, 0]], atol=1e-16)


@pytest.mark.parametrize("twice_s", [1, 2, 3, 4, 7, 9, 20, 65])
def test_operator_invariants(twice_s):
    spin = SpinQuantum(twice_s)
    ops = spin_matrices(spin)
    assert np.all(ops.sz == np.diag(np.diag(ops.sz)))
    assert np.all(np.diag(ops.sz).real == np.arange(twice_s, -twice_s - 1, -2) / 2)
    for real_sym in (ops.sx, ops.sz):
        assert np.all(real_sym.imag == 0)
        np.testing.assert_array_equal(real_sym, real_sym.T)
    assert np.all(ops.sy.real == 0)
    np.testing.assert_array_equal(ops.sy, ops.sy.conj().T)
    assert commutator_residual(ops) < 1e-12
    casimir = ops.casimir() - spin.s * (spin.s + 1) * np.eye(spin.dimension())
    assert np.max(np.abs(casimir)) < 1e-11


def test_small_spin_commutators_tight():
    for twice_s in range(1, 10):
        assert commutator_residual(spin_matrices(SpinQuantum(twice_s))) < 1e-13


def test_operators_are_read_only():
    ops = spin_matrices(SpinQuantum(2))
    with pytest.raises(ValueError):
        ops.sx[0, 0] = 1.0


def test_state_vector_normalization():
    spin = SpinQuantum(2)
    state = StateVector(spin, [1, 1j, 1])
    assert not state.is_normalized()
    with pytest.raises(NotNormalized):
        state.require_normalized()
    norm = state.normalized()
    assert abs(norm.norm_squared() - 1) < 1e-12
    with pytest.raises(ValueError):
        StateVector(spin, [1, 0])


def test_from_probabilities_real_non_negative():
    state = StateVector.from_probabilities(SpinQuantum(1), [1 / 3, 2 / 3])
    assert np.all(state.amplitudes.imag == 0) and np.all(state.amplitudes.real >= 0)
    np.testing.assert_allclose(state.probabilities(), [1 / 3, 2 / 3], atol=1e-16)


def test_basis_and_amplitude_lookup():
    state = StateVector.basis(SpinQuantum(3), -1)
    assert state.amplitude(-1) == 1
    assert state.amplitude(3) == 0
    with pytest.raises(ValueError):
        state.amplitude(2)


@pytest.mark.parametrize("twice_m, label", [(3, "1.5"), (-1, "-0.5"), (2, "1"), (0, "0"), (-4, "-2")])
def test_m_label(twice_m, label):
    assert m_label(twice_m) == label
