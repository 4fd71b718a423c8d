"""
Spin configurations, basis orderings and state vectors
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lib.statespace import (
    SpinConfig,
    StateVector,
    basis_state,
    inner_product,
    make_basis,
    superposition,
)
from lib.validators import DimensionError, ShapeError, ValidationError

spin_strings = st.text(alphabet='ud', min_size=1, max_size=8)


def test_three_spin_ordering_matches_labelled_basis():
    """|1>..|8> = uuu, uud, udu, duu, ddu, dud, udd, ddd"""
    labels = [c.to_string() for c in make_basis(3)]
    assert labels == ['uuu', 'uud', 'udu', 'duu', 'ddu', 'dud', 'udd', 'ddd']
    assert [c.to_string() for c in make_basis(2)] == ['uu', 'ud', 'du', 'dd']


def test_fallback_ordering_groups_by_down_count():
    labels = [c.to_string() for c in make_basis(4)]
    assert labels[:5] == ['uuuu', 'uuud', 'uudu', 'uduu', 'duuu']
    assert labels[-1] == 'dddd'
    assert len(labels) == 16


def test_indices_are_one_based(basis3):
    assert basis3.index_of(SpinConfig.from_string('uuu')) == 1
    assert basis3.index_of(SpinConfig.from_string('uud')) == 2
    assert basis3.config_of(8).to_string() == 'ddd'
    with pytest.raises(DimensionError):
        basis3.config_of(9)
    with pytest.raises(DimensionError):
        basis3.config_of(0)


def test_spin_count_bounds():
    with pytest.raises(DimensionError):
        make_basis(0)
    with pytest.raises(DimensionError):
        make_basis(21)


def test_config_parsing_and_flip():
    config = SpinConfig.from_string('↑↑↓')
    assert config.to_string() == 'uud'
    assert config.arrows() == '↑↑↓'
    assert config.up_count == 2
    assert config.flipped().to_string() == 'ddu'
    with pytest.raises(ValidationError):
        SpinConfig.from_string('uxd')


def test_binary_index_puts_spin_one_first():
    assert SpinConfig.from_string('uuu').binary_index() == 0
    assert SpinConfig.from_string('uud').binary_index() == 1
    assert SpinConfig.from_string('duu').binary_index() == 4


def test_sectors_follow_basis_order(basis3):
    assert basis3.sectors() == {3: [0], 2: [1, 2, 3], 1: [4, 5, 6], 0: [7]}


def test_position_rejects_wrong_spin_count(basis3):
    with pytest.raises(ShapeError):
        basis3.position(SpinConfig.from_string('ud'))


@given(spin_strings)
def test_index_round_trip(text):
    config = SpinConfig.from_string(text)
    ordering = make_basis(config.n)
    assert ordering.config_of(ordering.index_of(config)) == config


def test_basis_states_are_orthonormal(basis3):
    states = [basis_state(c, basis3) for c in basis3]
    gram = np.array([[inner_product(a, b) for b in states] for a in states])
    assert np.array_equal(gram, np.eye(8))
    assert all(s.is_normalized() for s in states)


def test_superposition_and_amplitudes(basis3):
    uud, duu = SpinConfig.from_string('uud'), SpinConfig.from_string('duu')
    state = superposition([(uud, 0.6), (duu, 0.8j)], basis3)
    assert state.amplitude(uud, basis3) == 0.6
    assert state.amplitude(duu, basis3) == 0.8j
    assert abs(state.norm - 1.0) < 1e-15
    assert state.probabilities().tolist() == pytest.approx([0, 0.36, 0, 0.64, 0, 0, 0, 0])


def test_state_vector_is_read_only_and_sized():
    state = StateVector(np.zeros(8), 3)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 1
    with pytest.raises(ShapeError):
        StateVector(np.zeros(5), 3)
