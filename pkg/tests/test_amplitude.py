import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermisim.amplitude import transition_amplitude, transition_probability
from fermisim.fock import FockState
from fermisim.gates import (NumberConservingGateSpec, PauliGateSpec, compile_general,
                            compile_number_conserving, inverse_circuit)
from fermisim.oracle import oracle_run
from fermisim.random_circuits import random_general_circuit, random_nc_circuit

from conftest import random_state

seeds = st.integers(0, 2 ** 32 - 1)
S = FockState.from_string


def test_identity_circuit():
    c = compile_number_conserving([], 4)
    assert transition_amplitude(c, S("1010"), S("1010")) == 1
    assert transition_amplitude(c, S("1010"), S("0110")) == 0


def test_weight_mismatch_is_zero():
    c = compile_number_conserving([NumberConservingGateSpec.hopping(0, 1, 0.3)], 2)
    assert transition_amplitude(c, S("10"), S("11")) == 0


@pytest.mark.parametrize("theta", [0.2, np.pi / 4, np.pi / 2])
def test_single_hop(theta):
    c = compile_number_conserving([NumberConservingGateSpec.hopping(0, 1, theta)], 2)
    assert transition_amplitude(c, S("10"), S("10")) == pytest.approx(np.cos(theta))
    assert transition_amplitude(c, S("10"), S("01")) == pytest.approx(1j * np.sin(theta))
    assert transition_probability(c, S("10"), S("01")) == pytest.approx(np.sin(theta) ** 2)


def test_full_hop_moves_the_particle():
    c = compile_number_conserving([NumberConservingGateSpec.hopping(0, 1, np.pi / 2)], 2)
    assert transition_probability(c, S("10"), S("01")) == pytest.approx(1.0)


def test_pauli_hop_phase():
    g = PauliGateSpec((0, 1), alpha2=np.pi / 4, beta2=np.pi / 4)
    c = compile_number_conserving([g], 2)
    assert transition_amplitude(c, S("01"), S("10")) == pytest.approx(1j)


def test_row_column_orientation():
    # an asymmetric three-mode circuit separates x->y from y->x
    gates = [NumberConservingGateSpec((0, 1), [[0.3, 0.5 + 0.2j], [0.5 - 0.2j, -0.1]]),
             NumberConservingGateSpec((1, 2), [[0.0, 0.7j], [-0.7j, 0.4]])]
    c = compile_number_conserving(gates, 3)
    x, y = S("100"), S("001")
    psi = oracle_run(gates, x)
    assert abs(transition_amplitude(c, x, y) - psi.amplitude(y)) <= 1e-12
    assert abs(transition_amplitude(c, y, x) - oracle_run(gates, y).amplitude(x)) <= 1e-12
    assert abs(transition_amplitude(c, x, y) - transition_amplitude(c, y, x)) > 1e-3


@given(st.integers(2, 7), seeds)
def test_matches_oracle_with_phase(n, seed):
    rng = np.random.default_rng(seed)
    gates = random_nc_circuit(rng, n, int(rng.integers(1, 31)))
    c = compile_number_conserving(gates, n)
    x = random_state(rng, n)
    psi = oracle_run(gates, x)
    for idx in range(2 ** n):
        y = FockState.from_index(idx, n)
        assert abs(transition_amplitude(c, x, y) - psi.amplitudes[idx]) <= 1e-9


@given(st.integers(2, 6), seeds)
def test_normalised_and_reversible(n, seed):
    rng = np.random.default_rng(seed)
    gates = random_nc_circuit(rng, n, 10)
    c = compile_number_conserving(gates, n)
    back = compile_number_conserving(inverse_circuit(gates), n)
    x = random_state(rng, n)
    ys = [FockState.from_index(i, n) for i in range(2 ** n)]
    assert sum(transition_probability(c, x, y) for y in ys) == pytest.approx(1.0, abs=1e-10)
    y = ys[int(rng.integers(0, 2 ** n))]
    # <y|U^dag|x> = conj(<x|U|y>)
    assert transition_amplitude(back, x, y) == pytest.approx(
        np.conj(transition_amplitude(c, y, x)), abs=1e-10)


def test_rejects_general_circuit(rng):
    from fermisim.errors import ValidationError
    c = compile_general(random_general_circuit(rng, 3, 4), 3)
    with pytest.raises(ValidationError):
        transition_amplitude(c, S("100"), S("100"))
