import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermisim.adaptive import (AdaptiveProgram, AdaptiveSampler, Branch, MeasurementRecord,
                               Stage, _RatioStage, enumerate_record_probabilities,
                               exact_record_probability, history_key, run_adaptive,
                               sample_records, sample_subset_outcome)
from fermisim.errors import DegenerateDistributionError, ValidationError
from fermisim.fock import FockState, ModeSubset, OutcomeAssignment
from fermisim.gates import NumberConservingGateSpec, compile_general, t_matrix
from fermisim.oracle import oracle_adaptive_distribution
from fermisim.random_circuits import (random_general_circuit, random_general_gate,
                                      random_two_stage_program)

from conftest import random_state

seeds = st.integers(0, 2 ** 32 - 1)
S = FockState.from_string


def hop_program(theta=np.pi / 4):
    return AdaptiveProgram(2, (Stage.fixed([NumberConservingGateSpec.hopping(0, 1, theta)], [0]),))


def test_identity_program_returns_input():
    program = AdaptiveProgram(4, (Stage.fixed([], [0, 1, 2, 3]),))
    for seed in range(5):
        rec = run_adaptive(program, S("1010"), seed)
        assert rec.outcomes == ((1, 0, 1, 0),)
        assert rec.joint == 1.0
    assert exact_record_probability(program, S("1010"), [(1, 0, 1, 0)]) == pytest.approx(1.0)


def test_history_key():
    assert history_key([(1, 0), (1,)]) == "101"
    assert history_key([]) == ""


def test_decision_table_lookup():
    stage = Stage(table={"0": Branch((), (1,)), "*": Branch((), (2,))})
    assert stage.branch(((0,),)).measure == (1,)
    assert stage.branch(((1,),)).measure == (2,)
    with pytest.raises(ValidationError):
        Stage(table={"0": Branch((), (1,))}).branch(((1,),))


def test_rule_stage():
    stage = Stage(rule=lambda h: ([], [2] if h[0] == (1,) else [3]))
    program = AdaptiveProgram(4, (Stage.fixed([], [0]), stage))
    assert program.select(1, ((1,),))[1].modes == (2,)
    assert program.select(1, ((0,),))[1].modes == (3,)


def test_stage_needs_exactly_one_selector():
    with pytest.raises(ValidationError):
        Stage()


def test_gate_on_measured_mode_is_rejected():
    stage2 = Stage.fixed([NumberConservingGateSpec.hopping(0, 1, 0.2)], [1])
    program = AdaptiveProgram(3, (Stage.fixed([], [0]), stage2))
    with pytest.raises(ValidationError, match="stage 1 gate 0 acts on already measured mode 0"):
        run_adaptive(program, S("100"), 0)


def test_remeasuring_is_rejected():
    program = AdaptiveProgram(3, (Stage.fixed([], [0]), Stage.fixed([], [0, 1])))
    with pytest.raises(ValidationError, match="measured earlier"):
        run_adaptive(program, S("100"), 0)


def test_determinism(rng):
    program = random_two_stage_program(rng, 5)
    x = S("10110")
    a = [r.lines() for r in sample_records(program, x, 50, seed=99)]
    b = [r.lines() for r in sample_records(program, x, 50, seed=99)]
    assert a == b
    assert run_adaptive(program, x, 7) == run_adaptive(program, x, 7)


def test_record_lines():
    rec = run_adaptive(hop_program(), S("10"), 3)
    lines = rec.lines()
    assert lines[0].startswith("record seed=3 rng=numpy.random.PCG64")
    assert lines[1].startswith("stage index=0 modes=0 bits=")
    assert "conditional=0.5" in lines[1]


def test_hop_frequency():
    records = sample_records(hop_program(), S("10"), 20000, seed=1)
    freq = np.mean([r.outcomes[0][0] for r in records])
    assert abs(freq - 0.5) <= 0.015


@given(st.integers(3, 6), seeds)
def test_enumeration_matches_collapse_oracle(n, seed):
    rng = np.random.default_rng(seed)
    program = random_two_stage_program(rng, n)
    x = random_state(rng, n)
    exact = enumerate_record_probabilities(program, x)
    ref = oracle_adaptive_distribution(program, x)
    assert sum(exact.values()) == pytest.approx(1.0, abs=1e-9)
    for key in set(exact) | set(ref):
        assert abs(exact.get(key, 0.0) - ref.get(key, 0.0)) <= 1e-9


@given(st.integers(3, 6), seeds)
def test_record_probability_is_chain_of_conditionals(n, seed):
    rng = np.random.default_rng(seed)
    program = random_two_stage_program(rng, n)
    x = random_state(rng, n)
    rec = run_adaptive(program, x, seed)
    assert rec.joint == pytest.approx(exact_record_probability(program, x, rec), abs=1e-10)
    assert rec.joint == pytest.approx(np.prod([s.conditional for s in rec.stages]), rel=1e-12)


@given(st.integers(2, 7), seeds)
def test_schur_and_ratio_agree(n, seed):
    rng = np.random.default_rng(seed)
    gates = random_general_circuit(rng, n, 12)
    program = AdaptiveProgram(n, (Stage.fixed(gates, range(n)),))
    x = random_state(rng, n)
    a = run_adaptive(program, x, seed, method="schur")
    b = run_adaptive(program, x, seed, method="ratio")
    assert a.outcomes == b.outcomes
    assert a.joint == pytest.approx(b.joint, abs=1e-10)


def test_sample_subset_outcome_checks_inputs(rng):
    t = t_matrix(compile_general(random_general_circuit(rng, 3, 5), 3))
    prior = [OutcomeAssignment.of(3, {0: 1})]
    with pytest.raises(ValidationError):
        sample_subset_outcome([t], S("100"), prior, ModeSubset(3, (1,)), rng)
    with pytest.raises(ValidationError):
        sample_subset_outcome([t, t], S("100"), prior, ModeSubset(3, (0, 1)), rng)
    bits, p = sample_subset_outcome([t, t], S("100"), prior, ModeSubset(3, (1, 2)), rng)
    assert len(bits) == 2 and 0 <= p <= 1


def test_ratio_sampler_flags_degenerate_prefix():
    # prior outcome has probability zero, so every extension is zero too
    t = t_matrix(compile_general([], 2))
    stage = _RatioStage([t, t], S("10"), [OutcomeAssignment.of(2, {0: 0})], ModeSubset(2, (1,)))
    with pytest.raises(DegenerateDistributionError):
        stage.p1(())


def test_sampler_cache_does_not_change_results(rng):
    program = random_two_stage_program(rng, 5)
    x = S("01101")
    cached = AdaptiveSampler(program, x)
    for shot in range(20):
        seq = np.random.default_rng([4, shot])
        assert cached.sample(seq).outcomes == run_adaptive(program, x, [4, shot]).outcomes


def test_record_stage_mismatch(rng):
    program = AdaptiveProgram(3, (Stage.fixed([random_general_gate(rng, 3)], [0]),))
    rec = run_adaptive(program, S("100"), 0)
    other = AdaptiveProgram(3, (Stage.fixed([], [1]),))
    with pytest.raises(ValidationError):
        exact_record_probability(other, S("100"), rec)
    assert isinstance(rec, MeasurementRecord)
