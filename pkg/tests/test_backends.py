import math

import numpy as np
import pytest

from phasekit.backends import ProductPhaseState, StateVectorState, make_state
from phasekit.backends.product import QubitStatus
from phasekit.backends.statevector import MAX_DENSE_QUBITS
from phasekit.errors import (
    ConfigurationError,
    ContractViolation,
    ResourceLimitError,
)
from phasekit.phases import BinaryPhase, fraction_from_bits
from phasekit.rng import DeadBranch, ForcedOutcomes, Rng
from phasekit.tally import GateTally

BACKENDS = [
    lambda n: ProductPhaseState(n),
    lambda n: StateVectorState(n),
]


# -- randomness sources ---------------------------------------------------------


def test_rng_is_reproducible():
    a = Rng(42)
    b = Rng(42)
    assert [a.draw(0.5) for _ in range(32)] == [b.draw(0.5) for _ in range(32)]
    assert np.array_equal(Rng(7).random(16), Rng(7).random(16))


def test_rng_exact_at_poles():
    rng = Rng(0)
    assert all(rng.draw(0.0) == 0 for _ in range(8))
    assert all(rng.draw(1.0) == 1 for _ in range(8))
    # pole draws consume no entropy
    assert Rng(3).draw(0.0) == 0
    r1, r2 = Rng(3), Rng(3)
    r1.draw(0.0)
    r1.draw(1.0)
    assert r1.draw(0.5) == r2.draw(0.5)


def test_rng_child_streams_are_distinct():
    parent = Rng(11).random(8)
    c0 = Rng.child(11, 0).random(8)
    c1 = Rng.child(11, 1).random(8)
    assert not np.array_equal(c0, c1)
    assert not np.array_equal(parent, c0)
    assert np.array_equal(Rng.child(11, 1).random(8), c1)


def test_rng_integers_and_choice():
    rng = Rng(5)
    draws = {rng.integers(2, 5) for _ in range(64)}
    assert draws <= {2, 3, 4}
    assert rng.choice("abc") in "abc"


def test_forced_outcomes_tracks_likelihood():
    src = ForcedOutcomes([1, 0])
    assert src.draw(0.5) == 1
    assert src.likelihood == 0.5
    assert src.draw(0.25) == 0
    assert src.likelihood == 0.375
    assert src.exhausted
    with pytest.raises(IndexError):
        src.draw(0.5)


def test_forced_outcomes_dead_branch():
    with pytest.raises(DeadBranch):
        ForcedOutcomes([1]).draw(0.0)
    with pytest.raises(DeadBranch):
        ForcedOutcomes([0]).draw(1.0)


# -- lifecycle contracts ----------------------------------------------------------


@pytest.mark.parametrize("make", BACKENDS)
def test_lifecycle_enforced(make):
    state = make(2)
    with pytest.raises(ContractViolation):
        state.kickback(0, BinaryPhase(1, 2), 0)
    state.prepare_plus(0)
    with pytest.raises(ContractViolation):
        state.prepare_plus(0)
    with pytest.raises(ContractViolation):
        state.reset(0)
    state.hadamard_measure(0, Rng(0))
    with pytest.raises(ContractViolation):
        state.hadamard_measure(0, Rng(0))
    state.reset(0)
    assert state.status(0) is QubitStatus.FRESH
    with pytest.raises(IndexError):
        state.prepare_plus(2)


@pytest.mark.parametrize("make", BACKENDS)
def test_outcome_readable_only_after_measurement(make):
    state = make(1)
    state.prepare_plus(0)
    with pytest.raises(ContractViolation):
        state.outcome(0)
    bit = state.hadamard_measure(0, Rng(1))
    assert state.outcome(0) == bit


# -- exact phase evolution ---------------------------------------------------------


def test_product_tracks_exact_phase():
    state = ProductPhaseState(1)
    state.prepare_plus(0)
    assert state.theta(0).is_zero()
    state.kickback(0, BinaryPhase(5, 3), 1)  # 2 * 5/8 mod 1 = 1/4
    assert state.theta(0) == BinaryPhase(1, 2)
    state.kickback(0, BinaryPhase(5, 3), 0)
    assert state.theta(0) == BinaryPhase(7, 3)
    state.inverse_rotation(0, BinaryPhase(3, 3), kind="qft")
    assert state.theta(0) == BinaryPhase(1, 1)  # 7/8 - 3/8, at the pole
    assert state.prob_one(0) == 1.0


@pytest.mark.parametrize("make", BACKENDS)
def test_deterministic_measurements_at_poles(make):
    state = make(1)
    state.prepare_plus(0)
    assert state.hadamard_measure(0, Rng(0)) == 0
    state.reset(0)
    state.prepare_plus(0)
    state.kickback(0, BinaryPhase(1, 1), 0)
    assert state.hadamard_measure(0, Rng(0)) == 1
    assert state.nondeterministic_measurements == 0


def test_product_measurement_frequency():
    # >= 1e5 samples against Pr(1) = sin^2(pi/8) within 3 standard errors
    p = math.sin(math.pi / 8) ** 2
    rng = Rng(123)
    state = ProductPhaseState(1)
    hits = 0
    trials = 100_000
    for _ in range(trials):
        state.prepare_plus(0)
        state.kickback(0, BinaryPhase(1, 3), 0)
        hits += state.hadamard_measure(0, rng)
        state.reset(0)
    se = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) <= 3 * se
    assert state.nondeterministic_measurements == trials


def test_backends_agree_on_probabilities():
    phi = BinaryPhase(11, 5)
    for l in range(5):
        prod = ProductPhaseState(1)
        sv = StateVectorState(1)
        for state in (prod, sv):
            state.prepare_plus(0)
            state.kickback(0, phi, l)
            state.inverse_rotation(0, BinaryPhase(1, 3))
        assert prod.prob_one(0) == pytest.approx(sv.prob_one(0), abs=1e-12)


# -- statevector specifics ----------------------------------------------------------


def test_statevector_qubit_zero_is_most_significant():
    state = StateVectorState(2)
    state.prepare_plus(0)
    state.kickback(0, BinaryPhase(1, 1), 0)
    amps = state.amplitudes()
    root_half = 1 / math.sqrt(2)
    assert amps[0b00] == pytest.approx(root_half)
    assert amps[0b10] == pytest.approx(-root_half)
    assert amps[0b01] == amps[0b11] == 0.0


def test_statevector_norm_preserved_over_many_gates():
    gen = np.random.default_rng(99)
    state = StateVectorState(2)
    rng = Rng(1)
    for _ in range(2500):
        for q in (0, 1):
            state.prepare_plus(q)
            state.kickback(q, float(gen.random()), int(gen.integers(0, 4)))
            state.inverse_rotation(q, float(gen.random()))
        for q in (0, 1):
            state.hadamard_measure(q, rng)
            state.reset(q)
        assert abs(state.norm() - 1.0) <= 1e-12


def test_statevector_untouched_qubit_stays_zero():
    state = StateVectorState(2)
    state.prepare_plus(0)
    state.kickback(0, 0.3, 2)
    state.prepare_plus(1)  # prepared but never kicked: |+>
    rho0 = state.reduced_density_matrix([1])
    assert rho0[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert rho0[0, 1] == pytest.approx(0.5, abs=1e-12)
    state.hadamard_measure(1, Rng(0))
    assert state.outcome(1) == 0  # |+> measures 0 deterministically after H


def test_statevector_measurement_collapses_and_renormalizes():
    state = StateVectorState(1, modular_bits=4, modular_init=1)
    state.prepare_plus(0)
    state.controlled_modular_multiply(0, 7, 15)
    # (|0>|1> + |1>|7>)/sqrt(2); workspace bit is index bit 4
    amps = state.amplitudes()
    assert amps[1] == pytest.approx(1 / math.sqrt(2))
    assert amps[16 + 7] == pytest.approx(1 / math.sqrt(2))
    bit = state.hadamard_measure(0, Rng(0))
    assert bit in (0, 1)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)
    assert state.nondeterministic_measurements == 1


def test_modular_multiply_is_identity_above_modulus():
    state = StateVectorState(1, modular_bits=4, modular_init=15)
    state.prepare_plus(0)
    state.controlled_modular_multiply(0, 7, 15)
    amps = state.amplitudes()
    assert amps[15] == pytest.approx(1 / math.sqrt(2))
    assert amps[16 + 15] == pytest.approx(1 / math.sqrt(2))


def test_modular_multiply_validations():
    state = StateVectorState(1, modular_bits=4, modular_init=1)
    state.prepare_plus(0)
    with pytest.raises(ValueError):
        state.controlled_modular_multiply(0, 5, 15)  # gcd(5, 15) > 1
    with pytest.raises(ValueError):
        state.controlled_modular_multiply(0, 3, 17)  # modulus needs 5 bits
    plain = StateVectorState(1)
    plain.prepare_plus(0)
    with pytest.raises(ConfigurationError):
        plain.controlled_modular_multiply(0, 7, 15)


def test_statevector_reset_restores_fresh_qubit():
    state = StateVectorState(1)
    state.prepare_plus(0)
    state.kickback(0, BinaryPhase(1, 1), 0)  # forces outcome 1
    assert state.hadamard_measure(0, Rng(0)) == 1
    state.reset(0)
    state.prepare_plus(0)
    assert state.hadamard_measure(0, Rng(0)) == 0  # back to |0> beforehand


def test_qubit_budget_enforced():
    with pytest.raises(ResourceLimitError):
        StateVectorState(MAX_DENSE_QUBITS + 1)
    with pytest.raises(ResourceLimitError):
        StateVectorState(MAX_DENSE_QUBITS - 3, modular_bits=4)
    StateVectorState(MAX_DENSE_QUBITS - 4, modular_bits=4)


def test_statevector_entangled_workspace_is_random():
    # after entangling with the register, the workspace bit is a fair coin
    dist = {}
    for seed in range(40):
        state = StateVectorState(1, modular_bits=4, modular_init=1)
        state.prepare_plus(0)
        state.controlled_modular_multiply(0, 7, 15)
        bit = state.hadamard_measure(0, Rng(seed))
        dist[bit] = dist.get(bit, 0) + 1
    assert set(dist) == {0, 1}


# -- construction helpers -------------------------------------------------------------


def test_make_state_dispatch():
    tally = GateTally()
    assert isinstance(make_state("product", 2, tally), ProductPhaseState)
    assert isinstance(make_state("statevector", 2, tally), StateVectorState)
    with pytest.raises(ConfigurationError):
        make_state("densitymatrix", 2, tally)


@pytest.mark.parametrize("make", BACKENDS)
def test_tally_counts_each_primitive(make):
    state = make(1)
    state.prepare_plus(0)
    state.kickback(0, BinaryPhase(1, 2), 3)
    state.inverse_rotation(0, BinaryPhase(1, 2), kind="qft")
    state.inverse_rotation(0, BinaryPhase(1, 2), kind="reset")
    state.hadamard_measure(0, Rng(0))
    t = state.tally
    assert t.hadamards == 2
    assert t.controlled_u == 1
    assert t.u_applications == 8
    assert t.qft_rotations == 1
    assert t.reset_rotations == 1
    assert t.measurements == 1


def test_tally_dict_and_copy():
    t = GateTally(qft_hadamards=2, qft_rotations=3, reset_rotations=4)
    assert t.qft_count() == 5
    assert t.rotation_count() == 9
    d = t.as_dict()
    assert d["qft_count"] == 5 and d["rotation_count"] == 9
    c = t.copy()
    c.qft_rotations += 1
    assert t.qft_rotations == 3


def test_rotation_kind_validated():
    state = ProductPhaseState(1)
    state.prepare_plus(0)
    with pytest.raises(ValueError):
        state.inverse_rotation(0, BinaryPhase(1, 2), kind="fancy")
