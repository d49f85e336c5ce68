import math
from fractions import Fraction

import pytest

from conftest import transcript_distribution
from phasekit.errors import ContractViolation, ResourceLimitError
from phasekit.phases import BinaryPhase
from phasekit.rng import Rng
from phasekit.shor import (
    CaseCostComparison,
    FactorInstance,
    case_ii_dimension,
    compare_case_costs,
    continued_fraction_recover,
    diophantine_recover,
    draw_base,
    factor_from_order,
    modulus_register_bits,
    multiplicative_order,
    multiplier_powers,
    reduce_to_order,
    run_order_finding,
    shor_attempt,
    validate_modulus,
)
from phasekit.staged import staged_cost


# -- modular arithmetic ---------------------------------------------------------


@pytest.mark.parametrize("n,bits", [(2, 1), (3, 2), (15, 4), (16, 4), (17, 5), (21, 5)])
def test_register_width(n, bits):
    assert modulus_register_bits(n) == bits


def test_instance_validation():
    FactorInstance(15, 7)
    FactorInstance(15, 1)  # x = 1 is a legal (degenerate) oracle
    with pytest.raises(ValueError):
        FactorInstance(15, 5)  # shares a factor
    with pytest.raises(ValueError):
        FactorInstance(15, 0)
    with pytest.raises(ValueError):
        FactorInstance(2, 1)


def test_multiplier_powers_by_repeated_squaring():
    assert multiplier_powers(7, 15, [0, 1, 2, 3]) == [7, 4, 1, 1]
    assert multiplier_powers(2, 15, [0, 1, 2]) == [2, 4, 1]
    with pytest.raises(ValueError):
        multiplier_powers(6, 15, [0])


@pytest.mark.parametrize(
    "x,n,r", [(7, 15, 4), (2, 15, 4), (4, 15, 2), (14, 15, 2), (2, 7, 3), (1, 15, 1)]
)
def test_multiplicative_order(x, n, r):
    assert multiplicative_order(x, n) == r
    assert pow(x, r, n) == 1


# -- order finding ------------------------------------------------------------------


def test_trivial_base_yields_zero_phase():
    report = run_order_finding(FactorInstance(15, 1), 2, 5, Rng(0))
    assert report.phase.is_zero()
    assert report.deterministic


def test_eigenphase_distribution_is_exactly_uniform():
    # r = 2 for x = 4: phases 0 and 1/2 each with probability exactly 1/2
    inst = FactorInstance(15, 4)
    dist = transcript_distribution(
        lambda src: run_order_finding(inst, 1, 3, src).phase, 3
    )
    assert set(dist) == {BinaryPhase.zero(), BinaryPhase(1, 1)}
    for p in dist.values():
        assert p == pytest.approx(0.5, abs=1e-12)

    # r = 4 for x = 7: four peaks, probability exactly 1/4 each
    inst = FactorInstance(15, 7)
    dist = transcript_distribution(
        lambda src: run_order_finding(inst, 3, 9, src).phase, 9
    )
    assert set(dist) == {BinaryPhase(s, 2) if s else BinaryPhase.zero() for s in range(4)}
    for p in dist.values():
        assert p == pytest.approx(0.25, abs=1e-12)


def test_order_finding_cost_matches_staged_formula():
    report = run_order_finding(FactorInstance(15, 7), 3, 9, Rng(5))
    assert report.tally.rotation_count() == staged_cost(9, 3).total
    assert report.tally.u_applications == (1 << 9) - 1
    assert report.tally.controlled_u == 9


def test_order_finding_budget():
    # 12-bit modulus register plus 12 workspace qubits exceeds the dense cap
    inst = FactorInstance(2047, 2)
    with pytest.raises(ResourceLimitError):
        run_order_finding(inst, 12, 23, Rng(0))


# -- continued fractions ---------------------------------------------------------------


def test_cf_recovery_examples():
    assert continued_fraction_recover(BinaryPhase(3, 2), 15) == (3, 4)
    assert continued_fraction_recover(BinaryPhase(1, 1), 15) == (1, 2)
    assert continued_fraction_recover(BinaryPhase(433, 9), 15) == (11, 13)
    assert continued_fraction_recover(BinaryPhase.zero(), 15) is None
    assert continued_fraction_recover(BinaryPhase(1, 4), 3) is None


def test_cf_exhaustive_small_orders():
    # every coprime s/r below the bound round-trips through its dyadic neighbor
    for r in range(2, 17):
        n = 2 * math.ceil(math.log2(r * r)) + 1
        for s in range(1, r):
            if math.gcd(s, r) != 1:
                continue
            v = round(s / r * (1 << n))
            assert continued_fraction_recover(BinaryPhase(v, n), 16) == (s, r)


def test_cf_convergent_condition_is_enforced():
    # |5/16 - 1/3| = 1/48 <= 1/(2*3^2), so (1, 3) qualifies
    phi = BinaryPhase(5, 4)
    rec = continued_fraction_recover(phi, 15)
    assert rec is not None
    s, r = rec
    assert abs(Fraction(s, r) - phi.as_fraction()) <= Fraction(1, 2 * r * r)


# -- simultaneous denominator search ------------------------------------------------------


def test_sda_prefers_joint_consistency():
    quarter = BinaryPhase(8, 5)  # 1/4 measured to 5 bits
    three_quarters = BinaryPhase(24, 5)
    assert diophantine_recover([quarter, three_quarters], 15) == 4
    # a pool that never leaves {0, 1/2} cannot see the even harmonics
    half = BinaryPhase(16, 5)
    zero = BinaryPhase(0, 5)
    assert diophantine_recover([half, zero], 15) == 2
    assert diophantine_recover([zero, zero], 15) is None
    with pytest.raises(ValueError):
        diophantine_recover([quarter], 15)


def test_sda_agrees_with_direct_check():
    def consistent(phi, r):
        # |phi - m/r| < 2^-p for the nearest multiple m of 1/r
        target = phi.as_fraction()
        m = round(target * r)
        return abs(target - Fraction(m, r)) < Fraction(1, 1 << phi.precision_bits)

    pools = [
        [BinaryPhase(8, 5), BinaryPhase(16, 5)],
        [BinaryPhase(3, 5), BinaryPhase(21, 5)],
        [BinaryPhase(5, 4), BinaryPhase(11, 4)],
        [BinaryPhase(1, 6), BinaryPhase(63, 6), BinaryPhase(32, 6)],
    ]
    for pool in pools:
        expect = next(
            (r for r in range(1, 16) if all(consistent(p, r) for p in pool)), None
        )
        assert diophantine_recover(pool, 15) == expect


def test_reduce_to_order():
    assert reduce_to_order(2, 8, 15) == 4
    assert reduce_to_order(7, 4, 15) == 4
    assert reduce_to_order(7, 8, 15) == 4
    assert reduce_to_order(4, 2, 15) == 2
    assert reduce_to_order(7, 3, 15) is None
    assert reduce_to_order(7, 0, 15) is None


# -- factor extraction ----------------------------------------------------------------


def test_factor_from_order_success():
    out = factor_from_order(7, 4, 15)
    assert out.factors == (3, 5)
    assert out.failure is None
    assert factor_from_order(2, 4, 15).factors == (3, 5)
    assert factor_from_order(11, 2, 15).factors == (3, 5)


def test_factor_from_order_failures():
    assert factor_from_order(14, 2, 15).failure == "trivial_root"
    assert factor_from_order(4, 3, 21).failure == "odd_order"


def test_factor_from_order_contract():
    with pytest.raises(ContractViolation):
        factor_from_order(7, 3, 15)  # not a period
    with pytest.raises(ContractViolation):
        factor_from_order(7, 8, 15)  # a period but not minimal


def test_validate_modulus():
    validate_modulus(15)
    validate_modulus(9)
    with pytest.raises(ValueError):
        validate_modulus(14)
    with pytest.raises(ValueError):
        validate_modulus(13)
    with pytest.raises(ValueError):
        validate_modulus(2)


def test_draw_base_is_a_unit():
    for seed in range(20):
        x = draw_base(15, Rng(seed))
        assert 2 <= x < 15
        assert math.gcd(x, 15) == 1


@pytest.mark.parametrize("eps,d", [(0.2, 6), (0.5, 3), (1.0, 2), (0.01, 101)])
def test_case_ii_dimension(eps, d):
    assert case_ii_dimension(eps) == d


# -- case cost comparison ---------------------------------------------------------------


def test_compare_case_costs_pinned_values():
    cmp = compare_case_costs(384, 8, 0.01)
    assert isinstance(cmp, CaseCostComparison)
    assert cmp.n_case_i == 769
    assert cmp.n_case_ii == 388
    assert cmp.paper_case_i == 3068.0
    assert cmp.paper_case_ii == pytest.approx(1543.36)
    assert cmp.exact_case_i == 2682
    assert cmp.exact_case_ii == 1348
    assert cmp.ratio_paper == pytest.approx(1.98787, abs=1e-4)
    assert cmp.exact_case_i == staged_cost(769, 8).total


def test_compare_case_costs_validation():
    with pytest.raises(ValueError):
        compare_case_costs(0, 8, 0.01)
    with pytest.raises(ValueError):
        compare_case_costs(64, 8, 0.0)


# -- end-to-end attempts -------------------------------------------------------------------


def test_attempt_factors_fifteen():
    att = shor_attempt(15, 3, recovery="cf", x=7, seed=5)
    assert att.factors == (3, 5)
    assert att.r == 4
    assert att.r_candidate == 4
    assert att.failure is None
    assert att.n == 9
    assert att.phases[0] == BinaryPhase(1, 2)
    assert att.phases[0].precision_bits == 9


def test_attempt_reports_wrong_order():
    att = shor_attempt(15, 3, recovery="cf", x=7, seed=0)
    assert att.failure == "wrong_order"
    assert att.factors is None
    assert att.r_candidate == 2


def test_attempt_zero_phase():
    att = shor_attempt(15, 3, recovery="cf", x=7, seed=11)
    assert att.failure == "zero_phase"
    assert att.factors is None


def test_attempt_classical_shortcut():
    att = shor_attempt(15, 3, x=5, seed=0)
    assert att.classical_shortcut
    assert att.factors == (3, 5)
    assert att.tally.measurements == 0
    assert att.runs == []


def test_attempt_sda_pools_runs():
    att = shor_attempt(15, 3, recovery="sda", x=7, pooled_runs=3, seed=500)
    assert att.n == 5
    assert att.pooled_runs == 3
    assert len(att.runs) == 3
    assert att.tally.measurements == 3 * 5
    if att.r is not None:
        assert att.r == 4
        assert att.factors == (3, 5)


def test_attempt_tally_sums_runs():
    att = shor_attempt(15, 2, recovery="sda", x=7, pooled_runs=4, seed=1)
    assert att.tally.measurements == sum(r.tally.measurements for r in att.runs)
    assert att.tally.rotation_count() == sum(
        r.tally.rotation_count() for r in att.runs
    )


def test_attempt_validation():
    with pytest.raises(ValueError):
        shor_attempt(16, 3)  # even
    with pytest.raises(ValueError):
        shor_attempt(13, 3)  # prime
    with pytest.raises(ValueError):
        shor_attempt(15, 3, recovery="lattice")
    with pytest.raises(ValueError):
        shor_attempt(15, 3, recovery="sda", pooled_runs=1)
    with pytest.raises(ValueError):
        shor_attempt(15, 3, x=1)
    with pytest.raises(ResourceLimitError):
        shor_attempt(2047, 12)


def test_attempt_seed_scan_hits_every_failure_mode():
    seen = set()
    for seed in range(24):
        att = shor_attempt(15, 3, recovery="cf", seed=seed)
        seen.add(att.failure if att.failure else "factored")
    assert "factored" in seen
    assert "wrong_order" in seen or "zero_phase" in seen


def test_measured_peaks_are_balanced():
    trials = 2000
    counts = {}
    for seed in range(trials):
        rep = run_order_finding(FactorInstance(15, 7), 3, 9, Rng(seed))
        counts[rep.phase] = counts.get(rep.phase, 0) + 1
    assert set(counts) == {
        BinaryPhase.zero(),
        BinaryPhase(1, 2),
        BinaryPhase(1, 1),
        BinaryPhase(3, 2),
    }
    sigma = math.sqrt(trials * 0.25 * 0.75)
    for c in counts.values():
        assert abs(c - trials / 4) <= 3 * sigma
