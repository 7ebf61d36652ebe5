import math

import pytest

import mechlab as mech


def test_single_item_metrics():
    inst = mech.single_item_instance(10.0, 7.0)
    rec = mech.midr_metrics(inst, 0.5)
    assert rec.precision == pytest.approx(0.25, abs=1e-12)
    assert rec.welfare_ratio == pytest.approx(0.925, abs=1e-12)
    assert rec.coeff_variance == pytest.approx(1.0, abs=1e-12)
    assert rec.max_abs_coeff == pytest.approx(1.0, abs=1e-12)
    assert 0.25 - 1e-12 <= rec.revenue_ratio <= 1.0 + 1e-12


def test_run_optmidr_deterministic_single_call():
    inst = mech.random_midr_instance(3, 4, 5, seed=11)
    a = mech.run_optmidr(inst, 0.3, seed=42)
    b = mech.run_optmidr(inst, 0.3, seed=42)
    assert a.oracle_calls == 1
    assert a.kept == b.kept
    assert a.outcome_index == b.outcome_index
    assert a.payments == b.payments
    c = mech.run_optmidr(inst, 0.3, seed=43)
    assert (a.kept, a.payments) != (c.kept, c.payments) or a.seed != c.seed


def test_exact_truthfulness_and_ir():
    inst = mech.random_midr_instance(3, 4, 5, seed=5)
    assert mech.midr_truthfulness_max_residual(inst, 0.4) <= 1e-9
    rep = mech.ir_npt_expectation(inst, 0.4)
    assert rep.ir_ok
    assert rep.npt_ok
    assert rep.min_expected_utility >= -1e-12


def test_risk_stats_closed_forms():
    stats = mech.risk_stats(mech.ProductGammaDistribution(0.2, 2))
    assert stats.max_variance == pytest.approx(4.0, abs=1e-12)
    assert stats.max_abs_coeff == pytest.approx(4.0, abs=1e-12)
    assert stats.mean_abs_deviation <= 1e-12
    assert mech.precision(mech.ProductGammaDistribution(0.2, 2)) == pytest.approx(
        0.64, abs=1e-12
    )


def test_witnesses_are_tight():
    assert mech.welfare_ratio(
        mech.welfare_tight_witness(3), mech.ProductGammaDistribution(0.35, 3)
    ) == pytest.approx(0.65, abs=1e-9)
    assert mech.revenue_ratio(
        mech.revenue_tight_witness(3), mech.ProductGammaDistribution(0.2, 3)
    ) == pytest.approx(0.512, abs=1e-9)


def test_archer_tardos_posted_threshold():
    rule = mech.PostedThreshold([0.5])
    assert mech.archer_tardos_payment(rule, [0.8], 0) == pytest.approx(0.5, abs=1e-12)
    assert mech.archer_tardos_payment(rule, [0.3], 0) == pytest.approx(0.0, abs=1e-12)


def test_run_bks_deterministic_and_ir():
    rule = mech.random_grid_step(3, 4, seed=21)
    bids = mech.random_bids(3, 2.0, seed=22)
    a = mech.run_bks(rule, bids, 0.5, seed=7)
    b = mech.run_bks(rule, bids, 0.5, seed=7)
    assert a.oracle_calls == 1
    assert a.resampled == b.resampled
    assert a.payments == b.payments
    runs = [mech.run_bks(rule, bids, 0.5, seed=s) for s in range(200)]
    rep = mech.ir_expost(runs, bids)
    assert rep.ir_ok
    assert rep.min_realized_utility >= -1e-12


def test_bks_payment_identity():
    rule = mech.random_grid_step(2, 3, seed=31)
    bids = mech.random_bids(2, 2.0, seed=32)
    residuals = mech.bks_payment_identity_residuals(rule, bids, 0.5)
    assert max(abs(r) for r in residuals) <= 1e-6


def test_mc_bks_curve_truthful():
    rule = mech.TopKByScore(1, [1.0, 1.0])
    bids = [0.8, 0.5]
    reports = [0.1 * j for j in range(13)]
    curve = mech.mc_bks_curve(rule, bids, 0.4, reports, truth_index=8, samples=40000, seed=99)
    assert curve.truthful_within(4.0)
    assert len(curve.points) == len(reports)
    assert curve.points[8].mean_minus_truth == pytest.approx(0.0, abs=1e-12)


def test_mc_midr_scale_curve_truthful():
    inst = mech.random_midr_instance(2, 3, 4, seed=61)
    factors = [0.0, 0.5, 1.0, 1.5, 2.0]
    curve = mech.mc_midr_scale_curve(
        inst, 0.5, factors, truth_index=2, samples=40000, seed=62
    )
    assert curve.truthful_within(4.0)


def test_skewed_estimate_example():
    rep = mech.skewed_estimate_example(1.1)
    assert rep.u_truth == pytest.approx(0.09181818181818182, abs=1e-9)
    assert rep.u_lie == pytest.approx(0.099, abs=1e-12)
    assert rep.lying_profitable
    assert rep.welfare_order_holds


def test_ppc_single_call_repair_truthful():
    inst = mech.PpcSeparableInstance(
        [0.1, 0.09], [0.11, 0.09], [1.0, 1.0], [1.0, 1.0], [1.1, 1.0]
    )
    rule = mech.PpcSpAllocation(inst)
    bids = list(inst.values_per_click)
    reports = [1.1 * f for f in (0.0, 0.25, 0.5, 0.75, 1.0, 1.25)]
    curve = mech.mc_bks_curve(rule, bids, 0.5, reports, truth_index=4, samples=20000, seed=909)
    assert curve.truthful_within(4.0)


def test_optimality_sweep_flags():
    rep = mech.optimality_sweep(2, 0.5, 0.25, 1e-2)
    assert rep.candidates > 0
    assert rep.product_law_optimal_abs
    assert rep.product_law_optimal_variance
    assert rep.best_max_abs_coeff >= rep.pibar_max_abs_coeff - 1e-9
    assert rep.best_variance_given_abs >= rep.pibar_max_variance - 1e-9
    # variance alone can be bought with a worse worst case
    assert rep.best_max_variance < rep.pibar_max_variance


def test_subset_distribution_validation():
    with pytest.raises(mech.ConfigError):
        mech.SubsetDistribution(2, [0.1, 0.2, 0.3])
    with pytest.raises(mech.ConfigError):
        mech.SubsetDistribution(2, [0.5, 0.5, 0.0, 0.0])
    law = mech.SubsetDistribution(2, [0.25, 0.25, 0.25, 0.25])
    assert law.mass([0, 1]) == pytest.approx(0.25)
    assert math.isclose(sum(law.masses), 1.0)


def test_naive_vcg_breaks_and_table_roundtrip():
    inst = mech.PpcSeparableInstance(
        [0.1, 0.09], [0.11, 0.09], [1.0, 1.0], [1.0, 1.0], [1.1, 1.0]
    )
    truth = mech.naive_vcg_utility(inst, 0, inst.values_per_click[0])
    lie = mech.naive_vcg_utility(inst, 0, 0.9)
    assert lie > truth

    midr = mech.single_item_instance()
    table = mech.tabulate(midr)
    assert table.row(3) == [10.0, 0.0]
    run = mech.run_midr(table, mech.ProductGammaDistribution(0.5, 2), seed=4)
    assert run.oracle_calls == 1
