"""Single-call truthful mechanisms.

Resample-once reductions over multi-outcome and single-parameter allocation
rules, exact and Monte Carlo truthfulness verifiers, expectation-vs-risk
metrics with tight witness instances, and pay-per-click auction scenarios.
"""

from ._mechlab import (
    ConfigError,
    NumericalError,
    PropertyViolation,
    ValuationMatrix,
    MidrInstance,
    single_item_instance,
    random_midr_instance,
    ResamplingLaw,
    ProductGammaDistribution,
    SubsetDistribution,
    MidrOracle,
    TableAllocation,
    tabulate,
    ReductionRun,
    run_optmidr,
    run_midr,
    clarke_pivot,
    SingleParamAllocation,
    PostedThreshold,
    TopKByScore,
    GridStepAllocation,
    random_grid_step,
    random_bids,
    SpReductionRun,
    run_bks,
    archer_tardos_payment,
    midr_truthfulness_max_residual,
    bks_payment_identity_residuals,
    bks_expected_level,
    IrNptReport,
    ir_npt_expectation,
    ExPostReport,
    ir_expost,
    McPoint,
    McCurve,
    mc_bks_curve,
    mc_midr_scale_curve,
    MetricsRecord,
    RiskStats,
    precision,
    welfare_ratio,
    revenue_ratio,
    risk_stats,
    midr_metrics,
    welfare_tight_witness,
    revenue_tight_witness,
    SweepReport,
    optimality_sweep,
    PpcSeparableInstance,
    NaiveVcgResult,
    naive_vcg,
    naive_vcg_utility,
    SkewExampleReport,
    skewed_estimate_example,
    PpcSpAllocation,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "PropertyViolation",
    "ValuationMatrix",
    "MidrInstance",
    "single_item_instance",
    "random_midr_instance",
    "ResamplingLaw",
    "ProductGammaDistribution",
    "SubsetDistribution",
    "MidrOracle",
    "TableAllocation",
    "tabulate",
    "ReductionRun",
    "run_optmidr",
    "run_midr",
    "clarke_pivot",
    "SingleParamAllocation",
    "PostedThreshold",
    "TopKByScore",
    "GridStepAllocation",
    "random_grid_step",
    "random_bids",
    "SpReductionRun",
    "run_bks",
    "archer_tardos_payment",
    "midr_truthfulness_max_residual",
    "bks_payment_identity_residuals",
    "bks_expected_level",
    "IrNptReport",
    "ir_npt_expectation",
    "ExPostReport",
    "ir_expost",
    "McPoint",
    "McCurve",
    "mc_bks_curve",
    "mc_midr_scale_curve",
    "MetricsRecord",
    "RiskStats",
    "precision",
    "welfare_ratio",
    "revenue_ratio",
    "risk_stats",
    "midr_metrics",
    "welfare_tight_witness",
    "revenue_tight_witness",
    "SweepReport",
    "optimality_sweep",
    "PpcSeparableInstance",
    "NaiveVcgResult",
    "naive_vcg",
    "naive_vcg_utility",
    "SkewExampleReport",
    "skewed_estimate_example",
    "PpcSpAllocation",
]
