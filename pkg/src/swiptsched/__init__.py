"""Downlink SWIPT scheduling: analytics and Monte Carlo simulation.

One user per slot is scheduled for information decoding while the rest
harvest energy from the same transmission. The package covers round robin,
order-based normalized-SNR selection, and the order-based equal-throughput
scheme, with closed-form or quadrature rate-energy analytics next to a
slot-level simulator for cross-checking.
"""

from .analytic import (
    AllowedOrderSet,
    CancellationWarning,
    ETSolution,
    FeasibilityReport,
    FeasibilityViolation,
    SchedulerAnalysis,
    et_analysis,
    et_feasibility,
    et_feasibility_exhaustive,
    et_harvest,
    et_probabilities,
    et_throughput,
    full_access_capacity,
    nsnr_analysis,
    nsnr_capacity,
    nsnr_harvest,
    rr_analysis,
)
from .channel import (
    FadingParams,
    Scenario,
    cdf_gain,
    dbm_to_watt,
    normalized_cdf,
    normalized_pdf,
    pdf_gain,
    sample_gain,
    sample_gains,
    watt_to_dbm,
)
from .orderstats import (
    OrderSpec,
    expected_ordered_gain,
    harmonic_tail,
    ordered_pdf,
    rank_of_users,
)
from .sim import (
    Constant,
    ConvergenceReport,
    OrderET,
    OrderNSNR,
    RoundRobin,
    SimConfig,
    SimResult,
    VanishingStep,
    convergence_report,
    run,
    step_et,
)
from .specfun import (
    ConvergenceError,
    QuadratureSpec,
    bessel_i0,
    bessel_i0_scaled,
    exp_integral_e1,
    exp_integral_e1_scaled,
    integrate_semi_infinite,
    marcum_q1,
)

__version__ = "0.1.0"

__all__ = [
    "AllowedOrderSet",
    "CancellationWarning",
    "Constant",
    "ConvergenceError",
    "ConvergenceReport",
    "ETSolution",
    "FadingParams",
    "FeasibilityReport",
    "FeasibilityViolation",
    "OrderET",
    "OrderNSNR",
    "OrderSpec",
    "QuadratureSpec",
    "RoundRobin",
    "Scenario",
    "SchedulerAnalysis",
    "SimConfig",
    "SimResult",
    "VanishingStep",
    "bessel_i0",
    "bessel_i0_scaled",
    "cdf_gain",
    "convergence_report",
    "dbm_to_watt",
    "et_analysis",
    "et_feasibility",
    "et_feasibility_exhaustive",
    "et_harvest",
    "et_probabilities",
    "et_throughput",
    "exp_integral_e1",
    "exp_integral_e1_scaled",
    "expected_ordered_gain",
    "full_access_capacity",
    "harmonic_tail",
    "integrate_semi_infinite",
    "marcum_q1",
    "normalized_cdf",
    "normalized_pdf",
    "nsnr_analysis",
    "nsnr_capacity",
    "nsnr_harvest",
    "ordered_pdf",
    "pdf_gain",
    "rank_of_users",
    "rr_analysis",
    "run",
    "sample_gain",
    "sample_gains",
    "step_et",
    "watt_to_dbm",
    "__version__",
]

from .cli import link_budget_omega, parse_config, scenario_to_config_text  # noqa: E402

__all__ += ["link_budget_omega", "parse_config", "scenario_to_config_text"]
