from .fast_diffusion import (
    EntropyProductionIntegral,
    RadialOperators,
    bakry_emery_integral,
    bakry_emery_remainder,
    barenblatt_mass,
    fit_barenblatt_D,
    mass_neutral,
    run_fast_diffusion,
)
from .integrator import integrate, rk4_step
from .log_diffusion import log_diffusion_diagnostics, log_entropy, run_log_diffusion
from .rigidity import g_lambda_rate, rigidity_rhs, run_rigidity_flow
from .trace import CSV_COLUMNS, FlowState, FlowTrace, exponential_tail, read_trace_csv

__all__ = [
    "CSV_COLUMNS",
    "EntropyProductionIntegral",
    "FlowState",
    "FlowTrace",
    "RadialOperators",
    "bakry_emery_integral",
    "bakry_emery_remainder",
    "barenblatt_mass",
    "exponential_tail",
    "fit_barenblatt_D",
    "g_lambda_rate",
    "integrate",
    "log_diffusion_diagnostics",
    "log_entropy",
    "mass_neutral",
    "read_trace_csv",
    "rigidity_rhs",
    "rk4_step",
    "run_fast_diffusion",
    "run_log_diffusion",
    "run_rigidity_flow",
]
