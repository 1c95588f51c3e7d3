"""Benchmark toolkit for extended state observer variants in ADR trajectory tracking.

Simulates a single degree-of-freedom mechanical plant under sinusoidal
disturbance and measurement noise, compares six observer designs (Luenberger
and low-power cascade architectures over three extended-state models), and
verifies the ISS-style error envelopes numerically.
"""

from .control import ControllerParams, closed_loop_residual, control_law, effective_input
from .observers import (
    AmObserver,
    EsoInput,
    EsoStructure,
    LuenbergerEso,
    am_default_gains,
    luenberger_gains,
    make_observer,
    observer_tag,
    structure_matrices,
)
from .plant import (
    ModelEstimate,
    PlantModel,
    PlantState,
    constant_disturbance,
    plant_derivative,
    preset_double_lag,
    sinusoidal_disturbance,
    total_disturbance_truth,
    zero_disturbance,
)
from .simkernel import (
    ConfigError,
    RunRecord,
    ScenarioConfig,
    criteria,
    noise_stream,
    read_csv,
    run_batch,
    run_scenario,
    write_csv,
    write_summary,
)
from .trajectory import FilteredStepGen, SinusoidGen, traj_sample

__version__ = "0.1.0"
