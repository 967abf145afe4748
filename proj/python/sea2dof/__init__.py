"""Two-degree-of-freedom torque and impedance control for a series elastic actuator."""

from ._core import (
    FrfEstimate,
    NumericalError,
    SeaModel,
    SeaParams,
    SimTrace,
    SynthesisWeights,
    TorqueLoopMaps,
    TransferFunction,
    TwoDofController,
    ValidationError,
    bandwidth_3db,
    build_compensator,
    build_plant,
    default_params,
    estimate_frf,
    frequency_response,
    h2_synthesize,
    phase_at,
    preset_names,
    reproduce,
    roots,
    run_preset_trace,
    solve_diophantine,
    spectral_factor,
    torque_loop_maps,
)

__all__ = [name for name in dir() if not name.startswith("_")]
