"""Frequency-domain model of the Fender Bassman 5F6-A tone stack."""

from .circuit import (
    ControlSettings,
    LoopCurrents,
    MeshSystem,
    OutputMode,
    SignConvention,
    ToneStackComponents,
    WiperResistances,
    audio_taper,
    build_mesh_system,
    capacitive_reactance,
    capacitor_impedance,
    wiper_resistances,
)
from .linalg import (
    DimensionMismatchError,
    SingularMatrixError,
    residual,
    solve_cramer3,
    solve_elimination,
)
from .netlist import ConfigDocument, ParseError, parse, serialize
from .oracle import dc_limit, hf_limit, nodal_response, script_replica
from .response import (
    FrequencyGrid,
    ResponseCurve,
    ResponsePoint,
    SolveFailure,
    frequency_response,
    log_grid,
    output_voltage,
    parameter_sweep,
)

__version__ = "0.1.0"
