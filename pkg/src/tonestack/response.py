"""Frequency sweeps and control sweeps producing Bode-style curves."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .circuit import (
    ControlSettings,
    LoopCurrents,
    OutputMode,
    SignConvention,
    ToneStackComponents,
    WiperResistances,
    build_mesh_system,
    wiper_resistances,
)
from .linalg import SingularMatrixError, solve_elimination

SWEEPABLE_CONTROLS = ("bass", "mid", "treble")


class SolveFailure(Exception):
    """A mesh solve failed; carries the offending frequency."""

    def __init__(self, frequency: float, cause: SingularMatrixError):
        super().__init__(f"mesh solve failed at {frequency:g} Hz: {cause}")
        self.frequency = frequency


@dataclass(frozen=True, slots=True)
class FrequencyGrid:
    """Strictly increasing, positive frequency points in hertz."""

    points: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(f <= 0.0 or not math.isfinite(f) for f in self.points):
            raise ValueError("all grid frequencies must be positive and finite")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("grid frequencies must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def log_grid(exp_min: float, exp_max: float, n: int) -> FrequencyGrid:
    """n geometrically spaced points from 10^exp_min to 10^exp_max."""
    if exp_min >= exp_max:
        raise ValueError(f"exp_min ({exp_min}) must be below exp_max ({exp_max})")
    if n < 2:
        raise ValueError(f"grid needs at least 2 points, got {n}")
    step = (exp_max - exp_min) / (n - 1)
    exponents = [exp_min + k * step for k in range(n)]
    exponents[-1] = exp_max  # endpoint exact, matching logspace semantics
    return FrequencyGrid(tuple(10.0**e for e in exponents))


@dataclass(frozen=True, slots=True)
class ResponsePoint:
    frequency: float
    vout: complex
    magnitude_db: float
    phase_deg: float


@dataclass(frozen=True, slots=True)
class ResponseCurve:
    controls: ControlSettings
    vin: float
    convention: SignConvention
    mode: OutputMode
    points: tuple[ResponsePoint, ...]

    def frequencies(self) -> list[float]:
        return [p.frequency for p in self.points]

    def magnitudes_db(self) -> list[float]:
        return [p.magnitude_db for p in self.points]


def output_voltage(
    currents: LoopCurrents,
    wipers: WiperResistances,
    mode: OutputMode = OutputMode.COMPLEX_SUM,
) -> complex:
    """Combine the three output-path branch voltages into Vout.

    The output (treble wiper) sits above rt2, the bass/mid chain and the
    lower mid leg, carrying loop currents 2, 3 and 1 respectively.
    """
    if mode is OutputMode.COMPLEX_SUM:
        return (
            wipers.rm2 * currents.i1
            + wipers.rt2 * currents.i2
            + (wipers.rb1 + wipers.rm1) * currents.i3
        )
    return complex(
        wipers.rm2 * abs(currents.i1)
        + wipers.rt2 * abs(currents.i2)
        + (wipers.rb1 + wipers.rm1) * abs(currents.i3)
    )


def _phase_deg(v: complex) -> float:
    p = math.degrees(cmath.phase(v))
    if p <= -180.0:
        p += 360.0
    return p


def _response_point(vout: complex, frequency: float, vin: float) -> ResponsePoint:
    magnitude = abs(vout)
    db = 20.0 * math.log10(magnitude / abs(vin)) if magnitude > 0.0 else -math.inf
    return ResponsePoint(
        frequency=frequency,
        vout=vout,
        magnitude_db=db,
        phase_deg=_phase_deg(vout) if magnitude > 0.0 else 0.0,
    )


def frequency_response(
    components: ToneStackComponents,
    controls: ControlSettings,
    grid: FrequencyGrid,
    vin: float = 5.0,
    convention: SignConvention = SignConvention.PHYSICAL,
    mode: OutputMode = OutputMode.COMPLEX_SUM,
) -> ResponseCurve:
    """Solve the mesh system at every grid frequency."""
    wipers = wiper_resistances(components, controls)
    points = []
    for f in grid:
        system = build_mesh_system(components, controls, f, vin, convention)
        try:
            i = solve_elimination([list(row) for row in system.z], list(system.v))
        except SingularMatrixError as exc:
            raise SolveFailure(f, exc) from exc
        vout = output_voltage(LoopCurrents(i[0], i[1], i[2]), wipers, mode)
        points.append(_response_point(vout, f, vin))
    return ResponseCurve(
        controls=controls,
        vin=vin,
        convention=convention,
        mode=mode,
        points=tuple(points),
    )


def sweep_values(step: float) -> list[float]:
    """Control values 0, step, 2*step, ... with the final value clamped to 1."""
    if not (0.0 < step <= 1.0):
        raise ValueError(f"step must lie in (0, 1], got {step!r}")
    values = []
    k = 0
    while k * step < 1.0 - 1e-12:
        values.append(k * step)
        k += 1
    values.append(1.0)
    return values


def parameter_sweep(
    components: ToneStackComponents,
    which: str,
    fixed: ControlSettings,
    step: float,
    grid: FrequencyGrid,
    vin: float = 5.0,
    convention: SignConvention = SignConvention.PHYSICAL,
    mode: OutputMode = OutputMode.COMPLEX_SUM,
) -> list[ResponseCurve]:
    """Sweep one control from 0 to 1, others held at `fixed`."""
    if which not in SWEEPABLE_CONTROLS:
        raise ValueError(f"unknown control {which!r}; expected one of {SWEEPABLE_CONTROLS}")
    field = {"bass": "b", "mid": "m", "treble": "t"}[which]
    curves = []
    for value in sweep_values(step):
        settings = {"t": fixed.t, "m": fixed.m, "b": fixed.b, field: value}
        controls = ControlSettings(**settings)
        curves.append(
            frequency_response(components, controls, grid, vin, convention, mode)
        )
    return curves
