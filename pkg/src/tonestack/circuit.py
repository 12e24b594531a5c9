"""Domain types and mesh-matrix assembly for the Bassman 5F6-A tone stack.

The tone stack is the passive RC/potentiometer network between the preamp
and the phase splitter of a Fender 5F6-A style amplifier.  Three loop
currents describe it completely, so the whole model per frequency is a
3x3 complex impedance system Z.I = V.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


class SignConvention(enum.Enum):
    """Sign placement for the capacitive terms of the mesh matrix.

    PHYSICAL uses the true capacitor impedance -j/(2*pi*f*C) everywhere.
    LEGACY reproduces a common MATLAB-style transcription that puts
    +j*X on the matrix diagonal and -j*X off-diagonal; the resulting
    matrix is the complex conjugate of the PHYSICAL one, so magnitudes
    agree and phases are negated.
    """

    PHYSICAL = "physical"
    LEGACY = "legacy"


class OutputMode(enum.Enum):
    """How the three branch voltages are combined into Vout.

    COMPLEX_SUM adds the branch voltages as phasors (physically correct,
    keeps phase information).  MAGNITUDE_SUM adds their magnitudes,
    discarding relative phase; kept for compatibility with legacy
    spreadsheet/MATLAB models that sum abs() values.
    """

    COMPLEX_SUM = "complex"
    MAGNITUDE_SUM = "magnitude"


def _check_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True, slots=True)
class ToneStackComponents:
    """Fixed component values: slope resistor, three pots, three caps.

    Resistances in ohms, capacitances in farads.  rt/rm/rb are the
    total (end-to-end) resistances of the treble, mid and bass pots.
    """

    r1: float
    rt: float
    rm: float
    rb: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self) -> None:
        for name in ("r1", "rt", "rm", "rb", "c1", "c2", "c3"):
            _check_positive(name, getattr(self, name))

    @classmethod
    def bassman_5f6a(cls) -> "ToneStackComponents":
        """Stock '59 Bassman values: 56k slope, 220k/25k/1M pots, 220p/22n/22n."""
        return cls(
            r1=56e3,
            rt=220e3,
            rm=25e3,
            rb=1e6,
            c1=220e-12,
            c2=0.022e-6,
            c3=0.022e-6,
        )


@dataclass(frozen=True, slots=True)
class ControlSettings:
    """Wiper positions of the three pots, each in [0, 1].

    t=1 is maximum treble cut, m=1 maximum mid cut, b=0 maximum bass cut.
    """

    t: float
    m: float
    b: float

    def __post_init__(self) -> None:
        for name in ("t", "m", "b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"control {name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True, slots=True)
class WiperResistances:
    """Pot legs after applying the wiper positions.

    rt1: treble top terminal to wiper, rt2: wiper to bottom terminal.
    rm1: mid pot top (next to the bass pot) to wiper, rm2: wiper to ground.
    rb1: active portion of the bass rheostat.
    """

    rt1: float
    rt2: float
    rm1: float
    rm2: float
    rb1: float


def wiper_resistances(
    components: ToneStackComponents, controls: ControlSettings
) -> WiperResistances:
    """Split the pot resistances according to the wiper positions."""
    return WiperResistances(
        rt1=components.rt * controls.t,
        rt2=components.rt * (1.0 - controls.t),
        rm1=components.rm * controls.m,
        rm2=components.rm * (1.0 - controls.m),
        rb1=components.rb * controls.b,
    )


def audio_taper(position: float) -> float:
    """Map a knob position in [0, 1] through an audio (log) taper curve.

    Returns (10^(2p) - 1) / 99, which is 0 at 0, 1 at 1, and ~0.09 at
    mid rotation, approximating a 10%-at-center audio pot.  The stock
    model maps the bass knob linearly; apply this first to emulate the
    real part's logarithmic taper.
    """
    if not (0.0 <= position <= 1.0):
        raise ValueError(f"position must lie in [0, 1], got {position!r}")
    return (10.0 ** (2.0 * position) - 1.0) / 99.0


def capacitive_reactance(frequency: float, capacitance: float) -> float:
    """Reactance magnitude 1/(2*pi*f*C) of an ideal capacitor, in ohms."""
    _check_positive("frequency", frequency)
    _check_positive("capacitance", capacitance)
    return 1.0 / (TWO_PI * frequency * capacitance)


def capacitor_impedance(frequency: float, capacitance: float) -> complex:
    """Ideal capacitor impedance 1/(j*2*pi*f*C) = -j*X, in ohms."""
    return complex(0.0, -capacitive_reactance(frequency, capacitance))


@dataclass(frozen=True, slots=True)
class MeshSystem:
    """The 3x3 loop-impedance system Z.I = V at one frequency."""

    z: tuple[tuple[complex, complex, complex], ...]
    v: tuple[complex, complex, complex]
    frequency: float


@dataclass(frozen=True, slots=True)
class LoopCurrents:
    """Solved loop currents, in amperes."""

    i1: complex
    i2: complex
    i3: complex


def build_mesh_system(
    components: ToneStackComponents,
    controls: ControlSettings,
    frequency: float,
    vin: float,
    convention: SignConvention = SignConvention.PHYSICAL,
) -> MeshSystem:
    """Assemble the loop-impedance matrix and excitation vector.

    Loop 1 carries the source through R1, the lower mid-pot leg and C3;
    loop 2 runs through C1, the treble pot, C2 and R1; loop 3 closes the
    bass rheostat and upper mid-pot leg through C2 and C3.  The matrix
    is symmetric (reciprocal passive network).
    """
    _check_positive("frequency", frequency)
    if not (math.isfinite(vin) and vin != 0.0):
        raise ValueError(f"vin must be finite and nonzero, got {vin!r}")

    w = wiper_resistances(components, controls)
    x1 = capacitive_reactance(frequency, components.c1)
    x2 = capacitive_reactance(frequency, components.c2)
    x3 = capacitive_reactance(frequency, components.c3)

    if convention is SignConvention.PHYSICAL:
        # Capacitor impedance -jX on the diagonal; off-diagonal entries are
        # the negated shared impedance, hence +jX.
        d1 = complex(components.r1 + w.rm2, -x3)
        d2 = complex(w.rt1 + w.rt2 + components.r1, -(x1 + x2))
        d3 = complex(w.rb1 + w.rm1, -(x2 + x3))
        o13 = complex(0.0, x3)
        o23 = complex(0.0, x2)
    else:
        d1 = complex(components.r1 + w.rm2, x3)
        d2 = complex(w.rt1 + w.rt2 + components.r1, x1 + x2)
        d3 = complex(w.rb1 + w.rm1, x2 + x3)
        o13 = complex(0.0, -x3)
        o23 = complex(0.0, -x2)

    o12 = complex(-components.r1, 0.0)
    z = (
        (d1, o12, o13),
        (o12, d2, o23),
        (o13, o23, d3),
    )
    return MeshSystem(z=z, v=(complex(vin), 0j, 0j), frequency=frequency)
