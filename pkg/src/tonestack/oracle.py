"""Independent validators for the mesh model.

`nodal_response` re-derives the output from Kirchhoff's current law at
the circuit nodes, sharing no matrix-assembly code with the mesh path.
`hf_limit` and `dc_limit` are analytic asymptotes (capacitors shorted /
open).  `script_replica` runs the legacy magnitude-sum pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (
    ControlSettings,
    OutputMode,
    SignConvention,
    ToneStackComponents,
    wiper_resistances,
)
from .linalg import SingularMatrixError, solve_elimination
from .response import (
    FrequencyGrid,
    ResponseCurve,
    ResponsePoint,
    SolveFailure,
    _response_point,
    log_grid,
)

# Node ids for the fixed 5F6-A topology.
_GND, _IN, _X, _T, _B, _C, _M = range(7)
_NODE_COUNT = 7


@dataclass(frozen=True)
class NodalSystem:
    """KCL system over the unknown (merged) nodes.

    `y` is the complex admittance matrix in siemens, `rhs` the source
    currents injected by the driven node, `index` maps original node id
    to its row (or -1 for known/merged-away nodes).
    """

    node_count: int
    y: np.ndarray
    rhs: np.ndarray
    index: tuple[int, ...]


class _Union:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def merge(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Keep GND, then IN, as canonical representatives.
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def _branches(components: ToneStackComponents, wipers, omega: float | None):
    """Branch list as (node_a, node_b, admittance | None for a short).

    With omega=None the capacitors are treated as shorts (the f->inf
    resistive limit); otherwise their admittance is j*omega*C.
    """
    caps = [
        (_IN, _T, components.c1),
        (_X, _B, components.c2),
        (_X, _M, components.c3),
    ]
    out: list[tuple[int, int, complex | None]] = [
        (_IN, _X, 1.0 / components.r1),
        (_T, _B, 1.0 / (wipers.rt1 + wipers.rt2)),
    ]
    for a, b, c in caps:
        out.append((a, b, None if omega is None else 1j * omega * c))
    for a, b, r in ((_B, _C, wipers.rb1), (_C, _M, wipers.rm1), (_M, _GND, wipers.rm2)):
        out.append((a, b, None if r == 0.0 else 1.0 / r))
    return out


def _assemble(branches, vin: float) -> tuple[NodalSystem, _Union]:
    uf = _Union(_NODE_COUNT)
    for a, b, y in branches:
        if y is None:
            uf.merge(a, b)
    if uf.find(_IN) == uf.find(_GND):
        raise ValueError("degenerate network: source shorted to ground")

    known = {uf.find(_GND): 0.0, uf.find(_IN): vin}
    reps = sorted({uf.find(n) for n in range(_NODE_COUNT)} - set(known))
    row_of = {rep: i for i, rep in enumerate(reps)}
    n = len(reps)
    y_mat = np.zeros((n, n), dtype=complex)
    rhs = np.zeros(n, dtype=complex)

    for a, b, y in branches:
        if y is None:
            continue
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            continue
        for r_self, r_other in ((ra, rb), (rb, ra)):
            if r_self in known:
                continue
            i = row_of[r_self]
            y_mat[i, i] += y
            if r_other in known:
                rhs[i] += y * known[r_other]
            else:
                y_mat[i, row_of[r_other]] -= y

    index = tuple(row_of.get(uf.find(node), -1) for node in range(_NODE_COUNT))
    return NodalSystem(node_count=n, y=y_mat, rhs=rhs, index=index), uf


def nodal_system(
    components: ToneStackComponents,
    controls: ControlSettings,
    frequency: float,
    vin: float,
) -> NodalSystem:
    """Assembled KCL system at one frequency (exposed for validation)."""
    wipers = wiper_resistances(components, controls)
    omega = 2.0 * np.pi * frequency
    system, _ = _assemble(_branches(components, wipers, omega), vin)
    return system


def _node_voltage(system: NodalSystem, uf: _Union, solution: np.ndarray, node: int, vin: float):
    rep = uf.find(node)
    if rep == uf.find(_GND):
        return 0.0
    if rep == uf.find(_IN):
        return vin
    return solution[system.index[node]]


def _solve_output(components, wipers, branches, vin: float):
    system, uf = _assemble(branches, vin)
    if system.node_count:
        solution = np.linalg.solve(system.y, system.rhs)
        if not np.all(np.isfinite(solution)):
            raise SingularMatrixError("nodal solve produced non-finite voltages")
    else:
        solution = np.zeros(0)
    v_top = _node_voltage(system, uf, solution, _T, vin)
    v_bottom = _node_voltage(system, uf, solution, _B, vin)
    # No load at the wiper: plain resistive divider along the treble pot.
    rt = wipers.rt1 + wipers.rt2
    return (v_top * wipers.rt2 + v_bottom * wipers.rt1) / rt


def nodal_response(
    components: ToneStackComponents,
    controls: ControlSettings,
    frequency: float,
    vin: float,
) -> complex:
    """Treble-wiper voltage from nodal (KCL) analysis."""
    wipers = wiper_resistances(components, controls)
    omega = 2.0 * np.pi * frequency
    return complex(_solve_output(components, wipers, _branches(components, wipers, omega), vin))


def hf_limit(
    components: ToneStackComponents, controls: ControlSettings, vin: float
) -> float:
    """Output magnitude with every capacitor shorted (the f->inf limit)."""
    wipers = wiper_resistances(components, controls)
    return abs(_solve_output(components, wipers, _branches(components, wipers, None), vin))


def dc_limit() -> float:
    """DC output is exactly zero: every input-output path crosses a capacitor."""
    return 0.0


def script_replica(
    components: ToneStackComponents,
    controls: ControlSettings,
    vin: float = 5.0,
) -> ResponseCurve:
    """Legacy pipeline: +jX diagonal, magnitude-sum output, 50-point grid.

    Kept as a straight-line transcription so it can be diffed against
    `frequency_response` under the matching flags.
    """
    w = wiper_resistances(components, controls)
    grid = log_grid(0.0, 5.0, 50)
    two_pi = 2.0 * np.pi
    points: list[ResponsePoint] = []
    for f in grid:
        xc1 = 1.0 / (two_pi * f * components.c1)
        xc2 = 1.0 / (two_pi * f * components.c2)
        xc3 = 1.0 / (two_pi * f * components.c3)
        z = [
            [complex(components.r1 + w.rm2, xc3), complex(-components.r1), complex(0.0, -xc3)],
            [complex(-components.r1), complex(w.rt1 + w.rt2 + components.r1, xc2 + xc1), complex(0.0, -xc2)],
            [complex(0.0, -xc3), complex(0.0, -xc2), complex(w.rb1 + w.rm1, xc2 + xc3)],
        ]
        try:
            i = solve_elimination(z, [complex(vin), 0j, 0j])
        except SingularMatrixError as exc:
            raise SolveFailure(f, exc) from exc
        v_total = w.rm2 * abs(i[0]) + w.rt2 * abs(i[1]) + (w.rb1 + w.rm1) * abs(i[2])
        points.append(_response_point(complex(v_total), f, vin))
    return ResponseCurve(
        controls=controls,
        vin=vin,
        convention=SignConvention.LEGACY,
        mode=OutputMode.MAGNITUDE_SUM,
        points=tuple(points),
    )
