"""Command-line interface: single responses, control sweeps, oracle compare.

Exit codes are a stable contract: 0 success, 1 input error, 2 numerical
failure, 3 comparison failure.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import math
import os
import sys
import tempfile
from dataclasses import replace

from . import netlist, oracle, plotting
from .circuit import ControlSettings, audio_taper
from .netlist import ConfigDocument, ParseError
from .response import (
    SWEEPABLE_CONTROLS,
    ResponseCurve,
    ResponsePoint,
    SolveFailure,
    frequency_response,
    sweep_values,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_COMPARE = 3

CSV_HEADER = ["frequency_hz", "vout_re", "vout_im", "magnitude_db", "phase_deg"]

# load_compat folds the canonical surroundings into the three-loop model:
# a 1k source resistance in series with the slope resistor, and a 1M load
# applied post hoc as a divider against the pot's wiper source resistance.
SOURCE_RESISTANCE = 1e3
LOAD_RESISTANCE = 1e6


class _InputError(Exception):
    pass


def _load_config(path: str, overrides: list[str]) -> ConfigDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        doc = netlist.parse(text)
    except ParseError as exc:
        raise _InputError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from exc
    try:
        return netlist.apply_overrides(doc, overrides or [])
    except ParseError as exc:
        raise _InputError(
            f"<override>:{exc.line}:{exc.column}: {exc.message}"
        ) from exc


def _effective_document(doc: ConfigDocument, bass_audio_taper: bool) -> ConfigDocument:
    if bass_audio_taper:
        doc = replace(doc, controls=replace(doc.controls, b=audio_taper(doc.controls.b)))
    if doc.load_compat:
        doc = replace(
            doc,
            components=replace(doc.components, r1=doc.components.r1 + SOURCE_RESISTANCE),
        )
    return doc


def _apply_load(curve: ResponseCurve, components) -> ResponseCurve:
    """Scale the unloaded output by the load divider at the wiper."""
    from .circuit import wiper_resistances

    w = wiper_resistances(components, curve.controls)
    rt = w.rt1 + w.rt2
    source_r = w.rt1 * w.rt2 / rt
    factor = LOAD_RESISTANCE / (LOAD_RESISTANCE + source_r)
    shift = 20.0 * math.log10(factor)
    points = tuple(
        ResponsePoint(
            frequency=p.frequency,
            vout=p.vout * factor,
            magnitude_db=p.magnitude_db + shift,
            phase_deg=p.phase_deg,
        )
        for p in curve.points
    )
    return replace(curve, points=points)


def _compute_curve(doc: ConfigDocument, controls: ControlSettings) -> ResponseCurve:
    curve = frequency_response(
        doc.components,
        controls,
        doc.grid.build(),
        doc.vin,
        doc.convention,
        doc.mode,
    )
    if doc.load_compat:
        curve = _apply_load(curve, doc.components)
    return curve


def _write_csv(curve: ResponseCurve, path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for p in curve.points:
                writer.writerow(
                    [
                        repr(p.frequency),
                        repr(p.vout.real),
                        repr(p.vout.imag),
                        repr(p.magnitude_db),
                        repr(p.phase_deg),
                    ]
                )
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_response(args) -> int:
    doc = _effective_document(
        _load_config(args.config, args.set), args.bass_audio_taper
    )
    curve = _compute_curve(doc, doc.controls)
    _write_csv(curve, args.out)
    if args.svg:
        fig = plotting.bode_figure([curve], [""])
        plotting.save_figure(fig, args.svg)
    return EXIT_OK


def cmd_sweep(args) -> int:
    doc = _effective_document(
        _load_config(args.config, args.set), args.bass_audio_taper
    )
    control = args.control or (doc.sweep.control if doc.sweep else None)
    if control is None:
        raise _InputError("no sweep control given (use --control or a 'sweep =' line)")
    step = args.step if args.step is not None else (doc.sweep.step if doc.sweep else 0.1)
    if not 0.0 < step <= 1.0:
        raise _InputError(f"--step must lie in (0, 1], got {step}")

    os.makedirs(args.out_dir, exist_ok=True)
    field = {"bass": "b", "mid": "m", "treble": "t"}[control]
    curves = []
    labels = []
    for value in sweep_values(step):
        controls = replace(doc.controls, **{field: value})
        curve = _compute_curve(doc, controls)
        name = f"{control}_{value:.2f}.csv"
        _write_csv(curve, os.path.join(args.out_dir, name))
        curves.append(curve)
        labels.append(f"{control} = {value:.2f}")
    fig = plotting.bode_figure(curves, labels, title=f"{control} sweep")
    plotting.save_figure(fig, os.path.join(args.out_dir, f"{control}_sweep.svg"))
    return EXIT_OK


def cmd_compare(args) -> int:
    doc = _load_config(args.config, args.set)
    density = args.grid_density
    if density < 2:
        raise _InputError(f"--grid-density must be at least 2, got {density}")
    values = [k / (density - 1) for k in range(density)]
    grid = doc.grid.build()

    worst = -1.0
    worst_at = None
    for t, m, b in itertools.product(values, repeat=3):
        controls = ControlSettings(t=t, m=m, b=b)
        curve = frequency_response(doc.components, controls, grid, doc.vin)
        for point in curve.points:
            reference = oracle.nodal_response(
                doc.components, controls, point.frequency, doc.vin
            )
            deviation = abs(point.vout - reference) / abs(reference)
            if deviation > worst:
                worst = deviation
                worst_at = (point.frequency, t, m, b)
    f, t, m, b = worst_at
    print(
        f"max relative deviation {worst:.3e} at f={f:g} Hz, t={t:g}, m={m:g}, b={b:g}"
    )
    if worst > args.tolerance:
        print(f"exceeds tolerance {args.tolerance:g}", file=sys.stderr)
        return EXIT_COMPARE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tonestack",
        description="Frequency-domain model of the Bassman 5F6-A tone stack",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="path to a config file")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override a config value (repeatable)",
        )

    p_response = sub.add_parser("response", help="single-setting frequency response")
    common(p_response)
    p_response.add_argument("--out", default="response.csv", help="output CSV path")
    p_response.add_argument("--svg", help="also render an SVG Bode plot")
    p_response.add_argument(
        "--bass-audio-taper",
        action="store_true",
        help="map the bass knob through an audio-taper curve first",
    )
    p_response.set_defaults(func=cmd_response)

    p_sweep = sub.add_parser("sweep", help="sweep one control from 0 to 1")
    common(p_sweep)
    p_sweep.add_argument("--control", choices=SWEEPABLE_CONTROLS)
    p_sweep.add_argument("--step", type=float)
    p_sweep.add_argument("--out-dir", default=".", help="directory for CSVs and SVG")
    p_sweep.add_argument("--bass-audio-taper", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_compare = sub.add_parser(
        "compare", help="cross-check the mesh solve against the nodal oracle"
    )
    common(p_compare)
    p_compare.add_argument("--grid-density", type=int, default=5)
    p_compare.add_argument("--tolerance", type=float, default=1e-6)
    p_compare.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except SolveFailure as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
