"""Command-line interface: netlist sweeps, scenario presets, loss budget.

Exit codes: 0 success, 1 infeasible budget, 2 netlist errors or missing
files, 64 usage errors.  Data goes to stdout (or --out), diagnostics to
stderr; identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiment import (
    InfeasibleTargetError,
    SpectrumRecord,
    SweepConfig,
    loss_budget,
    noise_spectrum,
    snr_spectrum,
)
from .netlist import parse, validate
from .scenarios import SCENARIO_NAMES, scenario_records

USAGE_EXIT = 64
DATA_ERROR_EXIT = 2

CSV_HEADER = "frequency_hz,noise_rel_shot_db,signal_power,snr_db"


class _ArgumentParser(argparse.ArgumentParser):
    """argparse with the conventional usage exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="sqzsim",
        description="Frequency-domain quantum noise and signal transfer "
        "of squeezed-light interferometer chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser(
        "run", help="sweep a netlist and emit spectrum records"
    )
    run.add_argument("--netlist", required=True, help="netlist file path")
    run.add_argument("--fmin", type=float, default=2e6, help="sweep start in Hz")
    run.add_argument("--fmax", type=float, default=16e6, help="sweep end in Hz")
    run.add_argument("--points", type=int, default=500, help="sweep points (>= 2)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--out", default=None, help="output path (default stdout)")
    run.add_argument(
        "--signal-at",
        type=float,
        action="append",
        default=None,
        metavar="HZ",
        help="probe frequency in Hz; repeatable; emits SNR records "
        "instead of a noise sweep (requires a signal declaration)",
    )

    scenario = sub.add_parser(
        "scenario",
        help="run a built-in preset of the reference chain",
        description="Presets reproduce the reference measurements: "
        "fig2a shot noise, fig2b recycling cavity only, fig2c filter "
        "cavity only, fig2d both cavities, fig3 swept-signal SNR. "
        "Single-cavity labels follow the figure caption (the running "
        "text swaps b and c once).",
    )
    scenario.add_argument("name", help=f"one of: {', '.join(SCENARIO_NAMES)}")
    scenario.add_argument("--fmin", type=float, default=2e6)
    scenario.add_argument("--fmax", type=float, default=16e6)
    scenario.add_argument("--points", type=int, default=500)
    scenario.add_argument("--format", choices=("csv", "json"), default="csv")
    scenario.add_argument("--out", default=None)

    budget = sub.add_parser(
        "budget",
        help="maximum optical loss that keeps squeezing above a target",
    )
    budget.add_argument("--input-db", type=float, required=True)
    budget.add_argument("--target-db", type=float, required=True)

    return parser


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.9g}"


def _render_csv(records: list[SpectrumRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{_fmt(r.frequency_hz)},{_fmt(r.noise_rel_shot_db)},"
            f"{_fmt(r.signal_power)},{_fmt(r.snr_db)}"
        )
    return "\n".join(lines) + "\n"


def _render_json(records: list[SpectrumRecord]) -> str:
    def num(value: float | None) -> float | None:
        return None if value is None else float(f"{value:.9g}")

    payload = [
        {
            "frequency_hz": num(r.frequency_hz),
            "noise_rel_shot_db": num(r.noise_rel_shot_db),
            "signal_power": num(r.signal_power),
            "snr_db": num(r.snr_db),
        }
        for r in records
    ]
    return json.dumps(payload, indent=2) + "\n"


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _sweep_from(args, parser: _ArgumentParser) -> SweepConfig:
    try:
        return SweepConfig(args.fmin, args.fmax, args.points)
    except ValueError as exc:
        parser.error(str(exc))


def _cmd_run(args, parser: _ArgumentParser) -> int:
    sweep = _sweep_from(args, parser)
    try:
        text = open(args.netlist, encoding="utf-8").read()
    except OSError as exc:
        print(f"sqzsim: cannot read netlist: {exc}", file=sys.stderr)
        return DATA_ERROR_EXIT

    parsed = parse(text)
    for d in parsed.diagnostics:
        print(
            f"{args.netlist}:{d.line}:{d.column}: {d.severity}: {d.message}",
            file=sys.stderr,
        )
    if parsed.document is None:
        return DATA_ERROR_EXIT
    validated = validate(parsed.document)
    if validated.pipeline is None:
        for d in validated.diagnostics:
            if d.severity == "error":
                print(
                    f"{args.netlist}:{d.line}:{d.column}: {d.severity}: {d.message}",
                    file=sys.stderr,
                )
        return DATA_ERROR_EXIT
    pipeline = validated.pipeline

    if args.signal_at:
        if pipeline.signal is None:
            parser.error("--signal-at requires a signal declaration in the netlist")
        if any(f <= 0 for f in args.signal_at):
            parser.error("--signal-at frequencies must be positive")
        records = snr_spectrum(pipeline, sorted(args.signal_at))
    else:
        records = noise_spectrum(pipeline, sweep)
    render = _render_csv if args.format == "csv" else _render_json
    _write_output(render(records), args.out)
    return 0


def _cmd_scenario(args, parser: _ArgumentParser) -> int:
    if args.name not in SCENARIO_NAMES:
        parser.error(
            f"unknown scenario {args.name!r}; valid names: "
            + ", ".join(SCENARIO_NAMES)
        )
    sweep = _sweep_from(args, parser)
    records = scenario_records(args.name, sweep)
    render = _render_csv if args.format == "csv" else _render_json
    _write_output(render(records), args.out)
    return 0


def _cmd_budget(args) -> int:
    try:
        loss = loss_budget(args.input_db, args.target_db)
    except (InfeasibleTargetError, ValueError) as exc:
        print(f"sqzsim: infeasible: {exc}", file=sys.stderr)
        return 1
    print(f"max loss {100.0 * loss:.1f} %")
    print(f"min efficiency {100.0 * (1.0 - loss):.1f} %")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args, parser)
        if args.command == "scenario":
            return _cmd_scenario(args, parser)
        return _cmd_budget(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
