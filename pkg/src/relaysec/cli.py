"""Command-line front end: ``relaysec sweep --preset fig2 --out fig2.csv``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError
from .experiments import (
    DEFAULT_SWEEPS,
    ENGINES,
    PRESET_NOTES,
    PRESETS,
    SweepSpec,
    check_agreement,
    csv_text,
    dump_config,
    emit_csv,
    load_config,
    parse_snr_range,
)

EXIT_OK, EXIT_CONFIG, EXIT_DISAGREE = 0, 2, 3


def _csv_list(text):
    return tuple(t.strip() for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relaysec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sw = sub.add_parser("sweep", help="run an SNR sweep and write CSV")
    sw.add_argument("--preset", help="fig2, fig3, fig4, fig5 or custom")
    sw.add_argument("--variant", help="preset variant, e.g. rs2, th15, n1, case2")
    sw.add_argument("--config", type=Path, help="INI config file")
    sw.add_argument("--section", help="config section to run (default: the only one)")
    sw.add_argument("--engines", type=_csv_list, help=f"subset of {','.join(ENGINES)}")
    sw.add_argument("--schemes", type=_csv_list, help="subset of TS,ITS,OS")
    sw.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    sw.add_argument("--seed", type=int, help="Monte Carlo seed")
    sw.add_argument("--snr-db", help="start:stop:step (inclusive) or a comma list")
    sw.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                    help="link override in dB, e.g. beta_kd=20,20,20,20 (repeatable)")
    sw.add_argument("--workers", type=int, default=None)
    sw.add_argument("--assert-agreement", metavar="NSIGMA",
                    help="fail with exit code 3 if any analytic/MC pair differs by more than e.g. 3sigma")
    sw.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    sw.add_argument("--list-presets", action="store_true", help="list presets and exit")
    sw.add_argument("--emit-config", action="store_true", help="print the canonical config and exit")
    return parser


def _list_presets() -> str:
    lines = []
    for name, note in PRESET_NOTES.items():
        variants = ", ".join(PRESETS.get(name, {})) or "-"
        sweep = DEFAULT_SWEEPS[name]
        lines.append(f"{name:7s} variants: {variants:16s} sweep {sweep[0]:g}..{sweep[-1]:g} dB  {note}")
    return "\n".join(lines)


def _spec_from_args(args) -> SweepSpec:
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror or exc}") from None
        specs = load_config(text)
        if args.section is None:
            if len(specs) != 1:
                raise ConfigError(f"config has sections {', '.join(specs)}; pick one with --section")
            spec = next(iter(specs.values()))
        elif args.section not in specs:
            raise ConfigError(f"no section [{args.section}] in {args.config}")
        else:
            spec = specs[args.section]
        fields = spec.__dict__.copy()
    else:
        fields = {"figure": args.preset or "fig2"}
    if args.preset is not None:
        fields["figure"] = args.preset
    if args.variant is not None:
        fields["variant"] = args.variant
    if args.snr_db is not None:
        fields["sweep_db"] = parse_snr_range(args.snr_db)
    if args.engines is not None:
        fields["engines"] = args.engines
    if args.schemes is not None:
        fields["schemes"] = tuple(s.upper() for s in args.schemes)
    if args.trials is not None:
        fields["mc_trials"] = args.trials
    if args.seed is not None:
        fields["mc_seed"] = args.seed
    if args.override:
        extra = []
        for item in args.override:
            key, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"--override {item!r}: expected KEY=VALUE")
            extra.append((key.strip(), value.strip()))
        fields["overrides"] = tuple(fields.get("overrides", ())) + tuple(extra)
    try:
        return SweepSpec(**fields)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def _sigma(text: str) -> float:
    t = text.strip().lower().removesuffix("sigma").strip()
    try:
        return float(t)
    except ValueError:
        raise ConfigError(f"--assert-agreement: expected e.g. '3sigma', got {text!r}") from None


def main(argv=None) -> int:
    from .experiments import run_sweep

    args = build_parser().parse_args(argv)
    if args.list_presets:
        print(_list_presets())
        return EXIT_OK
    try:
        spec = _spec_from_args(args)
        n_sigma = _sigma(args.assert_agreement) if args.assert_agreement else None
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.emit_config:
        print(dump_config({spec.figure: spec}), end="")
        return EXIT_OK

    rows = run_sweep(spec, workers=args.workers)
    if args.out is not None:
        emit_csv(rows, args.out)
    else:
        sys.stdout.write(csv_text(rows))
    if n_sigma is not None:
        bad = check_agreement(rows, n_sigma)
        for a, m in bad:
            print(
                f"disagreement at {a.snr_db:g} dB {a.scheme}: analytic {a.outage:.6g}, "
                f"mc {m.outage:.6g} +- {m.stderr:.3g}",
                file=sys.stderr,
            )
        if bad:
            return EXIT_DISAGREE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
