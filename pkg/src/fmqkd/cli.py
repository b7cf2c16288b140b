"""Command-line front end for the mirror-imperfection sweeps.

Subcommands: ``attack-sweep``, ``keyrate-sweep``, ``compensation-check`` and
``dump-states``. Each reads optional defaults from an INI-style config file
(one ``[section]`` per mode, ``key = value`` lines) and lets flags override
them, e.g. ``--eps2=0.25:1.0:0.25``.

Exit codes: 0 success, 1 config error, 2 every grid point failed,
3 numerical inconsistency at some point.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from pathlib import Path

from .errors import ConfigError
from .sweep import (
    STATUS_NUMERICAL,
    Grid,
    SweepConfig,
    plot_script,
    run,
    serialize,
)

log = logging.getLogger("fmqkd")

EXIT_OK, EXIT_CONFIG, EXIT_ALL_FAILED, EXIT_NUMERICAL = 0, 1, 2, 3

SUBCOMMANDS = {
    "attack-sweep": ("attack", ["eps1", "eps2"]),
    "keyrate-sweep": ("keyrate", ["eps1", "eps2", "eps3", "delta", "q"]),
    "compensation-check": ("compensation", ["eps1", "eps2", "eps3", "eps4"]),
    "dump-states": ("states", ["eps1", "eps2", "eps3"]),
}

_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL[str(text).strip().lower()]
    except KeyError:
        raise ConfigError(f"expected a boolean, got {text!r}") from None


def read_config_file(path: Path, mode: str) -> dict[str, str]:
    """Flat ``key = value`` settings for ``mode`` from an INI-style file.

    Keys in a ``[common]`` section apply to every mode; the mode's own
    section overrides them.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out: dict[str, str] = {}
    for section in ("common", mode):
        if parser.has_section(section):
            out.update(parser.items(section))
    return out


def build_config(mode: str, params: list[str], settings: dict[str, str]) -> SweepConfig:
    known = set(params) | {"output", "format", "seed", "parallel", "random_draws", "random_max_deg"}
    unknown = set(settings) - known
    if unknown:
        raise ConfigError(f"unknown settings for {mode}: {sorted(unknown)}")
    grids = {p: Grid.parse(settings[p]) for p in params if p in settings}
    try:
        return SweepConfig(
            mode=mode,
            grids=grids,
            output=Path(settings["output"]) if settings.get("output") not in (None, "", "-") else None,
            format=settings.get("format", "csv"),
            seed=int(settings.get("seed", 0)),
            parallel=_parse_bool(settings.get("parallel", "false")),
            random_draws=int(settings.get("random_draws", 0)),
            random_max_deg=float(settings.get("random_max_deg", 1.0)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fmqkd",
        description="Imperfect Faraday-mirror sweeps for one-way Faraday-Michelson QKD.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name, (mode, params) in SUBCOMMANDS.items():
        s = sub.add_parser(name, help=f"{mode} sweep")
        s.add_argument("--config", type=Path, help="INI-style config file")
        s.add_argument("--output", help="output file (default: stdout)")
        s.add_argument("--format", choices=["csv", "json"])
        s.add_argument("--parallel", action="store_const", const="true")
        s.add_argument("--seed", help="RNG seed (random draws only)")
        s.add_argument("--emit-plot-script", action="store_true",
                       help="also write a plotting script next to the CSV output")
        for param in params:
            unit = "deg" if param.startswith("eps") else "value"
            s.add_argument(f"--{param}", metavar="START:STOP:STEP",
                           help=f"{param} grid ({unit}) or single value")
        if mode == "compensation":
            s.add_argument("--random-draws", dest="random_draws",
                           help="additional uniformly random mirror configurations")
            s.add_argument("--random-max-deg", dest="random_max_deg",
                           help="bound on |eps| for random draws (deg)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    mode, params = SUBCOMMANDS[args.cmd]
    try:
        settings = read_config_file(args.config, mode) if args.config else {}
        overrides = {
            k: v for k, v in vars(args).items()
            if v is not None and k in set(params) | {"output", "format", "seed", "parallel",
                                                     "random_draws", "random_max_deg"}
        }
        settings.update(overrides)
        cfg = build_config(mode, params, settings)
        if args.emit_plot_script and (cfg.output is None or cfg.format != "csv"):
            raise ConfigError("--emit-plot-script needs --output with csv format")
    except ConfigError as exc:
        print(f"fmqkd: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    records = run(cfg)
    text = serialize(records, mode, cfg.format)
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_bytes(text.encode("utf-8"))
        log.info("wrote %d records to %s", len(records), cfg.output)
        if args.emit_plot_script:
            script = cfg.output.with_name(cfg.output.stem + "_plot.py")
            script.write_text(plot_script(mode, cfg.output), encoding="utf-8")

    statuses = [r["status"] for r in records if "status" in r]
    if STATUS_NUMERICAL in statuses:
        return EXIT_NUMERICAL
    failed = sum(1 for s in statuses if s in ("degenerate", "domain_error"))
    if statuses and failed == len(statuses):
        return EXIT_ALL_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
