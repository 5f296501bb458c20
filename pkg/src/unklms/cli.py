"""Command-line entry point.

Verbs: `run` (one experiment), `compare` (gaussian baseline vs unit-norm on
the same stream), `gen` (write a synthetic series to CSV). A flat
key=value config file may set any run/compare option; explicit flags win.

Exit codes: 0 ok, 2 bad config, 3 ingestion failure, 4 numeric fault,
5 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError, IngestionError, NumericFault, UndefinedMetric
from .harness import (
    SYNTHETIC_KINDS,
    ExperimentConfig,
    make_series,
    run_comparison,
    run_experiment,
    write_series_csv,
)

_INT_KEYS = {"n", "order", "truncate", "seed"}
_FLOAT_KEYS = {
    "amplitude",
    "period",
    "phase",
    "slope",
    "intercept",
    "mu",
    "epsilon",
    "l0",
    "lengthscale",
    "delta_dict",
    "delta_pred",
}
_BOOL_KEYS = {"plain_lms"}
_STR_KEYS = {"mode", "data", "column", "synthetic", "nmse_variant", "out_dir"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _STR_KEYS


def _coerce(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def read_config_file(path: str) -> dict:
    """Parse `key = value` lines; '#' starts a comment, blanks are skipped."""
    out: dict = {}
    try:
        with open(path) as fh:
            for line_no, line in enumerate(fh, start=1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                if "=" not in text:
                    raise ConfigError(f"{path}:{line_no}: expected key=value, got {text!r}")
                key, _, raw = text.partition("=")
                key = key.strip().replace("-", "_")
                if key not in _ALL_KEYS:
                    raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
                out[key] = _coerce(key, raw.strip())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return out


def _add_experiment_flags(p: argparse.ArgumentParser, with_mode: bool) -> None:
    # Defaults are all None so the file/flag precedence can tell what was
    # set explicitly; real defaults live on ExperimentConfig.
    p.add_argument("--config", metavar="FILE", help="flat key=value config file")
    p.add_argument("--data", metavar="CSV", help="input CSV path")
    p.add_argument("--column", help="value column in --data")
    p.add_argument("--synthetic", choices=SYNTHETIC_KINDS, help="generated series")
    p.add_argument("--n", type=int, help="synthetic sample count")
    p.add_argument("--amplitude", type=float, help="sine amplitude")
    p.add_argument("--period", type=float, help="sine period in samples")
    p.add_argument("--phase", type=float, help="sine phase in radians")
    p.add_argument("--slope", type=float, help="ramp slope per sample")
    p.add_argument("--intercept", type=float, help="ramp start value")
    if with_mode:
        p.add_argument("--mode", choices=("gaussian", "unitnorm"), help="kernel mode")
    p.add_argument("--order", type=int, help="embedding order d")
    p.add_argument("--mu", type=float, help="LMS step size in (0,1)")
    p.add_argument("--epsilon", type=float, help="step-size regulariser")
    p.add_argument("--l0", type=float, help="per-coordinate kernel width")
    p.add_argument("--lengthscale", type=float, help="kernel width, overrides --l0")
    p.add_argument("--delta-dict", type=float, dest="delta_dict", help="novelty threshold")
    p.add_argument("--delta-pred", type=float, dest="delta_pred", help="error threshold")
    p.add_argument("--truncate", type=int, help="use only the first N series values")
    p.add_argument(
        "--nmse", choices=("variance", "power"), dest="nmse_variant", help="NMSE normaliser"
    )
    p.add_argument(
        "--plain-lms",
        dest="plain_lms",
        action="store_true",
        default=None,
        help="fixed step size (gaussian baseline only)",
    )
    p.add_argument("--seed", type=int, help="echoed into reports")
    p.add_argument("--out", dest="out_dir", metavar="DIR", help="report output directory")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="unklms", description="online kernel LMS experiment runner"
    )
    sub = p.add_subparsers(dest="verb", required=True)
    run_p = sub.add_parser("run", help="run one experiment")
    _add_experiment_flags(run_p, with_mode=True)
    cmp_p = sub.add_parser("compare", help="gaussian baseline vs unit-norm")
    _add_experiment_flags(cmp_p, with_mode=False)
    gen_p = sub.add_parser("gen", help="write a synthetic series to CSV")
    gen_p.add_argument("--synthetic", choices=SYNTHETIC_KINDS, required=True)
    gen_p.add_argument("--n", type=int, default=500)
    gen_p.add_argument("--amplitude", type=float, default=1.0)
    gen_p.add_argument("--period", type=float, default=20.0)
    gen_p.add_argument("--phase", type=float, default=0.0)
    gen_p.add_argument("--slope", type=float, default=1.0)
    gen_p.add_argument("--intercept", type=float, default=0.0)
    gen_p.add_argument("--out", required=True, metavar="CSV", help="output file path")
    return p


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for f in dataclasses.fields(ExperimentConfig):
        flag_value = getattr(args, f.name, None)
        if flag_value is not None:
            values[f.name] = flag_value
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "gen":
            cfg = ExperimentConfig(
                synthetic=args.synthetic,
                n=args.n,
                amplitude=args.amplitude,
                period=args.period,
                phase=args.phase,
                slope=args.slope,
                intercept=args.intercept,
            )
            series = make_series(cfg)
            write_series_csv(series, args.out)
            print(f"wrote {len(series)} values to {args.out}")
            return 0
        cfg = build_config(args)
        if args.verb == "run":
            report = run_experiment(cfg)
            print(
                f"{report.trace.series_name}: nmse={report.nmse:.6g} "
                f"final_dict_size={report.final_dict_size} steps={len(report.trace)}"
            )
            if cfg.out_dir:
                print(f"reports written to {cfg.out_dir}")
            return 0
        comparison = run_comparison(cfg)
        b, u = comparison.baseline, comparison.unitnorm
        print(
            f"baseline: nmse={b.nmse:.6g} final_dict_size={b.final_dict_size}\n"
            f"unitnorm: nmse={u.nmse:.6g} final_dict_size={u.final_dict_size}\n"
            f"dict_size_ratio={comparison.dict_size_ratio:.4g} "
            f"nmse_delta={comparison.nmse_delta:.6g}"
        )
        if cfg.out_dir:
            print(f"reports written to {cfg.out_dir}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IngestionError as exc:
        print(f"ingestion error: {exc}", file=sys.stderr)
        return 3
    except (NumericFault, UndefinedMetric) as exc:
        print(f"numeric fault: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 5


def entry() -> None:
    raise SystemExit(main())
