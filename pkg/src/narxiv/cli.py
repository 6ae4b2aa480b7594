"""Command-line front end.

Subcommands wire the library into reproducible runs:

  generate duffing|prbs   synthesize a dataset CSV
  select                  rank candidate terms and choose a structure
  estimate                point + interval parameters for a structure
  validate                one-step-ahead or free-run predictions + RMSE
  report                  consolidate RMSE summaries across runs

Every run writes a manifest (resolved flags, versions, input hashes) next
to its outputs; identical invocations produce byte-identical files.  Exit
status: 0 success, 1 usage error, 2 numerical failure (the module error is
printed verbatim).
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import backend_name
from .errors import NarxivError
from .estimation import WideningPolicy, estimate
from .linalg import IntervalVector
from .metrics import rmse_interval, rmse_point
from .model import (
    Dataset,
    candidate_terms,
    free_run,
    free_run_interval,
    one_step_ahead,
    one_step_ahead_interval,
    read_dataset_csv,
    read_model_file,
    write_dataset_csv,
    write_model_file,
)
from .selection import select_structure
from .signals import duffing_ueda_simulate, prbs

USAGE_EXIT = 1
NUMERICAL_EXIT = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage problems, not argparse's 2
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return repr(float(x))


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(path: Path, command: str, options: dict, inputs: dict[str, Path]) -> None:
    lines = [
        f"command={command}",
        f"kernel_backend={backend_name()}",
        f"narxiv_version={__version__}",
        f"numpy_version={np.__version__}",
        f"python_version={sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}",
    ]
    seed_env = os.environ.get("NARXIV_SEED")
    if seed_env is not None:
        lines.append(f"env_narxiv_seed={seed_env}")
    for key in sorted(options):
        lines.append(f"option_{key}={options[key]}")
    for name in sorted(inputs):
        lines.append(f"sha256_{name}={_sha256(inputs[name])}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    p = Path(path)
    if not p.is_file():
        raise _UsageError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for raw in p.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise _UsageError(f"bad config line (expected key=value): {raw!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise _UsageError(f"--{name.replace('_', '-')} is required")


def _input_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise _UsageError(f"input file not found: {path}")
    return p


def _out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _default_seed() -> int:
    env = os.environ.get("NARXIV_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise _UsageError(f"NARXIV_SEED must be an integer, got {env!r}") from exc
    return 1


# -- subcommand implementations ---------------------------------------------


def _cmd_generate(args) -> int:
    _require(args, "out")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.source == "duffing":
        data = duffing_ueda_simulate(
            k=args.k,
            mu=args.mu,
            amplitude=args.A,
            dt=args.dt,
            n_periods=args.periods,
            samples_per_period=args.spp,
            transient_periods=args.transient,
            y0=args.y0,
            v0=args.v0,
            name=out.stem,
        )
        options = {
            "A": _fmt(args.A), "k": _fmt(args.k), "mu": _fmt(args.mu),
            "dt": "auto" if args.dt is None else _fmt(args.dt),
            "periods": args.periods, "spp": args.spp, "transient": args.transient,
            "y0": _fmt(args.y0), "v0": _fmt(args.v0), "out": args.out,
        }
    else:
        seed = args.seed if args.seed is not None else _default_seed()
        u = prbs(
            args.length,
            register_bits=args.bits,
            seed=seed,
            hold_samples=args.hold,
            low=args.low,
            high=args.high,
        )
        # excitation-only record: the output column stays zero until some
        # system (real or simulated) responds to u
        data = Dataset(u, np.zeros_like(u), name=out.stem)
        options = {
            "length": args.length, "bits": args.bits, "seed": seed,
            "hold": args.hold, "low": _fmt(args.low), "high": _fmt(args.high),
            "out": args.out,
        }
    write_dataset_csv(out, data)
    _write_manifest(Path(str(out) + ".manifest"), f"generate {args.source}", options, {})
    print(f"wrote {out} ({len(data)} samples)")
    return 0


def _cmd_select(args) -> int:
    _require(args, "data", "l", "ny", "nu", "d")
    data_path = _input_file(args.data)
    out = _out_dir(args.out)
    data = read_dataset_csv(data_path)
    candidates = candidate_terms(l=args.l, n_y=args.ny, n_u=args.nu, d=args.d)
    report = select_structure(candidates, data, d=args.d, max_terms=args.max_terms)
    report.save_err_csv(out / "selection_report.csv")
    report.save_aic_csv(out / "aic_trace.csv")
    write_model_file(out / "structure.model", report.chosen, None)
    _write_manifest(
        out / "manifest.txt",
        "select",
        {
            "data": args.data, "l": args.l, "ny": args.ny, "nu": args.nu,
            "d": args.d, "max_terms": args.max_terms, "out": args.out,
        },
        {"data": data_path},
    )
    print(
        f"ranked {len(report.ranked)} terms, chose {len(report.chosen)} "
        f"(aic minimum{' / perfect fit' if report.perfect_fit else ''})"
    )
    print(f"wrote {out / 'structure.model'}")
    return 0


def _cmd_estimate(args) -> int:
    _require(args, "data", "structure")
    data_path = _input_file(args.data)
    structure_path = _input_file(args.structure)
    out = _out_dir(args.out)
    data = read_dataset_csv(data_path)
    structure, _ = read_model_file(structure_path)
    try:
        widening = WideningPolicy.parse(args.widen)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    result = estimate(data, structure, widening)
    write_model_file(out / "model.model", structure, result.interval_params)
    with open(out / "params_point.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("term,value\n")
        for term, value in zip(structure.terms, result.point_params):
            fh.write(f"{term},{_fmt(value)}\n")
    _write_manifest(
        out / "manifest.txt",
        "estimate",
        {
            "data": args.data, "structure": args.structure,
            "widen": widening.describe(), "out": args.out,
        },
        {"data": data_path, "structure": structure_path},
    )
    print(f"estimated {len(structure)} parameters; rss={_fmt(result.residual_rss)}")
    print(f"wrote {out / 'model.model'}")
    return 0


def _rmse_summary_row(
    case: str,
    mode: str,
    interval: bool,
    rmse: float | None = None,
    rmse_lo: float | None = None,
    rmse_hi: float | None = None,
    diverged_at: int | None = None,
    width_cap: float | None = None,
) -> str:
    return ",".join(
        [
            case,
            mode,
            "1" if interval else "0",
            "" if rmse is None else _fmt(rmse),
            "" if rmse_lo is None else _fmt(rmse_lo),
            "" if rmse_hi is None else _fmt(rmse_hi),
            "" if diverged_at is None else str(diverged_at),
            "" if width_cap is None else _fmt(width_cap),
        ]
    )


_SUMMARY_HEADER = "case,mode,interval,rmse,rmse_lo,rmse_hi,diverged_at_step,width_cap"


def _cmd_validate(args) -> int:
    _require(args, "data", "model")
    data_path = _input_file(args.data)
    model_path = _input_file(args.model)
    out = _out_dir(args.out)
    data = read_dataset_csv(data_path)
    structure, coefficients = read_model_file(model_path)
    if coefficients is None:
        raise _UsageError(f"{args.model} is structure-only; validate needs coefficients")
    lag = structure.max_lag
    case = data.name
    pred_path = out / "predictions.csv"
    rows: list[str] = []

    if args.mode == "osa" and not args.interval:
        params = coefficients.mid()
        predictions = one_step_ahead(structure, params, data)
        _write_predictions_point(pred_path, data, predictions, start=lag)
        value = rmse_point(data.y[lag:], predictions)
        rows.append(_rmse_summary_row(case, "osa", False, rmse=value))
    elif args.mode == "osa":
        u_iv = IntervalVector.from_points(data.u)
        y_iv = IntervalVector.from_points(data.y)
        predictions = one_step_ahead_interval(structure, coefficients, u_iv, y_iv)
        _write_predictions_interval(pred_path, data, predictions, start=lag)
        value = rmse_interval(IntervalVector.from_points(data.y[lag:]), predictions)
        rows.append(
            _rmse_summary_row(case, "osa", True, rmse_lo=value.lo, rmse_hi=value.hi)
        )
    elif args.mode == "free-run" and not args.interval:
        params = coefficients.mid()
        trajectory = free_run(structure, params, data.u, data.y[:lag])
        _write_predictions_point(pred_path, data, trajectory[lag:], start=lag)
        value = rmse_point(data.y[lag:], trajectory[lag:])
        rows.append(_rmse_summary_row(case, "free-run", False, rmse=value))
    else:
        cap = args.width_cap
        if cap is None:
            cap = 10.0 * float(data.y.max() - data.y.min())
        u_iv = IntervalVector.from_points(data.u)
        trajectory, capped_at = free_run_interval(
            structure,
            coefficients,
            u_iv,
            IntervalVector.from_points(data.y[:lag]),
            width_cap=cap,
        )
        tail = trajectory[lag:]
        _write_predictions_interval(pred_path, data, tail, start=lag)
        if capped_at is None:
            value = rmse_interval(
                IntervalVector.from_points(data.y[lag : len(trajectory)]), tail
            )
            rows.append(
                _rmse_summary_row(
                    case, "free-run", True,
                    rmse_lo=value.lo, rmse_hi=value.hi, width_cap=cap,
                )
            )
        else:
            rows.append(
                _rmse_summary_row(
                    case, "free-run", True, diverged_at=capped_at, width_cap=cap
                )
            )
            print(
                f"interval free run hit the width cap ({_fmt(cap)}) at step "
                f"{capped_at}; widths grow without bound"
            )

    summary = out / "rmse_summary.csv"
    summary.write_text(_SUMMARY_HEADER + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
    _write_manifest(
        out / "manifest.txt",
        "validate",
        {
            "data": args.data, "model": args.model, "mode": args.mode,
            "interval": int(bool(args.interval)),
            "width_cap": "auto" if args.width_cap is None else _fmt(args.width_cap),
            "out": args.out,
        },
        {"data": data_path, "model": model_path},
    )
    print(f"wrote {summary}")
    return 0


def _write_predictions_point(path: Path, data: Dataset, predictions, start: int) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,y,yhat\n")
        for offset, value in enumerate(predictions):
            k = start + offset
            fh.write(f"{k},{_fmt(data.y[k])},{_fmt(value)}\n")


def _write_predictions_interval(
    path: Path, data: Dataset, predictions: IntervalVector, start: int
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,y,yhat_lo,yhat_hi\n")
        for offset in range(len(predictions)):
            k = start + offset
            fh.write(
                f"{k},{_fmt(data.y[k])},"
                f"{_fmt(predictions.lo[offset])},{_fmt(predictions.hi[offset])}\n"
            )


def _cmd_report(args) -> int:
    _require(args, "runs", "out")
    runs = Path(args.runs)
    if not runs.is_dir():
        raise _UsageError(f"runs directory not found: {args.runs}")
    summaries = sorted(runs.rglob("rmse_summary.csv"))
    if not summaries:
        raise _UsageError(f"no rmse_summary.csv files under {args.runs}")
    cases: dict[str, dict[str, str]] = {}
    for summary in summaries:
        lines = summary.read_text(encoding="utf-8").splitlines()
        for line in lines[1:]:
            parts = line.split(",")
            if len(parts) < 8:
                continue
            case, mode, interval, value, lo, hi = parts[:6]
            slot = cases.setdefault(case, {})
            if mode == "free-run" and interval == "0" and value:
                slot["rmse_free_run"] = value
            elif mode == "osa" and interval == "0" and value:
                slot["rmse_osa"] = value
            elif mode == "osa" and interval == "1" and lo and hi:
                slot["rmse_interval_lo"] = lo
                slot["rmse_interval_hi"] = hi
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("case,rmse_free_run,rmse_osa,rmse_interval_lo,rmse_interval_hi\n")
        for case in sorted(cases):
            slot = cases[case]
            fh.write(
                ",".join(
                    [
                        case,
                        slot.get("rmse_free_run", ""),
                        slot.get("rmse_osa", ""),
                        slot.get("rmse_interval_lo", ""),
                        slot.get("rmse_interval_hi", ""),
                    ]
                )
                + "\n"
            )
    _write_manifest(
        Path(str(out) + ".manifest"), "report",
        {"runs": args.runs, "out": args.out},
        {f"summary{i}": s for i, s in enumerate(summaries)},
    )
    print(f"wrote {out} ({len(cases)} cases)")
    return 0


# -- argument wiring ---------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="narxiv",
        description=(
            "Interval-verified NARX polynomial system identification. "
            "Every run writes a manifest next to its outputs; identical "
            "invocations produce byte-identical files. Exit status: 0 success, "
            "1 usage error, 2 numerical failure (module error printed verbatim)."
        ),
    )
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command")

    gen = sub.add_parser("generate", help="synthesize a dataset CSV")
    gen_sub = gen.add_subparsers(dest="source")
    duff = gen_sub.add_parser("duffing", help="forced oscillator ground truth")
    duff.add_argument("--A", type=float, default=1.2, help="forcing amplitude")
    duff.add_argument("--k", type=float, default=0.1, help="damping coefficient")
    duff.add_argument("--mu", type=float, default=1.0, help="cubic stiffness")
    duff.add_argument("--dt", type=float, default=None, help="integration step")
    duff.add_argument("--periods", type=int, default=40, help="recorded forcing periods")
    duff.add_argument("--spp", type=int, default=20, help="samples per period")
    duff.add_argument("--transient", type=int, default=50, help="discarded periods")
    duff.add_argument("--y0", type=float, default=0.0)
    duff.add_argument("--v0", type=float, default=0.0)
    duff.add_argument("--out", help="output dataset CSV")
    prbs_p = gen_sub.add_parser("prbs", help="maximal-length binary excitation")
    prbs_p.add_argument("--length", type=int, default=1000)
    prbs_p.add_argument("--bits", type=int, default=9, help="register size (2..16)")
    prbs_p.add_argument("--seed", type=int, default=None, help="register seed (nonzero)")
    prbs_p.add_argument("--hold", type=int, default=1, help="samples per bit")
    prbs_p.add_argument("--low", type=float, default=-1.0)
    prbs_p.add_argument("--high", type=float, default=1.0)
    prbs_p.add_argument("--out", help="output dataset CSV")

    sel = sub.add_parser("select", help="rank terms by ERR and size by AIC")
    sel.add_argument("--data", help="dataset CSV")
    sel.add_argument("--l", type=int, help="maximum polynomial degree")
    sel.add_argument("--ny", type=int, help="maximum output lag")
    sel.add_argument("--nu", type=int, help="number of input lags")
    sel.add_argument("--d", type=int, help="input dead time")
    sel.add_argument("--max-terms", type=int, default=None)
    sel.add_argument("--out", default=".", help="output directory")

    est = sub.add_parser("estimate", help="point + interval least squares")
    est.add_argument("--data", help="dataset CSV")
    est.add_argument("--structure", help="structure or model file")
    est.add_argument("--widen", default="degenerate", help="degenerate | abs:R | rel:R")
    est.add_argument("--out", default=".", help="output directory")

    val = sub.add_parser("validate", help="simulate a model against a dataset")
    val.add_argument("--data", help="dataset CSV")
    val.add_argument("--model", help="model file with coefficients")
    val.add_argument("--mode", choices=("osa", "free-run"), default="osa")
    val.add_argument("--interval", action="store_true", help="interval simulation")
    val.add_argument("--width-cap", type=float, default=None,
                     help="free-run interval width cap (default 10x output range)")
    val.add_argument("--out", default=".", help="output directory")

    rep = sub.add_parser("report", help="consolidate RMSE summaries")
    rep.add_argument("--runs", help="directory scanned for rmse_summary.csv")
    rep.add_argument("--out", help="consolidated CSV path")

    return parser


_HANDLERS = {
    "generate": _cmd_generate,
    "select": _cmd_select,
    "estimate": _cmd_estimate,
    "validate": _cmd_validate,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        # pre-scan for --config so its values can fill unset flags
        config: dict[str, str] = {}
        if "--config" in argv:
            idx = argv.index("--config")
            if idx + 1 >= len(argv):
                raise _UsageError("--config needs a file argument")
            config = _load_config(argv[idx + 1])
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required (see --help)")
        if args.command == "generate" and getattr(args, "source", None) is None:
            raise _UsageError("generate needs a source: duffing or prbs")
        for key, value in config.items():
            if hasattr(args, key) and _flag_not_given(key, argv):
                setattr(args, key, _coerce_like(getattr(args, key), value))
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except NarxivError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT


def _flag_not_given(key: str, argv: list[str]) -> bool:
    flag = "--" + key.replace("_", "-")
    return flag not in argv


def _coerce_like(current, text: str):
    if isinstance(current, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(current, int):
        return int(text)
    if isinstance(current, float):
        return float(text)
    if current is None:
        for cast in (int, float):
            try:
                return cast(text)
            except ValueError:
                pass
    return text


if __name__ == "__main__":
    sys.exit(main())
