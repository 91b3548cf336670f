"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
Results go to stdout (or --out); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import coherent, finite, oracle, validation

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    samples: int | None = None
    workers: int = 1
    output_format: str | None = None
    output_path: str = "-"

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.samples is not None and self.samples < 0:
            raise UsageError("--samples must be >= 0")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")

    def samples_or(self, default: int) -> int:
        return default if self.samples is None else self.samples


def fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, complex):
        return f"{fmt(value.real)},{fmt(value.imag)}"
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return "0" if v == 0.0 else f"{v:.15g}"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return [_jsonable(value.real), _jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.15g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def render_table(rows: list[dict[str, Any]], header: Sequence[str], output_format: str) -> str:
    if output_format == "json":
        return json.dumps([{h: _jsonable(r[h]) for h in header} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([fmt(r[h]) for h in header])
    return buf.getvalue()


def render_record(record: dict[str, Any], output_format: str | None) -> str:
    """One result: ``name value`` lines by default, or a one-row table."""
    if output_format is None:
        return "".join(f"{key} {fmt(val)}\n" for key, val in record.items())
    if output_format == "json":
        return json.dumps({k: _jsonable(v) for k, v in record.items()}, indent=2) + "\n"
    return render_table([record], list(record), "csv")


def emit(text: str, config: RunConfig) -> None:
    if config.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def parse_complex(text: str) -> complex:
    """Parse ``"re,im"`` (or a bare real part)."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"malformed complex literal {text!r}; expected 're,im'")


def parse_pairs(text: str) -> list[tuple[int, int]]:
    """Parse ``"1:1,2:2"`` into [(1, 1), (2, 2)]."""
    pairs = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        try:
            k, l = (int(v) for v in item.split(":"))
        except ValueError:
            raise UsageError(f"malformed pair {item!r}; expected 'k:l'") from None
        if k < 1 or l < 1:
            raise UsageError(f"pair {item!r} needs k, l >= 1")
        pairs.append((k, l))
    if not pairs:
        raise UsageError("--pairs must list at least one k:l pair")
    return pairs


def _require_copies(k: int, l: int) -> None:
    if k < 1 or l < 1:
        raise UsageError("--k and --l must be >= 1")


def cmd_compare_pure(args, config: RunConfig) -> int:
    if not 0.0 <= args.x <= 1.0:
        raise UsageError("--x must lie in [0, 1]")
    _require_copies(args.k, args.l)
    p = finite.success_prob_pure(args.x, args.k, args.l)
    if config.output_format is None:
        emit(fmt(p) + "\n", config)
    else:
        emit(render_record({"x": args.x, "k": args.k, "l": args.l, "p_success": p}, config.output_format), config)
    return EXIT_OK


def cmd_compare_coherent(args, config: RunConfig) -> int:
    a1, a2 = parse_complex(args.alpha1), parse_complex(args.alpha2)
    _require_copies(args.k, args.l)
    pair = coherent.CoherentPair(a1, a2, args.k, args.l)
    record: dict[str, Any] = {"p_closed_form": coherent.success_prob_coherent(pair)}
    if args.simulate:
        result = coherent.comparator_network(pair)
        record["detector_amplitude"] = result.detector_amplitude
        record["p_network"] = result.success_prob
        record["abs_diff"] = abs(result.success_prob - record["p_closed_form"])
        samples = config.samples_or(0)
        if samples > 0:
            rng = np.random.default_rng(config.seed)
            counts = coherent.sample_photon_counts(result.detector_amplitude, samples, rng)
            record["samples"] = samples
            record["click_frequency"] = float(np.mean(counts >= 1))
    emit(render_record(record, config.output_format), config)
    return EXIT_OK


def cmd_average(args, config: RunConfig) -> int:
    if args.d < 2:
        raise UsageError("--d must be >= 2")
    _require_copies(args.k, args.l)
    exact = finite.avg_success(args.d, args.k, args.l)
    record: dict[str, Any] = {"p_avg_exact": exact}
    if args.mc:
        samples = config.samples_or(100_000)
        if samples < 1:
            raise UsageError("--mc needs --samples >= 1")
        est = oracle.mc_average_success(finite.EnsembleSpec(args.k, args.l, args.d), samples, config.seed, config.workers)
        record.update(p_avg_mc=est.mean, std_error=est.std_error, samples=est.samples, z=est.z_score(exact))
    emit(render_record(record, config.output_format), config)
    return EXIT_OK


FIGURE1_HEADER = ("k", "l", "x", "p_pure", "p_coherent")
FIGURE2_HEADER = ("d", "k", "p_avg")


def figure1_rows(pairs: Sequence[tuple[int, int]], grid_points: int) -> list[dict[str, Any]]:
    """Generic-state and coherent-state success on a shared squared-overlap axis."""
    x = np.linspace(0.0, 1.0, grid_points)
    rows = []
    for k, l in pairs:
        pure = finite.success_prob_pure(x, k, l)
        coh = coherent.success_prob_coherent_from_overlap(x, k, l)
        rows.extend({"k": k, "l": l, "x": float(xi), "p_pure": float(p), "p_coherent": float(c)}
                    for xi, p, c in zip(x, pure, coh))
    return rows


def figure2_rows(d_max: int, ks: Sequence[int]) -> list[dict[str, Any]]:
    return [{"d": d, "k": k, "p_avg": finite.avg_success(d, k, k)} for k in ks for d in range(2, d_max + 1)]


def cmd_figure1(args, config: RunConfig) -> int:
    if args.grid_points < 2:
        raise UsageError("--grid-points must be >= 2")
    rows = figure1_rows(parse_pairs(args.pairs), args.grid_points)
    emit(render_table(rows, FIGURE1_HEADER, config.output_format or "csv"), config)
    return EXIT_OK


def cmd_figure2(args, config: RunConfig) -> int:
    if args.d_max < 2:
        raise UsageError("--d-max must be >= 2")
    if not args.k or min(args.k) < 1:
        raise UsageError("--k values must be >= 1")
    rows = figure2_rows(args.d_max, args.k)
    emit(render_table(rows, FIGURE2_HEADER, config.output_format or "csv"), config)
    return EXIT_OK


def cmd_validate(args, config: RunConfig) -> int:
    samples = config.samples_or(100_000)
    if samples < 2:
        raise UsageError("validate needs --samples >= 2")
    results = validation.run_suite(args.suite, config.seed, samples, config.workers)
    ok = all(r.passed for r in results)
    if config.output_format == "json":
        text = json.dumps(
            {"suite": args.suite, "seed": config.seed, "samples": samples, "workers": config.workers,
             "passed": ok,
             "checks": [{"name": r.name, "passed": r.passed, "max_deviation": r.max_deviation,
                         "tolerance": r.tolerance, "detail": r.detail} for r in results]},
            indent=2) + "\n"
    elif config.output_format == "csv":
        text = render_table([r.__dict__ for r in results],
                            ("name", "passed", "max_deviation", "tolerance", "detail"), "csv")
    else:
        failed = sum(not r.passed for r in results)
        text = "".join(r.line() + "\n" for r in results)
        text += f"{len(results) - failed}/{len(results)} checks passed\n"
    emit(text, config)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="unsigned 64-bit RNG seed")
    common.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")
    common.add_argument("--workers", type=int, default=1, help="Monte Carlo worker threads")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default=None)
    common.add_argument("--out", dest="output_path", default="-", help="output file, '-' for stdout")

    parser = argparse.ArgumentParser(prog="qcompare", description="Unambiguous comparison of quantum states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare-pure", parents=[common], help="success for two unknown pure states")
    p.add_argument("--x", type=float, required=True, help="squared overlap |<psi1|psi2>|^2")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_compare_pure)

    p = sub.add_parser("compare-coherent", parents=[common], help="success for two coherent states")
    p.add_argument("--alpha1", required=True, help="complex amplitude as 're,im'")
    p.add_argument("--alpha2", required=True, help="complex amplitude as 're,im'")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--simulate", action="store_true", help="also run the beam-splitter network")
    p.set_defaults(func=cmd_compare_coherent)

    p = sub.add_parser("average", parents=[common], help="Haar-averaged success")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--mc", action="store_true", help="add a Monte Carlo estimate")
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("figure1", parents=[common], help="success vs squared overlap")
    p.add_argument("--pairs", default="1:1,2:2,3:3,4:4", help="comma-separated k:l pairs")
    p.add_argument("--grid-points", type=int, default=101)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("figure2", parents=[common], help="average success vs dimension")
    p.add_argument("--d-max", type=int, default=20)
    p.add_argument("--k", type=int, nargs="+", default=[1, 2, 3, 4])
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("validate", parents=[common], help="run invariant suites")
    p.add_argument("--suite", choices=("oracle", "lemma", "coherent", "all"), default="all")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = RunConfig(args.seed, args.samples, args.workers, args.output_format, args.output_path)
        return args.func(args, config)
    except UsageError as exc:
        print(f"qcompare {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qcompare {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
