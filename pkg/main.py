"""
Command-line entry point for the domain-wall partition function engine.

Subcommands:
    compute    evaluate one route (or all applicable routes) for a parameter set
    check      run a named cross-check suite over a seed range
    count      count domain-wall configurations
    enumerate  write every configuration of an N x N lattice as JSON lines
    sweep      evaluate a file of compute requests
    replay     re-run the cases of a saved report and compare bit for bit

Exit codes: 0 when everything passed, 1 when a check failed, 2 for invalid
input or usage.
"""
import os
import sys
import json
import logging
import argparse
from typing import Dict, List, Optional

from dotenv import load_dotenv

from modules.config import DEFAULT_LOG_LEVEL, get_config
from modules.engines import enumeration_oracle
from modules.errors import DWPFError, UsageError
from modules.param_io import generate_params, parse_params
from modules.report import CaseRecord, Report
from modules.route_dispatcher import ALL_METHODS, ROUTES, RouteDispatcher
from modules.suites import SUITES, replay_record, run_suite, run_sweep
from modules.validation import RULES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def setup_logging(verbose: bool = False, level: Optional[str] = None):
    """Set up logging configuration based on verbose flag."""
    if verbose:
        log_level = logging.DEBUG
    else:
        log_level = getattr(logging, (level or DEFAULT_LOG_LEVEL).upper(), logging.WARNING)

    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        force=True
    )


def parse_seeds(text: str) -> List[int]:
    """Seeds as 'a..b' (inclusive), a comma list, or a single integer."""
    try:
        if ".." in text:
            start, end = text.split("..", 1)
            first, last = int(start), int(end)
            if last < first:
                raise UsageError(f"empty seed range {text!r}")
            return list(range(first, last + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"seeds must look like 'a..b' or '1,2,3', got {text!r}")


def parse_tolerances(items: Optional[List[str]]) -> Dict[str, float]:
    """NAME=VALUE pairs from repeated --tol flags."""
    overrides = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            overrides[name.strip().replace("-", "_")] = float(value)
        except ValueError:
            raise UsageError(f"--tol {name}: {value!r} is not a number")
    return overrides


def _format_value(value: complex) -> Dict[str, float]:
    return {"re": value.real, "im": value.imag}


def _write_report(report: Report, args) -> None:
    if getattr(args, "output", None):
        report.save_jsonl(args.output)
    if getattr(args, "csv", None):
        report.save_csv(args.csv)


def _load_params(args):
    if args.params:
        with open(args.params, "r", encoding="utf-8") as f:
            return parse_params(f.read())
    if args.seed is None or args.n is None:
        raise UsageError("compute needs --params FILE, or --seed and --n")
    return generate_params(args.seed, args.n, RULES[args.rule], restricted=args.restricted)


def cmd_compute(args) -> int:
    params = _load_params(args)
    dispatcher = RouteDispatcher()
    if args.method == ALL_METHODS:
        results = dispatcher.compute_all(params)
        for method, value in results.items():
            print(json.dumps({"method": method, **_format_value(value)}))
        spread = dispatcher.spread(results)
        print(json.dumps({"routes": len(results), "max_relative_difference": spread}))
        return EXIT_OK
    value = dispatcher.compute(args.method, params)
    print(json.dumps({"method": args.method, "n": params.n, **_format_value(value)}))
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = get_config()
    tolerances = cfg.tolerances(parse_tolerances(args.tol))
    threads = args.threads or cfg.threads
    report = run_suite(args.suite, parse_seeds(args.seeds), threads=threads,
                       tolerances=tolerances, record_timings=args.timings or cfg.record_timings)
    _write_report(report, args)
    stats = report.get_stats()
    print(json.dumps({"suite": args.suite, **stats}))
    for record in report.failures:
        print(json.dumps({"failed": record.case_id, "residual": record.residual,
                          "tolerance": record.tolerance, "error": record.error,
                          "inputs": record.inputs}))
    return report.exit_code()


def cmd_count(args) -> int:
    count = enumeration_oracle.count_configurations(args.n)
    result = {"n": args.n, "configurations": count}
    if args.two_enumeration:
        two = enumeration_oracle.two_enumeration(args.n)
        result.update(
            normalized=_format_value(two.normalized),
            weighted_count=_format_value(two.weighted_count),
            two_enumeration=two.two_enumeration,
        )
    print(json.dumps(result))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    written = 0
    directory = os.path.dirname(args.emit)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(args.emit, "w", encoding="utf-8") as f:
        for configuration in enumeration_oracle.enumerate_configurations(args.n):
            document = configuration.to_document()
            census = enumeration_oracle.vertex_census(configuration)
            document["census"] = {kind.name: count for kind, count in census.items()}
            f.write(json.dumps(document) + "\n")
            written += 1
    logger.info(f"Wrote {written} configurations to {args.emit}")
    print(json.dumps({"n": args.n, "configurations": written, "emit": args.emit}))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = get_config()
    requests = []
    with open(args.spec, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                requests.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise UsageError(f"{args.spec}:{number}: {e}")
    report = run_sweep(requests, threads=args.threads or cfg.threads,
                       tolerances=cfg.tolerances(parse_tolerances(args.tol)),
                       record_timings=args.timings or cfg.record_timings)
    _write_report(report, args)
    for record in report.records:
        print(json.dumps({"case_id": record.case_id, "method": record.method,
                          "re": record.value_re, "im": record.value_im,
                          "residual": record.residual, "error": record.error}))
    return report.exit_code()


def _same(a: CaseRecord, b: CaseRecord) -> bool:
    return (a.value_re, a.value_im, a.residual, a.comparators, a.error) == \
        (b.value_re, b.value_im, b.residual, b.comparators, b.error)


def cmd_replay(args) -> int:
    report = Report.load_jsonl(args.report)
    mismatches = []
    for record in report.records:
        again = replay_record(record)
        if not _same(record, again):
            mismatches.append(record.case_id)
            logger.error(f"❌ {record.case_id} does not reproduce")
    print(json.dumps({"replayed": len(report), "mismatches": mismatches}))
    return EXIT_OK if not mismatches else EXIT_FAILURE


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default from DWPF_THREADS)")
    parser.add_argument("--output", help="Write the report as JSON lines")
    parser.add_argument("--csv", help="Write the flat CSV table")
    parser.add_argument("--timings", action="store_true", help="Record elapsed milliseconds per case")
    parser.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help="Override a suite tolerance, e.g. --tol routes=1e-9")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Domain-wall partition function engine")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="Evaluate the partition function")
    compute.add_argument("--method", required=True, choices=[*ROUTES, ALL_METHODS])
    compute.add_argument("--params", help="Parameter document (JSON)")
    compute.add_argument("--seed", type=int, help="Generate parameters from this seed")
    compute.add_argument("--n", type=int, help="Lattice size for generated parameters")
    compute.add_argument("--rule", default="general", choices=list(RULES))
    compute.add_argument("--restricted", action="store_true", help="Generate with zero rapidities")
    compute.set_defaults(handler=cmd_compute)

    check = sub.add_parser("check", help="Run a cross-check suite")
    check.add_argument("--suite", required=True, choices=list(SUITES))
    check.add_argument("--seeds", default="1..20", help="Seed range a..b (default 1..20)")
    _add_run_options(check)
    check.set_defaults(handler=cmd_check)

    count = sub.add_parser("count", help="Count domain-wall configurations")
    count.add_argument("--n", type=int, required=True)
    count.add_argument("--two-enumeration", action="store_true", help="Also report the 2-enumeration point")
    count.set_defaults(handler=cmd_count)

    enumerate_ = sub.add_parser("enumerate", help="Write every configuration as JSON lines")
    enumerate_.add_argument("--n", type=int, required=True)
    enumerate_.add_argument("--emit", required=True, help="Output file")
    enumerate_.set_defaults(handler=cmd_enumerate)

    sweep = sub.add_parser("sweep", help="Evaluate a file of compute requests (JSON lines)")
    sweep.add_argument("--spec", required=True)
    _add_run_options(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    replay = sub.add_parser("replay", help="Re-run a saved report")
    replay.add_argument("--report", required=True)
    replay.set_defaults(handler=cmd_replay)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    load_dotenv()
    setup_logging(args.verbose, os.getenv("LOG_LEVEL"))
    try:
        return args.handler(args)
    except (DWPFError, ValueError, OSError) as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
