from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from typing import List, Optional, Tuple

import pandas as pd

from .audit import AuditResult, audit_null_condition, audit_saturation, audit_theorems
from .config import AuditConfig, SearchConfig
from .correlations import classical_correlation, physical_c1_range
from .errors import CoherenceBoundsError, ConfigurationError, InvalidStateError, StateFileError
from .fixtures import FIGURE2_C2, FIGURE2_C3, named_state
from .measurement import qubit_projector_pair
from .miac import BoundReport, bound_report, max_extra_miac, max_extra_miatc
from .service.reproduction import examples_table, figure2_checks, figure2_sweep
from .settings import Settings, setup_logging
from .statefile import dumps_state, load_state, save_state


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _parse_dims(arg: str) -> Tuple[int, int]:
    try:
        a, b = (int(x) for x in arg.lower().split("x"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected dims like 2x2, got {arg!r}") from exc
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError(f"dimensions must be positive, got {arg!r}")
    return a, b


def _print_frame(df: pd.DataFrame) -> None:
    with pd.option_context("display.max_rows", None, "display.width", 200, "display.precision", 12):
        print(df.to_string(index=False))


def _print_report(title: str, report: BoundReport) -> None:
    print(title)
    _print_frame(pd.DataFrame(report.as_rows(), columns=["quantity", "value"]))


def cmd_examples() -> int:
    table = examples_table()
    _print_frame(table)
    failed = int((~table["ok"]).sum())
    if failed:
        logger.error("%d example value(s) outside tolerance", failed)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_figure2(out_path: str, c1_min: float, c1_max: float, steps: int, spot_checks: int) -> int:
    sweep = figure2_sweep(c1_min, c1_max, steps)
    sweep.to_csv(out_path, index=False)
    print(f"Wrote {len(sweep)} rows to {out_path}")
    failures = figure2_checks(sweep, spot_checks)
    if len(failures):
        _print_frame(failures)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_compute(
    state_path: str, theta: Optional[float], phi: Optional[float], maximize: bool
) -> int:
    s = load_state(state_path)
    if maximize:
        base = classical_correlation(s)
        _print_report("maximal extra MIAC", max_extra_miac(s, base=base))
        _print_report("maximal extra MIATC", max_extra_miatc(s, base=base))
        return EXIT_OK
    if theta is None or phi is None:
        raise ConfigurationError("compute needs --theta and --phi, or --maximize")
    if s.dim_a != 2:
        raise ConfigurationError("--theta/--phi describe a qubit measurement; use --maximize for d_A > 2")
    report = bound_report(s, qubit_projector_pair(theta, phi), (theta, phi))
    _print_report("bound report", report)
    return EXIT_OK


def cmd_audit(config: AuditConfig) -> int:
    results: List[AuditResult] = [
        audit_theorems(config),
        audit_saturation(config),
        audit_null_condition(config),
    ]
    _print_frame(pd.DataFrame([r.summary() for r in results]))
    for result in results:
        for v in result.violations[:10]:
            print(f"{result.name}: {v.check} state={v.state} measurement={v.measurement} gap={v.gap:.3e}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


def cmd_emit_state(name: str, out_path: Optional[str]) -> int:
    state = named_state(name)
    if out_path:
        save_state(state, out_path)
    else:
        sys.stdout.write(dumps_state(state))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherence-bounds",
        description="Measurement-induced coherence on B versus classical correlation: "
        "worked examples, Bell-diagonal sweeps and randomized bound audits.",
    )
    parser.add_argument("--log-level", dest="log_level", default=None, help="Logging level (env COHB_LOG_LEVEL)")
    parser.add_argument(
        "--log-format", dest="log_format", choices=["json", "plain"], default=None, help="Log record format"
    )
    parser.add_argument("--n-jobs", dest="n_jobs", type=int, default=None, help="Worker processes for audits")
    parser.add_argument(
        "--emit-state",
        dest="emit_state",
        default=None,
        help="Write a built-in state file: ex1, ex2, ex3 or bell:c1,c2,c3",
    )
    parser.add_argument("--out", dest="out", default=None, help="Output path for --emit-state (default stdout)")

    sub = parser.add_subparsers(dest="command")

    sub.add_parser("examples", help="Reproduce the worked examples against their closed forms")

    lo, hi = physical_c1_range(FIGURE2_C2, FIGURE2_C3)
    fig = sub.add_parser("figure2", help="Write the Bell-diagonal c1 sweep as CSV")
    fig.add_argument("--out", dest="out_path", required=True, help="CSV output path")
    fig.add_argument("--c1-min", dest="c1_min", type=float, default=lo)
    fig.add_argument("--c1-max", dest="c1_max", type=float, default=hi)
    fig.add_argument("--steps", dest="steps", type=int, default=100)
    fig.add_argument(
        "--spot-checks", dest="spot_checks", type=int, default=10,
        help="Rows whose closed-form J and D are checked against the search",
    )

    comp = sub.add_parser("compute", help="Bound report for a state file")
    comp.add_argument("--state", dest="state_path", required=True, help="State file (JSON)")
    comp.add_argument("--theta", dest="theta", type=float, default=None)
    comp.add_argument("--phi", dest="phi", type=float, default=None)
    comp.add_argument("--maximize", dest="maximize", action="store_true", help="Maximize both extras")

    aud = sub.add_parser("audit", help="Randomized checks of the coherence bounds")
    defaults = AuditConfig()
    aud.add_argument("--n-states", dest="n_states", type=int, default=defaults.n_states)
    aud.add_argument("--n-measurements", dest="n_measurements", type=int, default=defaults.n_measurements)
    aud.add_argument("--n-pure", dest="n_pure", type=int, default=defaults.n_pure)
    aud.add_argument("--n-null", dest="n_null", type=int, default=defaults.n_null)
    aud.add_argument("--seed", dest="seed", type=int, default=defaults.seed)
    aud.add_argument("--dims", dest="dims", type=_parse_dims, default=(defaults.dim_a, defaults.dim_b))
    aud.add_argument(
        "--tolerance", dest="tolerance", type=float, default=None,
        help="Override every magnitude tolerance (0 turns round-off into violations)",
    )
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = Settings.from_env(args.log_level, args.log_format, args.n_jobs)
    except ValueError as exc:
        parser.error(str(exc))
    setup_logging(settings)

    if args.emit_state is None and args.command is None:
        parser.error("a command or --emit-state is required")
    if args.command == "compute" and not args.maximize and (args.theta is None or args.phi is None):
        parser.error("compute needs --theta and --phi, or --maximize")

    try:
        if args.emit_state is not None:
            return cmd_emit_state(args.emit_state, args.out)
        if args.command == "examples":
            return cmd_examples()
        if args.command == "figure2":
            return cmd_figure2(args.out_path, args.c1_min, args.c1_max, args.steps, args.spot_checks)
        if args.command == "compute":
            return cmd_compute(args.state_path, args.theta, args.phi, args.maximize)
        config = AuditConfig(
            n_states=args.n_states,
            n_measurements=args.n_measurements,
            n_pure=args.n_pure,
            n_null=args.n_null,
            dim_a=args.dims[0],
            dim_b=args.dims[1],
            seed=args.seed,
            n_jobs=settings.n_jobs,
            search=SearchConfig(),
        )
        if args.tolerance is not None:
            config.tolerances = replace(
                config.tolerances,
                optimizer=args.tolerance,
                null_condition=args.tolerance,
                saturation=args.tolerance,
            )
        return cmd_audit(config)
    except (StateFileError, InvalidStateError, ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoherenceBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
