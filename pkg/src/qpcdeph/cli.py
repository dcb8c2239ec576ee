"""Command-line interface: one subcommand per scenario, CSV out.

Exit codes: 0 on success (CSV written), 2 on any configuration or
validation problem with a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

from .scenarios import SCENARIO_TAGS, build_config, run

_HELP = {
    "fig2a": "initial-state population for several dephasing strengths",
    "fig2b": "full trajectory in the experimental regime with decay summary",
    "zeno-sweep": "short-time trapping versus measurement strength",
    "scaling-table": "dephasing time versus detector distance and bias",
    "counting-demo": "counting statistics next to the reduced dynamics",
    "rates-report": "one-row summary of all detector-derived rates",
    "evolve": "raw reduced-state trajectory for explicit parameters",
    "counting": "raw count-resolved run for explicit parameters",
}


def _float_or_inf(text: str) -> float:
    if text.strip().lower() in ("inf", "infinite"):
        return math.inf
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpcdeph",
        description="Detector back-action on a double-dot singlet qubit: "
        "rates, master-equation trajectories and counting statistics.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="scenario")
    for tag in SCENARIO_TAGS:
        sp = sub.add_parser(tag, help=_HELP[tag])
        sp.add_argument("config", nargs="?", default=None, help="key = value config file")
        sp.add_argument("--eps", type=float, default=None, help="detuning in ueV")
        sp.add_argument("--tc", type=float, default=None, help="tunnel coupling in ueV")
        sp.add_argument("--gamma-d", type=float, default=None, help="dephasing rate in 1/ns")
        sp.add_argument("--t-final", type=float, default=None, help="time horizon in ns")
        sp.add_argument("--points", type=int, default=None, help="output grid points")
        sp.add_argument("--out", default=None, help="output CSV path")
        sp.add_argument("--n-max", type=int, default=None, help="count truncation bound")
        sp.add_argument("--dt", type=float, default=None, help="integration grid step in ns")
        sp.add_argument(
            "--t2-env", type=_float_or_inf, default=None, help="environment T2 in ns, or inf"
        )
    return parser


def cli_main(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return 0 if exc.code in (0, None) else 2
    try:
        cfg = build_config(
            args.scenario,
            args.config,
            detuning=args.eps,
            tunnel_coupling=args.tc,
            gamma_d=args.gamma_d,
            t_final=args.t_final,
            points=args.points,
            output_path=args.out,
            n_max=args.n_max,
            dt=args.dt,
            t2_env=args.t2_env,
        )
        run(cfg)
    except Exception as exc:  # contract: never a traceback on bad input
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {cfg.output_path}")
    return 0


def main() -> None:
    raise SystemExit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
