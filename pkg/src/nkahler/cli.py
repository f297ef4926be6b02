"""Command-line driver: ``nkahler-verify --suite all --seed 0``.

Every flag can also be set through an environment variable named
``NKAHLER_<FLAG>`` (upper case, dashes as underscores, e.g.
``NKAHLER_FD_STEP=2e-5``); explicit flags win over the environment.

Exit status: 0 when every check passes, 1 when any check fails, 2 on a usage
or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .suites import SUITES, ConfigError, SuiteConfig, SuiteReport, list_suites, run_suites

ENV_PREFIX = "NKAHLER_"

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nkahler-verify", description="Run the numerical verification suites.")
    p.add_argument("--suite", default=_env("suite", "all"), help=f"one of {', '.join([*SUITES, 'all'])}")
    p.add_argument("--seed", type=int, default=_env("seed", 0))
    p.add_argument("--samples", type=int, default=_env("samples", None),
                   help="override every per-check sample count")
    p.add_argument("--tol-exact", type=float, default=_env("tol_exact", 1e-12))
    p.add_argument("--tol-alg", type=float, default=_env("tol_alg", 1e-10))
    p.add_argument("--tol-fd", type=float, default=_env("tol_fd", 1e-6))
    p.add_argument("--fd-step", type=float, default=_env("fd_step", 1e-5))
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default=_env("format", "text"))
    p.add_argument("--timing", action="store_true", help="append wall times (breaks bit-reproducibility)")
    p.add_argument("--list", action="store_true", help="list the suites and exit")
    return p


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    # argparse does not apply ``type`` to string defaults taken from the environment
    try:
        samples = None if args.samples in (None, "") else int(args.samples)
        return SuiteConfig(
            suite=str(args.suite),
            seed=int(args.seed),
            n_samples=samples,
            tol_exact=float(args.tol_exact),
            tol_alg=float(args.tol_alg),
            tol_fd=float(args.tol_fd),
            fd_step=float(args.fd_step),
            fmt=str(args.fmt),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def format_text(reports: list[SuiteReport], timing: bool = False) -> str:
    lines = []
    for rep in reports:
        lines.append(f"suite {rep.suite}: {'PASS' if rep.passed else 'FAIL'}")
        for c in rep.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"  {status}  {c.name:<40s} residual={c.residual:.6e}  "
                f"threshold {c.op} {c.threshold:.1e}  samples={c.samples}"
            )
        for k, v in rep.constants.items():
            lines.append(f"  const {k} = {v:.15g}")
        if timing:
            lines.append(f"  wall_time = {rep.wall_time:.3f} s")
    overall = all(r.passed for r in reports)
    lines.append(f"overall: {'PASS' if overall else 'FAIL'}")
    return "\n".join(lines)


def format_json(cfg: SuiteConfig, reports: list[SuiteReport], timing: bool = False) -> str:
    doc = {
        "config": {
            "suite": cfg.suite, "seed": cfg.seed, "samples": cfg.n_samples,
            "tol_exact": cfg.tol_exact, "tol_alg": cfg.tol_alg, "tol_fd": cfg.tol_fd,
            "fd_step": cfg.fd_step,
        },
        "pass": all(r.passed for r in reports),
        "suites": [
            {
                "suite": r.suite,
                "pass": r.passed,
                "checks": [
                    {"name": c.name, "residual": c.residual, "threshold": c.threshold,
                     "op": c.op, "samples": c.samples, "pass": c.passed}
                    for c in r.checks
                ],
                "constants": r.constants,
                **({"wall_time": r.wall_time} if timing else {}),
            }
            for r in reports
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def run(cfg: SuiteConfig, timing: bool = False) -> tuple[list[SuiteReport], int, str]:
    reports = run_suites(cfg)
    ok = all(r.passed for r in reports)
    body = format_json(cfg, reports, timing) if cfg.fmt == "json" else format_text(reports, timing)
    return reports, (EXIT_PASS if ok else EXIT_FAIL), body


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.list:
            print(list_suites())
            return EXIT_PASS
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"nkahler-verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _, code, body = run(cfg, timing=args.timing)
    print(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
