"""Command-line client.

Subcommands build the same request models the HTTP service accepts and run
the shared handlers in-process, so a CLI invocation and the equivalent POST
produce identical reports.  Exit codes: 0 success, 2 recovery failure
(reconstruction or factoring did not produce an answer), 1 usage or input
error.  The default seed comes from PHASEKIT_SEED when set.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .errors import PhasekitError
from .models import (
    CompareRequest,
    CountRequest,
    EstimateRequest,
    ShorRequest,
    SweepRequest,
)
from .reports import (
    handle_compare,
    handle_count,
    handle_estimate,
    handle_shor,
    handle_sweep,
    render_compare_text,
    render_count_text,
    render_estimate_text,
    render_shor_text,
    sweep_csv,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); keep 1 for usage
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get("PHASEKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PHASEKIT_SEED must be an integer, got {raw!r}") from None


def _parse_range(text: str) -> list[int]:
    """"8..16" -> [8..16]; a bare integer is a single-element range."""
    token = text.strip()
    lo, sep, hi = token.partition("..")
    try:
        if not sep:
            value = int(token)
            return [value]
        start, end = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"invalid range {text!r}; expected A..B") from None
    if end < start:
        return []
    return list(range(start, end + 1))


def build_parser() -> _Parser:
    parser = _Parser(prog="phasekit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run one phase estimation")
    est.add_argument("--phase", required=True, help='eigenphase, "0.0110" or "p/q"')
    est.add_argument("--n", type=int, required=True, help="bits of precision")
    est.add_argument("--k", type=int, required=True, help="workspace qubits")
    est.add_argument("--method", choices=["staged", "kitaev"], default="staged")
    est.add_argument("--backend", choices=["product", "statevector"], default="product")
    est.add_argument("--seed", type=int, default=None)
    est.add_argument("--trials", type=int, default=None, help="per-test budget override")
    est.add_argument("--shared-budget", action="store_true",
                     help="split the trial budget across the two test types")
    est.add_argument("--optimized", action="store_true",
                     help="skip zero-angle rotations (changes tallies only)")
    est.add_argument("--format", choices=["json", "text"], default="text")

    cnt = sub.add_parser("count", help="gate counts without simulating")
    cnt.add_argument("--n", type=int, required=True)
    cnt.add_argument("--k", type=int, required=True)
    cnt.add_argument("--methods", default=None,
                     help="comma list of staged,conventional,kitaev")
    cnt.add_argument("--format", choices=["json", "text"], default="text")

    sh = sub.add_parser("shor", help="one desk-scale factoring attempt")
    sh.add_argument("--N", type=int, required=True, help="odd composite to factor")
    sh.add_argument("--k", type=int, required=True)
    sh.add_argument("--recovery", choices=["cf", "sda"], default="cf")
    sh.add_argument("--x", type=int, default=None, help="base (default: drawn)")
    sh.add_argument("--epsilon", type=float, default=0.2)
    sh.add_argument("--seed", type=int, default=None)
    sh.add_argument("--runs", type=int, default=None,
                    help="pooled runs for sda (default derived from epsilon)")
    sh.add_argument("--format", choices=["json", "text"], default="text")

    sw = sub.add_parser("sweep", help="cost table across (n, k) as CSV")
    sw.add_argument("--n-range", required=True, help='e.g. "8..16" or "8"')
    sw.add_argument("--k-range", required=True)
    sw.add_argument("--out", default="-", help="output path, - for stdout")

    cmp_p = sub.add_parser("compare-cases", help="order-finding precision regimes")
    cmp_p.add_argument("--L", type=int, required=True, help="modulus bit length")
    cmp_p.add_argument("--k", type=int, required=True)
    cmp_p.add_argument("--epsilon", type=float, default=0.01)
    cmp_p.add_argument("--format", choices=["json", "text"], default="text")

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _emit(report, text_renderer, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(text_renderer(report))


def cmd_estimate(args) -> int:
    req = EstimateRequest(
        phase=args.phase,
        n=args.n,
        k=args.k,
        method=args.method,
        backend=args.backend,
        seed=args.seed if args.seed is not None else _default_seed(),
        trials=args.trials,
        shared_budget=args.shared_budget,
        paper_cost_mode=not args.optimized,
    )
    report = handle_estimate(req)
    _emit(report, render_estimate_text, args.format)
    return 0 if report.success else 2


def cmd_count(args) -> int:
    methods = None
    if args.methods is not None:
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    req = CountRequest(n=args.n, k=args.k, methods=methods)
    report = handle_count(req)
    _emit(report, render_count_text, args.format)
    return 0


def cmd_shor(args) -> int:
    req = ShorRequest(
        N=args.N,
        k=args.k,
        recovery=args.recovery,
        x=args.x,
        epsilon=args.epsilon,
        seed=args.seed if args.seed is not None else _default_seed(),
        pooled_runs=args.runs,
    )
    report = handle_shor(req)
    _emit(report, render_shor_text, args.format)
    return 0 if report.success else 2


def cmd_sweep(args) -> int:
    req = SweepRequest(
        n_values=_parse_range(args.n_range),
        k_values=_parse_range(args.k_range),
    )
    report = handle_sweep(req)
    payload = sweep_csv(report)
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    return 0


def cmd_compare_cases(args) -> int:
    req = CompareRequest(big_l=args.L, k=args.k, epsilon=args.epsilon)
    report = handle_compare(req)
    _emit(report, render_compare_text, args.format)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "estimate": cmd_estimate,
    "count": cmd_count,
    "shor": cmd_shor,
    "sweep": cmd_sweep,
    "compare-cases": cmd_compare_cases,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        sys.stderr.write(f"invalid request: {where}: {first['msg']}\n")
        return 1
    except (ValueError, PhasekitError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
