"""Command-line interface: ``sdlab {check,factor,snumbers,fuzz}``.

Reports go to stdout as JSON, diagnostics to stderr.  Exit codes:

* ``check``: 0 holds/equality, 2 any VIOLATED, 3 only Skipped, 1 input error
* ``factor``: 0 ok, 2 factorization precondition failed, 1 input error
* ``snumbers``: 0 ok, 1 input error
* ``fuzz``: 0 no violations, 2 violations, 1 config error

``SDLAB_TOL`` overrides the default equality tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from sdlab import __version__
from sdlab.algebra import BlockStructure, in_a_cap_a_inv, phi
from sdlab.errors import NoConvergence, NotInvertible, NotPositiveDefinite, SdlabError
from sdlab.factorization import NEWTON_MAX_ITER, NEWTON_TOL, arveson_factor, newton_sqrt, positive_factor
from sdlab.funcspec import parse as parse_f
from sdlab.harness import (
    CampaignConfig,
    default_config,
    report_json,
    run_campaign,
    write_counterexamples,
)
from sdlab.inequalities import CHECKERS, EQ_TOL, SKIPPED, VIOLATED, CheckReport, run_check
from sdlab.linalg import adjoint, singular_values
from sdlab.matio import matrix_to_obj, read_matrix
from sdlab.spectral import fk_det, log_sigma_profile, sigma_profile

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_SKIPPED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _default_tol() -> float:
    env = os.environ.get("SDLAB_TOL")
    if env is None:
        return EQ_TOL
    try:
        tol = float(env)
    except ValueError:
        raise SdlabError(f"SDLAB_TOL={env!r} is not a number") from None
    if not tol > 0:
        raise SdlabError("SDLAB_TOL must be positive")
    return tol


def _emit(obj: dict, out) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1)
    print(text)
    if out:
        Path(out).write_text(text + "\n")


def _load(args) -> tuple:
    x = read_matrix(args.matrix)
    n = x.shape[0]
    b = BlockStructure.parse(args.blocks) if args.blocks else BlockStructure.ones(n)
    if b.n != n:
        raise SdlabError(f"blocks {b} sum to {b.n} but the matrix is {n}x{n}")
    return x, b


def cmd_check(args) -> int:
    x, b = _load(args)
    tol = args.tol if args.tol is not None else _default_tol()
    f = parse_f(args.f)
    if args.check != "all" and args.check not in CHECKERS:
        raise SdlabError(f"unknown checker {args.check!r}; known: all, {', '.join(CHECKERS)}")
    names = CHECKERS if args.check == "all" else (args.check,)
    reports = []
    for name in names:
        try:
            rep = run_check(name, x, b, f=f, p=args.p, depth=args.depth, eq_tol=tol)
        except SdlabError as exc:
            rep = CheckReport(name, None, None, None, SKIPPED, reason=f"{type(exc).__name__}: {exc}")
        reports.append(rep)
    _emit({
        "version": __version__,
        "matrix": str(args.matrix),
        "blocks": str(b),
        "eq_tol": tol,
        "reports": [r.to_dict() for r in reports],
    }, args.out)
    statuses = {r.status for r in reports}
    if VIOLATED in statuses:
        return EXIT_FAIL
    if statuses == {SKIPPED}:
        return EXIT_SKIPPED
    return EXIT_OK


def _rel(res: np.ndarray, x: np.ndarray) -> float:
    return float(np.linalg.norm(res, 2) / max(np.linalg.norm(x, 2), 1e-300))


def cmd_factor(args) -> int:
    x, b = _load(args)
    out = {"version": __version__, "mode": args.mode, "blocks": str(b)}
    try:
        if args.mode == "arveson":
            u, a_tilde, certified = arveson_factor(x, b)
            out.update(
                u=matrix_to_obj(u), a_tilde=matrix_to_obj(a_tilde), certified=certified,
                residual=_rel(u @ a_tilde - x, x),
                unitarity_residual=float(np.linalg.norm(adjoint(u) @ u - np.eye(len(x)), 2)),
            )
        elif args.mode == "positive":
            z = positive_factor(x, b)
            out.update(z=matrix_to_obj(z), residual=_rel(adjoint(z) @ z - x, x), in_a_cap_a_inv=in_a_cap_a_inv(z, b))
        else:
            res = newton_sqrt(x, max_iter=args.max_iter, tol=args.tol)
            r = res.result
            out.update(result=matrix_to_obj(r), iterations=len(res.iterates) - 1, residual=_rel(r @ r - x, x))
    except (NotInvertible, NotPositiveDefinite, NoConvergence) as exc:
        print(f"factor: {type(exc).__name__}: {exc}", file=sys.stderr)
        out["error"] = f"{type(exc).__name__}: {exc}"
        _emit(out, args.out)
        return EXIT_FAIL
    _emit(out, args.out)
    return EXIT_OK


def _profile(x) -> dict:
    d = {
        "mu": singular_values(x).values.tolist(),
        "sigma_profile": sigma_profile(x).tolist(),
        "fk_det": fk_det(x),
    }
    try:
        d["log_sigma_profile"] = log_sigma_profile(x).tolist()
    except NotInvertible as exc:
        d["log_sigma_omitted_reason"] = str(exc)
    return d


def cmd_snumbers(args) -> int:
    x = read_matrix(args.matrix)
    out = {"version": __version__, "n": int(x.shape[0]), **_profile(x)}
    if args.blocks:
        b = BlockStructure.parse(args.blocks)
        if b.n != x.shape[0]:
            raise SdlabError(f"blocks {b} sum to {b.n} but the matrix is {x.shape[0]}x{x.shape[0]}")
        out["blocks"] = str(b)
        out["phi"] = _profile(phi(x, b))
    _emit(out, args.out)
    return EXIT_OK


def _csv(text, conv=str):
    return tuple(conv(s) for s in text.split(",") if s)


def cmd_fuzz(args) -> int:
    if args.config:
        cfg = CampaignConfig.load(args.config)
    else:
        cfg = default_config(eq_tol=_default_tol())
    if args.n:
        cfg.sizes = _csv(args.n, int)
    if args.trials is not None:
        if args.trials < 0:
            raise SdlabError("--trials must be >= 0")
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.seed = args.seed
    if args.checkers:
        cfg = replace(cfg, checkers=list(_csv(args.checkers)))
    if args.blocks:
        cfg.block_structures = _csv(args.blocks.replace(";", ","))
    if args.workers is not None:
        cfg.workers = args.workers
    cfg.expanded()  # validate checker names before running
    report = run_campaign(cfg)
    if report["total_violations"]:
        where = args.artifacts or (Path(args.out).parent / "counterexamples" if args.out else Path("counterexamples"))
        report["counterexample_files"] = write_counterexamples(report, where)
    text = report_json(report)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return EXIT_FAIL if report["total_violations"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sdlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run inequality checkers on one matrix")
    c.add_argument("--matrix", required=True)
    c.add_argument("--blocks", help="comma-separated block sizes (default: all 1)")
    c.add_argument("--check", default="all", help=f"one of: all, {', '.join(CHECKERS)}")
    c.add_argument("--f", default="pow:1", help="function spec, e.g. pow:2 or sum:0.5*pow:1+0.5*log")
    c.add_argument("--p", type=float, default=1.0)
    c.add_argument("--depth", type=int, default=6)
    c.add_argument("--tol", type=float, default=None, help="equality tolerance (default 1e-8 or $SDLAB_TOL)")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    fa = sub.add_parser("factor", help="Arveson, positive or Newton square-root factorization")
    fa.add_argument("--matrix", required=True)
    fa.add_argument("--blocks")
    fa.add_argument("--mode", required=True, choices=("arveson", "positive", "sqrt"))
    fa.add_argument("--max-iter", type=int, default=NEWTON_MAX_ITER)
    fa.add_argument("--tol", type=float, default=NEWTON_TOL)
    fa.add_argument("--out")
    fa.set_defaults(func=cmd_factor)

    s = sub.add_parser("snumbers", help="dump s-numbers, Sigma and log-Sigma profiles, FK determinant")
    s.add_argument("--matrix", required=True)
    s.add_argument("--blocks")
    s.add_argument("--out")
    s.set_defaults(func=cmd_snumbers)

    z = sub.add_parser("fuzz", help="run a randomized campaign")
    z.add_argument("--config")
    z.add_argument("--n", help="comma-separated sizes")
    z.add_argument("--trials", type=int)
    z.add_argument("--seed", type=int)
    z.add_argument("--checkers", help="comma-separated checker names")
    z.add_argument("--blocks", help="comma-separated block-structure names: ones,halves,head1,random")
    z.add_argument("--workers", type=int)
    z.add_argument("--out")
    z.add_argument("--artifacts", help="directory for counterexample files")
    z.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SdlabError, OSError) as exc:
        print(f"sdlab {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
