"""Command-line front end: ``maxloc {atlas,basis,classify,lieb,verify}``.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 usage
error, 3 enumeration bound exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import reports
from .gabor import GaborSystem, build_max_localized_basis, classify_optimizer, is_orthonormal_basis
from .groups import DEFAULT_MAX_ORDER, BoundExceeded, GroupMismatch, GroupSpec, parse_group
from .lieb import lieb_check
from .second_degree import cyclic_subcharacter
from .symplectic import enumerate_maximal_isotropic
from .tf import ZeroWindow, ambiguity, support
from .verify import run_suites

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group: GroupSpec | None
    tol: float | None
    out: str | None
    fmt: str
    seed: int
    samples: int
    max_order: int


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("group_pos", nargs="?", metavar="GROUP", help='group such as "Z4" or "Z2xZ4"')
    common.add_argument("--group", help="same as the positional GROUP")
    common.add_argument("--tol", type=float, help="numerical tolerance (command specific default)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=50)
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="enumeration bound on |A|")
    common.add_argument(
        "--allow-large", action="store_true", help="acknowledge a --max-order above the default bound"
    )

    p = argparse.ArgumentParser(prog="maxloc", description="Maximally localized Gabor windows on finite abelian groups.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("atlas", parents=[common], help="list all maximal isotropic subgroups of A x A^")
    b = sub.add_parser("basis", parents=[common], help="build and verify a maximally localized orthonormal basis")
    b.add_argument("--index", type=int, help="position in the atlas")
    b.add_argument("--b", type=int, help="cyclic groups: support size of h_{b,p}")
    b.add_argument("--p", type=int, help="cyclic groups: quadratic parameter of h_{b,p}")
    c = sub.add_parser("classify", parents=[common], help="decide whether a window is maximally localized")
    c.add_argument("--window", required=True, help="window JSON file")
    lb = sub.add_parser("lieb", parents=[common], help="L^p norms of V_g f against ||f|| ||g||")
    lb.add_argument("--f", required=True, help="window JSON file for f")
    lb.add_argument("--g", required=True, help="window JSON file for g")
    lb.add_argument("--p-list", default="0.5,1,2,4", help="comma separated exponents")
    sub.add_parser("verify", parents=[common], help="run the invariant suites on one group")
    return p


def _config(args) -> RunConfig:
    if args.group_pos and args.group and args.group_pos.lower() != args.group.lower():
        raise UsageError(f"conflicting groups {args.group_pos!r} and {args.group!r}")
    text = args.group or args.group_pos
    try:
        group = parse_group(text) if text else None
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    if args.max_order > DEFAULT_MAX_ORDER and not args.allow_large:
        raise UsageError(f"--max-order above {DEFAULT_MAX_ORDER} needs --allow-large")
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    return RunConfig(args.command, group, args.tol, args.out, args.format, args.seed, args.samples, args.max_order)


def _need_group(cfg: RunConfig) -> GroupSpec:
    if cfg.group is None:
        raise UsageError("a group is required")
    cfg.group.check_bound(cfg.max_order)
    return cfg.group


def _json_only(cfg: RunConfig):
    if cfg.fmt != "json":
        raise UsageError(f"{cfg.command} only writes json")


def _load_window(path: str, group: GroupSpec | None):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read window file {path}: {e}") from e
    try:
        return reports.window_from_json(obj, group)
    except (KeyError, ValueError, TypeError) as e:
        raise UsageError(f"bad window file {path}: {e}") from e


def cmd_atlas(cfg: RunConfig):
    _json_only(cfg)
    A = _need_group(cfg)
    return reports.dumps(reports.atlas_to_json(A, enumerate_maximal_isotropic(A, cfg.max_order))), EXIT_OK


def cmd_basis(cfg: RunConfig, index, b, p):
    _json_only(cfg)
    A = _need_group(cfg)
    if index is not None and (b is not None or p is not None):
        raise UsageError("give either --index or --b/--p")
    if index is not None:
        triples = enumerate_maximal_isotropic(A, cfg.max_order)
        if not 0 <= index < len(triples):
            raise UsageError(f"--index must lie in [0, {len(triples)})")
        t = triples[index]
    elif b is not None and p is not None:
        if A.rank != 1:
            raise UsageError("--b/--p select h_{b,p} and need a cyclic group")
        try:
            t = cyclic_subcharacter(A.order, b, p).triple()
        except ValueError as e:
            raise UsageError(str(e)) from e
    else:
        raise UsageError("basis needs --index or both --b and --p")
    basis = build_max_localized_basis(t)
    if index is None:
        # keep the h_{b,p} phases rather than the generic constructor's
        h = cyclic_subcharacter(A.order, b, p, normalized=True)
        basis = basis._replace(window=h.window(), subcharacter=h)
    rep = is_orthonormal_basis(GaborSystem(basis.window, basis.lattice), cfg.tol or 1e-12)
    measure = support(ambiguity(basis.window)).measure
    out = {"group": str(A), "triple": reports.triple_to_json(t), **reports.basis_to_json(basis, rep, measure)}
    return reports.dumps(out), EXIT_OK if rep.is_basis else EXIT_NEGATIVE


def cmd_classify(cfg: RunConfig, window_path: str):
    _json_only(cfg)
    f = _load_window(window_path, cfg.group)
    f.group.check_bound(cfg.max_order)
    try:
        v = classify_optimizer(f, cfg.tol)
    except ZeroWindow as e:
        raise UsageError(str(e)) from e
    out = {"group": str(f.group), **reports.verdict_to_json(v)}
    return reports.dumps(out), EXIT_OK if v.optimizer else EXIT_NEGATIVE


def cmd_lieb(cfg: RunConfig, f_path: str, g_path: str, p_list: str):
    f = _load_window(f_path, cfg.group)
    g = _load_window(g_path, f.group)
    try:
        ps = [float(s) for s in p_list.split(",") if s.strip()]
    except ValueError as e:
        raise UsageError(f"bad --p-list: {e}") from e
    if not ps:
        raise UsageError("--p-list is empty")
    try:
        rows = [lieb_check(f, g, p, cfg.tol or 1e-12) for p in ps]
    except (ZeroWindow, ValueError) as e:
        raise UsageError(str(e)) from e
    code = EXIT_OK if all(r.margin >= -1e-12 for r in rows) else EXIT_NEGATIVE
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "norm", "bound", "margin", "regime", "equality"])
        for r in rows:
            w.writerow([repr(r.p), repr(r.norm), repr(r.bound), repr(r.margin), r.regime, str(r.equality).lower()])
        return buf.getvalue(), code
    out = {"group": str(f.group), "rows": [dict(r.as_dict(), regime=r.regime) for r in rows]}
    return reports.dumps(out), code


def cmd_verify(cfg: RunConfig):
    _json_only(cfg)
    A = _need_group(cfg)
    res = run_suites(A, cfg.seed, cfg.samples)
    ok = all(r["passed"] is not False for r in res.values())
    out = {"group": str(A), "seed": cfg.seed, "samples": cfg.samples, "suites": res, "passed": ok}
    return reports.dumps(out), EXIT_OK if ok else EXIT_NEGATIVE


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _config(args)
        if cfg.command == "atlas":
            text, code = cmd_atlas(cfg)
        elif cfg.command == "basis":
            text, code = cmd_basis(cfg, args.index, args.b, args.p)
        elif cfg.command == "classify":
            text, code = cmd_classify(cfg, args.window)
        elif cfg.command == "lieb":
            text, code = cmd_lieb(cfg, args.f, args.g, args.p_list)
        else:
            text, code = cmd_verify(cfg)
    except (UsageError, GroupMismatch) as e:
        print(f"maxloc: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExceeded as e:
        print(f"maxloc: error: {e} (raise --max-order with --allow-large)", file=sys.stderr)
        return EXIT_BOUND
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
