"""Command-line interface: construct, verify, search, signature, range.

Exit codes: 0 success, 1 verification or search failure, 2 invalid request
(bound or dimension), 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .construct import BoundError, bound, fourier_set, is_power_of_two, max_sets
from .core import DEFAULT_TOL, numerical_range_samples
from .io import FormatError, OperatorSetFile, dumps, read_set, write_gram_csv, write_set
from .search import Budget, SearchConfig, explore_dimension, search_max_set, verify_set
from .structure import space_dims

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3
MAX_DIM = 64
SEED_ENV = "ANTILINEAR_SEED"

KIND_ALIASES = {"conj": "conjugation", "conjugation": "conjugation", "skew": "skew"}


class Invalid(Exception):
    """Request rejected before any work is done (exit 2)."""


def _bound_rule(d: int) -> str:
    n_plus, n_minus = space_dims(d)
    return (f"at most d(d+1)/2 = {n_plus} orthogonal conjugations and "
            f"d(d-1)/2 = {n_minus} orthogonal skew conjugations for d={d}")


def _check_dim(d: int, force: bool) -> None:
    if d < 1:
        raise Invalid(f"--dim must be positive, got {d}")
    if d > MAX_DIM and not force:
        raise Invalid(f"--dim {d} exceeds {MAX_DIM}; pass --force to run anyway")


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}.json")


def cmd_construct(args) -> int:
    d = args.dim
    _check_dim(d, args.force)
    kinds = ["conjugation", "skew"] if args.kind == "both" else [KIND_ALIASES[args.kind]]
    if "skew" in kinds and d % 2:
        raise Invalid(f"skew conjugations need even --dim; {_bound_rule(d)}")
    if args.method == "power2":
        if not is_power_of_two(d):
            raise Invalid(f"--method power2 needs a power of two, got {d}; {_bound_rule(d)}")
        conj, skew = max_sets(d)
        sets = {"conjugation": conj, "skew": skew}
    else:
        if kinds != ["conjugation"]:
            raise Invalid("--method fourier only builds conjugation sets")
        sets = {"conjugation": fourier_set(d)}

    out = Path(args.out)
    for kind in kinds:
        s = sets[kind]
        path = out if len(kinds) == 1 else _sibling(out, "conj" if kind == "conjugation" else "skew")
        try:
            write_set(path, OperatorSetFile.from_set(s))
        except OSError as exc:
            print(f"error: cannot write {path}: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"{kind}: {len(s)} operators (bound {bound(d, kind)}) -> {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        f = read_set(args.inp, check=False)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    kind = KIND_ALIASES.get(args.kind) if args.kind else f.kind
    if kind not in ("conjugation", "skew"):
        raise Invalid("file kind is 'general'; pass --kind conj or --kind skew")
    if not f.matrices:
        raise Invalid("file holds no operators")
    cert = verify_set(f.ops, tol=args.tol, kind=kind)
    print(cert.summary())
    if args.gram_out:
        try:
            write_gram_csv(args.gram_out, cert.gram.entries)
        except OSError as exc:
            print(f"error: cannot write {args.gram_out}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if cert.passed else EXIT_FAIL


def _parse_sweep(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise Invalid(f"--sweep expects KMIN..KMAX, got {text!r}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise Invalid(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def _write_json(path: Path, obj) -> None:
    path.write_text(dumps(obj))


def cmd_search(args) -> int:
    d = args.dim
    _check_dim(d, args.force)
    kind = KIND_ALIASES[args.kind]
    seed = _seed(args)
    out = Path(args.out) if args.out else None
    try:
        if args.sweep:
            k_min, k_max = _parse_sweep(args.sweep)
            if kind == "skew" and d % 2:
                raise BoundError("skew conjugations need even --dim")
            budget = Budget(restarts=args.restarts, max_iters=args.max_iters,
                            time_s=args.time_budget, seed=seed, tol_loss=args.tol,
                            strategy=args.strategy, step_size=args.step_size,
                            workers=args.workers)
            reports = explore_dimension(d, kind, k_min, k_max, budget)
        else:
            cfg = SearchConfig(d, kind, args.target, restarts=args.restarts,
                               max_iters=args.max_iters, step_size=args.step_size,
                               tol_loss=args.tol, seed=seed, strategy=args.strategy,
                               workers=args.workers, check_gradient=args.check_gradient)
            reports = [search_max_set(cfg)]
    except BoundError as exc:
        raise Invalid(f"{exc}; {_bound_rule(d)}") from None
    except ValueError as exc:
        raise Invalid(str(exc)) from None

    for r in reports:
        status = "witness found" if r.success else "no witness found within budget"
        flag = " (budget exhausted)" if r.budget_exhausted else ""
        print(f"d={d} kind={kind} k={r.config.target_k}: best_loss={r.best_loss:.3e} "
              f"{status}{flag}")
        print(f"  wall_time_s={r.wall_time_s:.2f}", file=sys.stderr)

    if out is not None:
        try:
            if args.sweep:
                _write_json(out, {"reports": [r.to_dict(args.timing) for r in reports]})
                for r in reports:
                    if r.achieved is not None:
                        write_set(_sibling(out, f"k{r.config.target_k}.set"),
                                  OperatorSetFile.from_set(r.achieved, tol=1e-6))
            else:
                _write_json(out, reports[0].to_dict(args.timing))
                if reports[0].achieved is not None:
                    write_set(_sibling(out, "set"),
                              OperatorSetFile.from_set(reports[0].achieved, tol=1e-6))
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            return EXIT_IO
    last_k = _parse_sweep(args.sweep)[1] if args.sweep else args.target
    complete = reports[-1].config.target_k == last_k
    return EXIT_OK if complete and all(r.success for r in reports) else EXIT_FAIL


def cmd_signature(args) -> int:
    d = args.dim
    _check_dim(d, args.force)
    n_plus, n_minus = space_dims(d)
    print(f"({n_plus}, {n_minus}, {n_plus - n_minus})")
    return EXIT_OK


def cmd_range(args) -> int:
    try:
        f = read_set(args.inp, check=False)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not 0 <= args.index < len(f.matrices):
        print(f"error: index {args.index} out of range for {len(f.matrices)} operators",
              file=sys.stderr)
        return EXIT_IO
    if args.samples < 1:
        raise Invalid("--samples must be positive")
    est = numerical_range_samples(f.ops[args.index], args.samples, _seed(args))
    ok = est.phase_residual <= 1e-12
    print(f"radius_estimate={est.radius_estimate:.17g}")
    print(f"phase_covariance={'ok' if ok else 'FAILED'} (max residual {est.phase_residual:.3e})")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="antilinear",
        description="Orthogonal (skew) conjugations on C^d: construct, verify, search.",
        epilog=f"Environment: {SEED_ENV} sets the RNG seed when --seed is not given. "
               "Exit codes: 0 ok, 1 failed verification/search, 2 invalid request, 3 I/O error.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="write explicit orthogonal sets")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--kind", choices=["conj", "skew", "both"], default="both")
    c.add_argument("--method", choices=["power2", "fourier"], default="power2")
    c.add_argument("--out", required=True)
    c.add_argument("--force", action="store_true", help=f"allow --dim > {MAX_DIM}")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="certify an operator-set file")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--kind", choices=["conj", "skew"], help="override the file's kind")
    v.add_argument("--gram-out", help="write the Gram matrix as CSV")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="search for orthogonal sets numerically")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--kind", choices=["conj", "skew"], default="conj")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--target", type=int)
    g.add_argument("--sweep", metavar="KMIN..KMAX")
    s.add_argument("--restarts", type=int, default=8)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--max-iters", type=int, default=2000)
    s.add_argument("--step-size", type=float, default=0.1)
    s.add_argument("--tol", type=float, default=1e-12, help="success threshold on the loss")
    s.add_argument("--strategy", choices=["joint", "greedy"], default="joint")
    s.add_argument("--workers", type=int, default=1, help="parallel restarts")
    s.add_argument("--time-budget", type=float, default=None, help="seconds, sweeps only")
    s.add_argument("--check-gradient", action="store_true")
    s.add_argument("--timing", action="store_true", help="include wall time in the report")
    s.add_argument("--out")
    s.add_argument("--force", action="store_true", help=f"allow --dim > {MAX_DIM}")
    s.set_defaults(func=cmd_search)

    sg = sub.add_parser("signature", help="dimensions of the Hermitian/skew spaces")
    sg.add_argument("--dim", type=int, required=True)
    sg.add_argument("--force", action="store_true")
    sg.set_defaults(func=cmd_signature)

    r = sub.add_parser("range", help="sample <phi, theta phi> for one operator")
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--index", type=int, default=0)
    r.add_argument("--samples", type=int, default=10000)
    r.add_argument("--seed", type=int, default=None)
    r.set_defaults(func=cmd_range)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Invalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
