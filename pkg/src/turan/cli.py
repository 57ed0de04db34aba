"""Command-line entry point: ``turan <subcommand> ...``.

Exit codes: 0 success, 1 usage or internal error, 2 property violated
(``verify``), 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from math import comb

import numpy as np

from . import hypergraph as hg
from .construction import BALANCED, STRICT, build_turan, density_limit, density_table
from .errors import BudgetExceeded, TuranError
from .search import max_kfree
from .smoothing import (EdgeSystem, SmoothingParams, gradient_check, kkt_fit, objective_N,
                        objective_R, random_system, symmetry_report)
from .verifier import DEFAULT_BUDGET as SCAN_BUDGET
from .verifier import is_turan_property
from .search import DEFAULT_BUDGET as NODE_BUDGET

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _int_list(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(human))


def _smoothing_params(args) -> SmoothingParams:
    return SmoothingParams(args.sigma, args.eps, args.formula_variant)


def cmd_construct(args) -> int:
    inst = build_turan(args.n, args.k, BALANCED if args.balanced else STRICT)
    if args.out:
        hg.save(inst.T, args.out)
    if args.complement:
        hg.save(inst.T_bar, args.complement)
    total = comb(inst.n, 3)
    limit = density_limit(inst.k)
    payload = {
        "n": inst.n, "k": inst.k, "m": inst.m, "mode": inst.mode, "experimental": inst.experimental,
        "part_sizes": list(inst.part_sizes),
        "edges_T": inst.T.edge_count, "edges_Tbar": inst.T_bar.edge_count,
        "density_T": inst.T.edge_count / total,
        "density_limit": float(limit), "density_limit_exact": str(limit),
    }
    human = [
        f"n={inst.n} k={inst.k} parts={list(inst.part_sizes)} mode={inst.mode}"
        + (" (experimental)" if inst.experimental else ""),
        f"|T|={inst.T.edge_count}  |T_bar|={inst.T_bar.edge_count}  C(n,3)={total}",
        f"density(T)={inst.T.edge_count / total:.6f}  limit={limit} ({float(limit):.6f})",
    ]
    _emit(args, payload, human)
    return EXIT_OK


def cmd_verify(args) -> int:
    fam = hg.load(args.input)
    rep = is_turan_property(fam, args.k, witness_only=args.witness_only, budget=args.budget,
                            threads=args.threads)
    human = [f"holds={rep.holds} max_inside={rep.max_inside} (limit {comb(args.k, 3)}) "
             f"scanned={rep.subsets_scanned}"]
    if rep.witness is not None:
        human.append("witness: " + " ".join(map(str, rep.witness)))
    _emit(args, rep.to_dict(timing=args.timing), human)
    return EXIT_OK if rep.holds else EXIT_VIOLATED


def cmd_search(args) -> int:
    res = max_kfree(args.n, args.k, args.budget)
    if args.out:
        hg.save(res.witness, args.out)
    payload = {
        "n": res.n, "k": res.k, "max_edges": res.max_edges, "min_cover": res.min_cover,
        "witness_file": args.out, "nodes_explored": res.nodes_explored, "complete": res.complete,
    }
    human = [f"max_edges={res.max_edges} min_cover={res.min_cover} nodes={res.nodes_explored}"
             + ("" if res.complete else "  (budget exhausted: lower bound only)")]
    _emit(args, payload, human)
    return EXIT_OK if res.complete else EXIT_BUDGET


def cmd_density_table(args) -> int:
    rows = density_table(args.k, args.n, BALANCED if args.balanced else STRICT)
    limit = density_limit(args.k)
    payload = {
        "k": args.k, "limit": float(limit), "limit_exact": str(limit),
        "rows": [{"n": r.n, "edges_T": r.edges_T, "edges_Tbar": r.edges_T_bar, "total": r.total,
                  "density_T": float(r.density), "limit": float(r.limit), "gap": float(r.gap)}
                 for r in rows],
    }
    human = [f"{'n':>6} {'|T|':>10} {'C(n,3)':>10} {'density':>10} {'limit':>10} {'gap':>10}"]
    human += [f"{r.n:>6} {r.edges_T:>10} {r.total:>10} {float(r.density):>10.6f} "
              f"{float(r.limit):>10.6f} {float(r.gap):>10.6f}" for r in rows]
    _emit(args, payload, human)
    return EXIT_OK


def _load_system(args) -> EdgeSystem:
    return EdgeSystem.from_family(hg.load(args.input), args.k)


def cmd_smooth_eval(args) -> int:
    sys_ = _load_system(args)
    p = _smoothing_params(args)
    N = objective_N(sys_, p, args.threads)
    R = objective_R(sys_, p, args.threads)
    payload = {"N": N, "R": R, "M_half": sys_.M / 2, "regime": p.regime, "M": sys_.M,
               "sigma": p.sigma, "epsilon": p.epsilon, "formula_variant": p.variant}
    human = [f"N={N:.6f}  M/2={sys_.M / 2}  R={R:.6f}", f"regime: {p.regime}"]
    _emit(args, payload, human)
    return EXIT_OK


def cmd_grad_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.input:
        base = _load_system(args)
        sys_ = base.with_betas(base.betas + rng.normal(0.0, args.jitter, base.betas.shape))
    else:
        if args.n is None:
            raise TuranError("grad-check needs --in or --n")
        sys_ = random_system(args.n, args.k, args.m, rng)
    p = _smoothing_params(args)
    errs = gradient_check(sys_, p, args.h)
    payload = {"max_rel_err_N": errs["N"], "max_rel_err_R": errs["R"], "coordinates": sys_.M * sys_.n,
               "h": args.h}
    human = [f"max relative error  N: {errs['N']:.3e}  R: {errs['R']:.3e}  ({sys_.M * sys_.n} coords)"]
    _emit(args, payload, human)
    return EXIT_OK


def cmd_kkt_check(args) -> int:
    rep = kkt_fit(_load_system(args), _smoothing_params(args), args.threads)
    human = [f"lambda*={rep.lambda_star:.12g} residual={rep.residual_norm:.6e} "
             f"|grad N|={rep.grad_N_norm:.6e} |grad R|={rep.grad_R_norm:.6e}"]
    _emit(args, rep.to_dict(), human)
    return EXIT_OK


def cmd_symmetry_check(args) -> int:
    inst = build_turan(args.n, args.k, STRICT)
    rep = symmetry_report(inst, _smoothing_params(args), args.system, tol=args.tol, seed=args.seed,
                          threads=args.threads)
    human = [f"system={rep.system} tol={rep.tol:g} passed={rep.passed}"]
    for name, c in rep.classes.items():
        tag = "asserted" if c.asserted else "reported"
        human.append(f"  {name:<24} count={c.count:<6} worst dN={c.worst_dN:.3e} "
                     f"dR={c.worst_dR:.3e} [{tag}: {c.passed}]")
    _emit(args, rep.to_dict(), human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON on stdout")
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--seed", type=int, default=0)

    smooth = _Parser(add_help=False)
    smooth.add_argument("--sigma", type=float, default=0.5)
    smooth.add_argument("--eps", type=float, default=0.25)
    smooth.add_argument("--formula-variant", choices=("a", "b"), default="a")

    parser = _Parser(prog="turan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="build the cyclic-partition construction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--balanced", action="store_true", help="allow (k-1) not dividing n (experimental)")
    p.add_argument("--out", help="write T here")
    p.add_argument("--complement", help="write T_bar here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="exhaustively check the (3,k) property")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--witness-only", action="store_true")
    p.add_argument("--budget", type=_positive_int, default=SCAN_BUDGET)
    p.add_argument("--timing", action="store_true", help="include elapsed_ms (not reproducible)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="exact maximum family by branch and bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=_positive_int, default=NODE_BUDGET)
    p.add_argument("--out", help="write the witness family here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("density-table", parents=[common], help="construction densities versus the limit")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated vertex counts")
    p.add_argument("--balanced", action="store_true")
    p.set_defaults(func=cmd_density_table)

    p = sub.add_parser("smooth-eval", parents=[common, smooth], help="evaluate N and R")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_smooth_eval)

    p = sub.add_parser("grad-check", parents=[common, smooth], help="analytic vs finite-difference gradients")
    p.add_argument("--in", dest="input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, help="random system size when --in is absent")
    p.add_argument("--m", type=_positive_int, default=3, help="vectors in a random system")
    p.add_argument("--jitter", type=float, default=0.1, help="noise added to a loaded system")
    p.add_argument("--h", type=float, default=1e-4)
    p.set_defaults(func=cmd_grad_check)

    p = sub.add_parser("kkt-check", parents=[common, smooth], help="least-squares multiplier and residual")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_kkt_check)

    p = sub.add_parser("symmetry-check", parents=[common, smooth], help="gradient symmetry identities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--system", choices=("T", "T_bar"), default="T")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_symmetry_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TuranError, BudgetExceeded, OSError, ValueError) as exc:
        print(f"turan {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
