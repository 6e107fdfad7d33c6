"""``qef`` command line.

Exit codes: 0 success, 1 invalid input (or a failed ``check``), 2 I/O error,
3 computational error such as an exceeded subset cap.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, replace

from . import experiments as ex
from .frame_core import QefParams, check_qef, welch_bound
from .genmodel import GenSpec, gen_qef_gram, make_rng, psd_diagnostics, synthesize_frame
from .matrix_io import read_gram, write_matrix
from .ric import (
    DEFAULT_SUBSET_CAP,
    CliqueSpec,
    clique_ric,
    exact_ric,
    greedy_clique,
    moments_uniform,
    sampled_ric,
    theorem1_upper,
)

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_COMPUTE = 0, 1, 2, 3


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _out(args, payload: dict, human: str) -> None:
    print(_dump(payload) if args.json else human)


def _clique_arg(text):
    try:
        return CliqueSpec(tuple(int(x) for x in text.split(",") if x.strip()))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def cmd_welch(args):
    mu = welch_bound(args.n, args.N)
    _out(args, {"n": args.n, "N": args.N, "mu_E": mu}, repr(mu))
    return EXIT_OK


def cmd_gen(args):
    with open(args.spec) as fh:
        spec = GenSpec.from_json(fh.read())
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    G, _ = gen_qef_gram(spec)
    write_matrix(args.out, G, seed=int(spec.seed), clique=list(spec.clique.indices),
                 eps=spec.eps, eps_frac=spec.eps_frac, mu_E=spec.mu_E)
    rep = check_qef(G, QefParams(spec.n, spec.N, spec.eps))
    payload = {"out": str(args.out), "spec": spec.to_dict(), "mu_E": spec.mu_E,
               "eps": spec.eps, "qef_passed": rep.passed, "coherence": rep.coherence}
    _out(args, payload, f"wrote {args.out}: N={spec.N} n={spec.n} mu_E={spec.mu_E:.6g} "
                        f"eps={spec.eps:.6g} qef={'passed' if rep.passed else 'FAILED'}")
    return EXIT_OK


def cmd_check(args):
    G, _ = read_gram(args.gram, args.n)
    rep = check_qef(G, QefParams(G.ambient_dim, G.N, args.eps))
    payload = {"passed": rep.passed, "coherence": rep.coherence,
               "norm_violations": len(rep.norm_violations),
               "correlation_violations": len(rep.correlation_violations)}
    human = (f"{'passed' if rep.passed else 'failed'}: coherence={rep.coherence:.6g}, "
             f"{len(rep.norm_violations)} norm and "
             f"{len(rep.correlation_violations)} correlation violations")
    _out(args, payload, human)
    return EXIT_OK if rep.passed else EXIT_INVALID


def cmd_ric(args):
    G, _ = read_gram(args.gram, args.n)
    if args.clique is not None:
        if args.k is not None and args.k != args.clique.k:
            raise ValueError(f"--k {args.k} does not match clique size {args.clique.k}")
        val = clique_ric(G, args.clique)
        payload = {"k": args.clique.k, "method": "clique", "ric": val,
                   "note": "lower bound on delta_k"}
    elif args.k is None:
        raise ValueError("ric needs --k or --clique")
    elif args.sample:
        val, m = sampled_ric(G, args.k, args.sample, make_rng(args.seed))
        payload = {"k": args.k, "method": "sampled", "ric": val, "samples": m,
                   "note": "lower estimate of delta_k"}
    else:
        val = exact_ric(G, args.k, args.exact_cap)
        payload = {"k": args.k, "method": "exact", "ric": val}
    _out(args, payload, f"delta_{payload['k']} ({payload['method']}) = {val!r}")
    return EXIT_OK


def cmd_bounds(args):
    mu = welch_bound(args.n, args.N)
    mom = moments_uniform(args.eps)
    rep = theorem1_upper(args.k, args.N, mu, args.eps, mom.f, mom.v, args.t,
                         sigma2=mom.sigma2, C=args.C)
    payload = asdict(rep)
    human = (f"mu_E={mu:.6g}  lower={rep.lower:.6g}  upper={rep.upper:.6g}  "
             f"P>={rep.probability:.6g}  (a={rep.radius_a:.6g}, L={rep.log_term_L:.6g})")
    _out(args, payload, human)
    return EXIT_OK


def _experiment(args, runner):
    config = ex.ExperimentConfig.from_json_file(args.config)
    if args.seed is not None:
        config = replace(config, base_seed=args.seed)
    rows = runner(config, workers=args.workers)
    if config.output_path:
        ex.emit_results(rows, config.output_path)
    if args.json:
        sys.stdout.write(ex.rows_to_json(rows))
    else:
        ts = sorted({t for r in rows for t in r.coverage_at_t})
        print(f"# empirical = {ex.ESTIMATOR}")
        head = f"{'n':>5} {'k':>3} {'mu_E':>9} {'theory':>9} {'mean':>9} {'std':>9}"
        print(head + "".join(f" {'cov@' + format(t, 'g'):>8}" for t in ts))
        for r in rows:
            line = (f"{r.n:>5} {r.k:>3} {r.mu_E:>9.5f} {r.theory_lower_primary:>9.5f} "
                    f"{r.empirical_mean:>9.5f} {r.empirical_std:>9.5f}")
            print(line + "".join(f" {r.coverage_at_t[t]:>8.4f}" for t in ts))
    return EXIT_OK


def cmd_fig2(args):
    return _experiment(args, ex.run_fig2)


def cmd_coverage(args):
    return _experiment(args, ex.run_coverage)


def cmd_clique(args):
    G, _ = read_gram(args.gram, args.n)
    mu = welch_bound(G.ambient_dim, G.N)
    c = greedy_clique(G, mu, args.eps)
    idx = list(c.indices) if c else []
    payload = {"clique": idx, "k": len(idx), "mu_E": mu, "eps": args.eps}
    _out(args, payload, f"clique of size {len(idx)}: {','.join(map(str, idx)) or '(none)'}")
    return EXIT_OK


def cmd_synth(args):
    G, _ = read_gram(args.gram)
    frame, resid = synthesize_frame(G, args.n)
    write_matrix(args.out, frame)
    psd = psd_diagnostics(G)
    payload = {"out": str(args.out), "n": args.n, "residual": resid,
               "lambda_min": psd.lambda_min, "rank": psd.rank, "realizable": psd.realizable}
    _out(args, payload, f"wrote {args.out}: residual ||Phi^T Phi - G||_F = {resid:.6g}, "
                        f"lambda_min={psd.lambda_min:.6g}, rank={psd.rank}")
    return EXIT_OK


def _nonneg(text):
    x = float(text)
    if not (x >= 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"expected a finite value >= 0, got {text}")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, allow_abbrev=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="qef", description="Quasi-equiangular frame toolkit", allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help, allow_abbrev=False)
        sp.set_defaults(func=func)
        return sp

    sp = add("welch", cmd_welch, "Welch bound for n x N")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)

    sp = add("gen", cmd_gen, "generate a QEF Gram matrix from a GenSpec JSON file")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int)

    sp = add("check", cmd_check, "check a Gram matrix against the QEF conditions")
    sp.add_argument("--gram", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--eps", type=_nonneg, required=True)

    sp = add("ric", cmd_ric, "restricted isometry constant of a Gram matrix")
    sp.add_argument("--gram", required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--exact-cap", type=int, default=DEFAULT_SUBSET_CAP)
    sp.add_argument("--clique", type=_clique_arg, help="comma-separated 0-based indices")
    sp.add_argument("--sample", type=int, default=0, help="random subsets instead of exhaustive")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("bounds", cmd_bounds, "probabilistic RIC interval for uniform fluctuations")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eps", type=_nonneg, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--C", type=_nonneg, default=0.0)

    for name, func, help in (("fig2", cmd_fig2, "Monte Carlo clique RIC vs lower bound"),
                             ("coverage", cmd_coverage, "coverage of the upper bound")):
        sp = add(name, func, help)
        sp.add_argument("--config", required=True)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--workers", type=int)

    sp = add("clique", cmd_clique, "greedy clique search")
    sp.add_argument("--gram", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--eps", type=_nonneg, required=True)

    sp = add("synth", cmd_synth, "nearest rank-n frame for a Gram matrix")
    sp.add_argument("--gram", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except OSError as e:
        print(f"qef: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (RuntimeError, ArithmeticError) as e:
        print(f"qef: {e}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as e:
        msg = f"missing key {e}" if isinstance(e, KeyError) else str(e)
        print(f"qef: invalid input: {msg}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
