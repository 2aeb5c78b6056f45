"""``hofa`` command line front end.

Every run writes one JSON report embedding its full configuration.
Exit codes: 0 success, 2 validation error, 3 analysis error.
"""
from __future__ import annotations

import argparse
import sys
from contextlib import nullcontext

import numpy as np

from . import __version__, config
from .errors import AnalysisError, ParseError, ValidationError
from .fourier import dft, truncate, u2_from_spectrum
from .functions import GroupFunction, lp_norm
from .gowers import additivity_check, gowers_norm, gowers_norm_bruteforce, gowers_power
from .io import (
    generator_parse,
    load_function,
    load_functions,
    load_partition,
    partition_shorthand,
    write_json,
)
from .multilinear import extract_bilinear, nonvanishing_check, symmetry_defect, vtilde
from .regularity import (
    EXHAUSTIVE_CAP,
    Partition,
    character_test,
    complexity_check_c1,
    furreg_pipeline,
)
from .spectral import decompose

COMMANDS = (
    "gowers",
    "fourier",
    "decompose",
    "multilinear",
    "character-test",
    "complexity",
    "pipeline",
    "additivity",
)


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace("[", "").replace("]", "").split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.replace("[", "").replace("]", "").split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hofa", description="Higher-order Fourier analysis on finite abelian groups")
    p.add_argument("--version", action="version", version=f"hofa {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", action="append", help="function JSON (path[#pointer]) or CSV")
    src.add_argument("--gen", action="append", help="generator spec, e.g. quad:p=5,q=1")
    common.add_argument("--group", type=_int_list, help="factor orders for CSV input, e.g. [2,3]")
    common.add_argument("--output", default=None, help="report path (default stdout)")
    common.add_argument("--export-function", default=None, help="also write the input function here")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--cap-evals", type=int, default=config.EVAL_CAP)

    s = sub.add_parser("gowers", parents=[common], help="Gowers U_k norm")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--method", choices=["recursive", "bruteforce", "both"], default="recursive")

    s = sub.add_parser("fourier", parents=[common], help="DFT spectrum")
    s.add_argument("--eps", type=float, default=0.0, help="truncation threshold")

    s = sub.add_parser("decompose", parents=[common], help="spectral k-th order decomposition")
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--eps", type=float, default=0.3)
    s.add_argument("--delta", type=float, default=0.05)
    s.add_argument("--m-max", type=int, default=None)

    s = sub.add_parser("multilinear", parents=[common], help="k-linear representation")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--theta", type=float, default=0.0)
    s.add_argument("--extract-bilinear", action="store_true")
    s.add_argument("--include-tensor", action="store_true")

    def regularity_args(s):
        s.add_argument("--partition", action="append", default=[],
                       help="partition JSON or shorthand one|singleton|mod:M (repeatable)")
        s.add_argument("--samples", type=int, default=10**5)
        s.add_argument("--cap-exhaustive", type=int, default=EXHAUSTIVE_CAP)

    s = sub.add_parser("character-test", parents=[common], help="(P, eps)-character test")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default="auto")
    regularity_args(s)

    s = sub.add_parser("complexity", parents=[common], help="Complexity-I check of a decomposition")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--components", required=True, help="function list or decomposition report")
    s.add_argument("--n", type=_int_list, required=True)
    s.add_argument("--eps-params", type=_float_list, required=True)
    regularity_args(s)

    s = sub.add_parser("pipeline", parents=[common], help="decompose then certify")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--eps", type=float, default=0.3)
    s.add_argument("--delta", type=float, default=0.05)
    s.add_argument("--m-max", type=int, default=None)
    s.add_argument("--n", type=_int_list, default=None)
    s.add_argument("--eps-params", type=_float_list, default=None)
    regularity_args(s)

    s = sub.add_parser("additivity", parents=[common], help="additivity gap of U_k^(2^k)")
    s.add_argument("--k", type=int, default=3)
    return p


def _inputs(args) -> list[GroupFunction]:
    if args.gen:
        return [generator_parse(spec, seed=args.seed) for spec in args.gen]
    if args.input:
        return [load_function(spec, args.group) for spec in args.input]
    raise ParseError("one of --input or --gen is required")


def _single(args) -> GroupFunction:
    fs = _inputs(args)
    if len(fs) != 1:
        raise ParseError(f"{args.command} takes exactly one input function")
    return fs[0]


def _partitions(args, group) -> list[Partition]:
    out = []
    for spec in args.partition:
        if spec in ("one", "singleton", "singletons") or spec.startswith("mod:"):
            out.append(partition_shorthand(spec, group))
        else:
            out.append(load_partition(spec))
    return out


def _run_gowers(args):
    f = _single(args)
    res = {"k": args.k}
    if args.method in ("recursive", "both"):
        res["u_k"] = gowers_norm(f, args.k)
        res["power"] = gowers_power(f, args.k)
    if args.method in ("bruteforce", "both"):
        res["u_k_bruteforce"] = gowers_norm_bruteforce(f, args.k, cap=args.cap_evals)
        res.setdefault("u_k", res["u_k_bruteforce"])
    return f, res


def _run_fourier(args):
    f = _single(args)
    s = dft(f)
    t = truncate(s, args.eps)
    return f, {
        "eps": args.eps,
        "u2": u2_from_spectrum(s),
        "max_abs_coeff": float(np.max(np.abs(s.coeffs))),
        "l2_norm": lp_norm(f, 2),
        "kept": int(np.count_nonzero(t.coeffs)),
        "spectrum": t.to_dict(),
    }


def _run_decompose(args):
    f = _single(args)
    rep = decompose(f, args.order, eps=args.eps, delta=args.delta, m_max=args.m_max, seed=args.seed)
    return f, rep.to_dict()


def _run_multilinear(args):
    f = _single(args)
    T = vtilde(f, args.k, cap=args.cap_evals)
    nv = nonvanishing_check(f, args.k, args.theta, cap=args.cap_evals)
    res = {
        "k": args.k,
        "mean": [T.mean().real, T.mean().imag],
        "max_abs": nv.max_abs,
        "symmetry_defect": symmetry_defect(T),
        "nonvanishing": nv.to_dict(),
    }
    if args.extract_bilinear:
        b = extract_bilinear(T, seed=args.seed)
        res["bilinear"] = {
            "p": b.p,
            "coefficient": b.coefficient,
            "max_deviation": b.max_deviation,
            "checked_triples": b.checked_triples,
            "exhaustive": b.exhaustive,
        }
    if args.include_tensor:
        res["tensor"] = T.to_dict()
    return f, res


def _mode(args):
    return {"auto": None, "exhaustive": True, "sampled": False}[args.mode]


def _run_character_test(args):
    f = _single(args)
    parts = _partitions(args, f.group) or [Partition.one_cell(f.group)]
    rep = character_test(f, parts[0], args.k, args.eps, samples=args.samples, seed=args.seed,
                         cap=args.cap_exhaustive, exhaustive=_mode(args))
    out = rep.to_dict()
    out["n_cells"] = parts[0].n_cells
    return f, out


def _run_complexity(args):
    f = _single(args)
    comps = load_functions(args.components)
    h = GroupFunction(f.group, f.values - sum((c.values for c in comps), np.zeros(f.group.order)))
    rep = complexity_check_c1(f, h, comps, _partitions(args, f.group), args.n, args.eps_params,
                              args.k, samples=args.samples, seed=args.seed, cap=args.cap_exhaustive)
    return f, rep.to_dict()


def _run_pipeline(args):
    f = _single(args)
    rep = furreg_pipeline(f, args.k, eps=args.eps, delta=args.delta, m_max=args.m_max,
                          partitions=_partitions(args, f.group), n_params=args.n,
                          eps_params=args.eps_params, samples=args.samples, seed=args.seed,
                          cap=args.cap_exhaustive)
    return f, rep.to_dict()


def _run_additivity(args):
    fs = _inputs(args)
    rep = additivity_check(fs, args.k)
    total = GroupFunction(fs[0].group, np.sum([c.values for c in fs], axis=0))
    return total, rep.to_dict()


RUNNERS = {
    "gowers": _run_gowers,
    "fourier": _run_fourier,
    "decompose": _run_decompose,
    "multilinear": _run_multilinear,
    "character-test": _run_character_test,
    "complexity": _run_complexity,
    "pipeline": _run_pipeline,
    "additivity": _run_additivity,
}


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "export_function")}
    return cfg


def _thread_limit(n):
    if n is None:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _thread_limit(args.threads):
            f, result = RUNNERS[args.command](args)
        if args.export_function:
            write_json(f.to_dict(), args.export_function)
        report = {
            "hofa_version": __version__,
            "command": args.command,
            "config": _config(args),
            "group": list(f.group.factors),
            "result": result,
        }
        write_json(report, args.output)
        return 0
    except ValidationError as exc:
        print(f"hofa: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except AnalysisError as exc:
        print(f"hofa: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
