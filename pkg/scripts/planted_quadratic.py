"""Recover planted mixtures of two quadratic phases on Z_p across thresholds.

For each (p, eps) the order-2 decomposition of c1*e(q1 x^2/p) + c2*e(q2 x^2/p)
is computed and the recovered eigenvalues, component count and best
correlations with the planted phases are reported as JSON lines.
"""
import argparse
import sys

from hofa.errors import SeparationFailed
from hofa.functions import gen_quadratic_phase, inner
from hofa.groups import make_group
from hofa.io import dumps
from hofa.spectral import decompose


def corr(u, v):
    return abs(inner(u, v)) / (u.norm() * v.norm())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[31, 53, 101])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.25, 0.3])
    ap.add_argument("--q", type=int, nargs=2, default=[1, 3])
    ap.add_argument("--c", type=float, nargs=2, default=[0.8, 0.6])
    ap.add_argument("--delta", type=float, default=0.05)
    args = ap.parse_args(argv)

    for p in args.primes:
        g = make_group([p])
        phases = [gen_quadratic_phase(g, q) for q in args.q]
        f = args.c[0] * phases[0] + args.c[1] * phases[1]
        for eps in args.eps:
            row = {"p": p, "eps": eps, "planted": [c * c for c in args.c]}
            try:
                rep = decompose(f, 2, eps=eps, delta=args.delta)
            except SeparationFailed as exc:
                row["error"] = str(exc)
            else:
                row["eigenvalues"] = rep.eigenvalues
                row["correlations"] = [
                    [corr(c, ph) for ph in phases] for c in rep.components
                ]
                row["residual_u3"] = rep.residual_uk
            print(dumps(row, indent=None), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
