"""Mixed-term gap |U_3(f)^8 - sum U_3(f_i)^8| for two weighted quadratic phases.

Sweeps primes and every pair of distinct nonzero quadratic coefficients
(q1, q2), printing the gap next to 2/sqrt(p).
"""
import argparse
import sys

from hofa.functions import gen_quadratic_phase
from hofa.gowers import additivity_check
from hofa.groups import make_group
from hofa.io import dumps


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7, 11, 13])
    ap.add_argument("--c", type=float, nargs=2, default=[0.8, 0.6])
    ap.add_argument("--k", type=int, default=3)
    args = ap.parse_args(argv)

    for p in args.primes:
        g = make_group([p])
        for q1 in range(1, p):
            for q2 in range(q1 + 1, p):
                rep = additivity_check(
                    [args.c[0] * gen_quadratic_phase(g, q1), args.c[1] * gen_quadratic_phase(g, q2)],
                    args.k,
                )
                row = {"p": p, "q": [q1, q2], "gap": rep.gap, "bound": 2 * p**-0.5,
                       "within": rep.gap <= 2 * p**-0.5}
                print(dumps(row, indent=None), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
