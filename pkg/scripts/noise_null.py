"""Null model: order-2 decomposition and U_3 of unimodular noise.

Reports, per seed, the top quadratic-kernel eigenvalue, the number of
components found at the given (eps, delta), and U_3 next to the floor
U_3^8 >= (2N - 1) / N^2 that every unimodular function on a group of
order N satisfies.
"""
import argparse
import sys

from hofa.errors import SeparationFailed
from hofa.functions import gen_random_unimodular
from hofa.gowers import gowers_norm
from hofa.groups import make_group
from hofa.io import dumps
from hofa.spectral import decompose, hermitian_eig, quadratic_kernel


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--eps", type=float, default=0.3)
    ap.add_argument("--delta", type=float, nargs="+", default=[0.05, 0.1])
    args = ap.parse_args(argv)

    g = make_group([args.n])
    n = args.n
    floor = ((2 * n - 1) / n**2) ** (1 / 8)
    for seed in range(args.seeds):
        f = gen_random_unimodular(g, seed)
        row = {
            "seed": seed,
            "top_eigenvalue": hermitian_eig(quadratic_kernel(f, args.eps))[0].value,
            "u3": gowers_norm(f, 3),
            "u3_floor": floor,
        }
        for d in args.delta:
            try:
                row[f"components@{d}"] = len(decompose(f, 2, eps=args.eps, delta=d, seed=seed).components)
            except SeparationFailed:
                row[f"components@{d}"] = "separation-failed"
        print(dumps(row, indent=None), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
