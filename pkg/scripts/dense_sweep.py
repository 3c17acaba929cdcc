"""Run the fixed-dimension verifier over a grid of power functions.

Prints one row per (alpha, beta, n) with the outcome and the strategy that
produced a witness, if any.

    python3 scripts/dense_sweep.py --n 2,3,4 --budget 20000
"""

import argparse
import itertools

from signlab.domains import parse_domain
from signlab.transforms import power_sign
from signlab.verifier import verify_sign_preserver


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphas", default="0.5,1,2")
    ap.add_argument("--betas", default="0.5,1,1.5,2,2.5,3")
    ap.add_argument("--n", default="2,3,4")
    ap.add_argument("--domain", default="real-line")
    ap.add_argument("--mode", choices=("pd", "psd"), default="pd")
    ap.add_argument("--budget", type=int, default=20_000)
    args = ap.parse_args()
    d = parse_domain(args.domain)
    floats = lambda s: [float(x) for x in s.split(",")]  # noqa: E731
    print(f"{'alpha':>6} {'beta':>6} {'n':>3}  {'outcome':<14} strategy")
    for alpha, beta, n in itertools.product(floats(args.alphas), floats(args.betas),
                                            [int(x) for x in args.n.split(",")]):
        rep = verify_sign_preserver(power_sign(alpha, beta), d, n, args.mode, budget=args.budget)
        strategy = rep.witness.strategy if rep.witness is not None else "-"
        print(f"{alpha:6.2f} {beta:6.2f} {n:3d}  {rep.outcome.value:<14} {strategy}")


if __name__ == "__main__":
    main()
