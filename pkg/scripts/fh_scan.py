"""Scan real exponents beta for the rank-two family (a(1 + eps*i*j))^beta.

Prints, per exponent, the predicted status and the most negative relative
eigenvalue found on the eps grid.  Non-preserving exponents should show a
clearly negative value; natural numbers and beta >= n - 2 should not.

    python3 scripts/fh_scan.py --n 3 --betas 0.3,0.5,0.9,1,1.5,2
"""

import argparse

import numpy as np

from signlab.transforms import fh_exponent_status
from signlab.witnesses import fh_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--betas", default="", help="comma separated; default is a grid on (0, n)")
    args = ap.parse_args()
    betas = ([float(b) for b in args.betas.split(",")] if args.betas
             else np.round(np.linspace(0.1, args.n, 4 * args.n), 3))
    print(f"{'beta':>8}  {'status':<14} {'eps found':>12}  {'rel min eig':>12}")
    for beta in betas:
        scan = fh_scan(args.n, float(beta))
        eps = "-" if scan.eps_found is None else f"{scan.eps_found:.3g}"
        status = fh_exponent_status(args.n, float(beta)).value
        print(f"{beta:8.3f}  {status:<14} {eps:>12}  {scan.best_relative_min_eig:12.3e}")


if __name__ == "__main__":
    main()
