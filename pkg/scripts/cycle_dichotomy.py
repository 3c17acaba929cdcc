"""Sample the cycle witness and tally both sides of its positivity dichotomy.

For each cycle length the witness is PD by construction; substituting
off-corner entries (a, b) of the same moduli flips it to indefinite exactly
when Re(a conj b) crosses Re(offA conj offB) by more than eps (downward for
odd lengths, upward for even ones).

    python3 scripts/cycle_dichotomy.py --draws 1000
"""

import argparse
import math

import numpy as np

from signlab.numeric import Kind, positivity_verdict
from signlab.witnesses import cycle_witness


def polar(r, t):
    return r * complex(math.cos(t), math.sin(t))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lengths", default="3,4,5,6")
    ap.add_argument("--draws", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'predicted indef':>16} {'predicted PD':>13} {'marginal':>9} {'mismatches':>11}")
    for n in (int(x) for x in args.lengths.split(",")):
        tally = {"indef": 0, "pd": 0, "marginal": 0, "bad": 0}
        for _ in range(args.draws):
            R = float(rng.choice([0.5, 1.0, 2.0]))
            r1, r2 = rng.uniform(0.2, 3, 2)
            angles = rng.uniform(-np.pi, np.pi, 4)
            cw = cycle_witness(n, R, polar(r1, angles[0]), polar(r2, angles[1]), float(rng.uniform(1e-3, 0.5)))
            a, b = polar(r1, angles[2]), polar(r2, angles[3])
            v = positivity_verdict(cw.shell(a, b))
            if not v.decided:
                tally["marginal"] += 1
                continue
            pred = cw.predicts_indefinite(a, b)
            tally["indef" if pred else "pd"] += 1
            tally["bad"] += pred != (v.kind is Kind.INDEFINITE)
        print(f"{n:3d} {tally['indef']:16d} {tally['pd']:13d} {tally['marginal']:9d} {tally['bad']:11d}")


if __name__ == "__main__":
    main()
