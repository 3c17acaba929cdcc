"""Exhaustively list entrywise sign preservers over small finite fields.

    python3 scripts/fq_survivors.py --orders 3,4,5,7 --n 2,3
"""

import argparse
import time

from signlab.errors import BudgetExceeded
from signlab.finite_field import (bijective_monomials, enumerate_sign_preservers, field_of_order,
                                  positive_multiples_of_automorphisms, theorem_scope)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", default="3,4,5,7")
    ap.add_argument("--n", default="2,3")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for q in (int(x) for x in args.orders.split(",")):
        F = field_of_order(q)
        for n in (int(x) for x in args.n.split(",")):
            t0 = time.perf_counter()
            try:
                surv = enumerate_sign_preservers(F, n, args.workers)
            except BudgetExceeded as exc:
                print(f"q={q} n={n}: skipped ({exc})")
                continue
            scope = theorem_scope(F, n)
            expected = {"positive multiples of automorphisms": positive_multiples_of_automorphisms,
                        "bijective monomials": bijective_monomials}.get(scope)
            match = "n/a" if expected is None else str(set(surv) == expected(F))
            print(f"q={q} n={n}: {len(surv)} survivors in {time.perf_counter() - t0:.2f}s; "
                  f"scope={scope or 'none'} matches={match}")
            for s in surv:
                print("   ", s)


if __name__ == "__main__":
    main()
