#!/usr/bin/env python3
"""Probe the edit-ball size bound |B_n(y, delta*n)| <= 2^(5*H(delta)*n).

Counts fixed-length balls exactly around random centers and reports the
largest observed size against the bound, per (n, delta) cell.
"""

from __future__ import annotations

import argparse
import json
from fractions import Fraction

from editsync.edit_metric import check_ball_size_bound


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[8, 10, 12])
    ap.add_argument(
        "--delta", type=Fraction, nargs="+",
        default=[Fraction(1, 10), Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)],
    )
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    cells = []
    for n in args.n:
        for delta in args.delta:
            rep = check_ball_size_bound(n, delta, args.trials, args.seed)
            cells.append(rep.to_json())
            print(
                f"n={n} delta={delta}: max {rep.max_ball_size} "
                f"vs bound {rep.bound:.1f} -> {'ok' if rep.passed else 'VIOLATED'}"
            )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(cells, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
