#!/usr/bin/env python3
"""Measure the empirical success rate of sample_sync at the desk profile.

Runs N independent single-attempt draws and reports the success fraction
plus the retry budget needed to push failure probability below a target.
The budget printed here is what the shipped fixture and acceptance suite
use.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from editsync.sync import SampleFailure, SyncParams, sample_sync


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--attempts", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--target-failure", type=float, default=1e-6)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--msg-bits", type=int, default=4)
    ap.add_argument("--block-bits", type=int, default=16)
    ap.add_argument("--delta", type=Fraction, default=Fraction(1, 8))
    ap.add_argument("--overlap-limit", type=int, default=3)
    ap.add_argument("--list-limit", type=int, default=8)
    args = ap.parse_args(argv)

    params = SyncParams(
        n=args.n,
        msg_bits=args.msg_bits,
        block_bits=args.block_bits,
        delta=args.delta,
        overlap_limit=args.overlap_limit,
        list_limit=args.list_limit,
    )
    successes = 0
    tallies = {"condition1": 0, "condition2": 0, "condition3": 0}
    for t in range(args.attempts):
        res = sample_sync(params, rng_seed=(args.seed, "measurement", t), max_retries=1)
        if isinstance(res, SampleFailure):
            for k, v in res.condition_tallies.items():
                tallies[k] += v
        else:
            successes += 1
        if (t + 1) % 100 == 0:
            print(f"  {t + 1}/{args.attempts}: {successes} successes", file=sys.stderr)

    p = successes / args.attempts
    report = {
        "params": params.to_json(),
        "attempts": args.attempts,
        "successes": successes,
        "success_rate": p,
        "condition_tallies": tallies,
    }
    if 0 < p < 1:
        report["budget_for_target"] = math.ceil(
            math.log(args.target_failure) / math.log(1 - p)
        )
    elif p == 1.0:
        report["budget_for_target"] = 1
    print(json.dumps(report, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
