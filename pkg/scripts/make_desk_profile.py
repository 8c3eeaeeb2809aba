#!/usr/bin/env python3
"""Regenerate the desk-profile fixtures under fixtures/desk_profile/.

Everything is a pure function of the recorded seed, so this script always
reproduces the shipped files bit-for-bit.  The retry budget (137) comes
from a 1000-attempt measurement of the sample_sync success rate (9.6%),
which puts the probability of exhausting the budget below 1e-6.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from editsync.codec import ConcatParams
from editsync.outer_code import OuterCodeSpec, RecoverySpec
from editsync.sync import SyncParams, SyncSequence, sample_sync

FIXTURE_SEED = 0
RETRY_BUDGET = 137

SYNC_PARAMS = SyncParams(
    n=8,
    msg_bits=4,
    block_bits=16,
    delta=Fraction(1, 8),
    overlap_limit=3,
    list_limit=8,
)

CONCAT_PARAMS = ConcatParams(
    mode="override",
    n=8,
    msg_bits=4,
    block_bits=16,
    overlap_limit=3,
    list_limit=8,
    box_limit=8,
    window_step=1,
    threshold=2,
    edit_budget=2,
    delta=Fraction(1, 8),
)

OUTER_SPEC = OuterCodeSpec(
    symbol_bits=4,
    block_count=8,
    message_symbols=4,
    kind="brute_force_linear",
    seed=0,
    recovery=RecoverySpec(alpha=Fraction(1, 4), box_limit=8, list_limit=16384),
)


def write(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")
    print(f"wrote {path}")


def main() -> int:
    out_dir = Path(__file__).resolve().parent.parent / "fixtures" / "desk_profile"
    out_dir.mkdir(parents=True, exist_ok=True)

    result = sample_sync(SYNC_PARAMS, FIXTURE_SEED, RETRY_BUDGET)
    if not isinstance(result, SyncSequence):
        raise SystemExit(f"sampling failed: {result.to_json()}")
    print(f"sync sequence found at attempt {result.attempts}, hash {result.content_hash()}")

    write(out_dir / "sync_params.json", SYNC_PARAMS.to_json())
    write(out_dir / "sync_sequence.json", result.to_json())
    write(out_dir / "concat_params.json", CONCAT_PARAMS.to_json())
    write(out_dir / "outer_spec.json", OUTER_SPEC.to_json())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
