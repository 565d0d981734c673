#!/usr/bin/env python3
"""Realize every preset end to end and print a summary table.

Usage: python scripts/run_presets.py [--out DIR] [--skip-slow]

The star-10-3 and star-9-3 presets carry 20- and 18-crossing certificates,
which take the state-sum a while; --skip-slow leaves them out.
"""

import argparse
import sys
import time
from pathlib import Path

from billiardknots.pipeline import RealizationSpec, realize
from billiardknots.presets import PRESETS
from billiardknots.serialization import write_artifacts

SLOW = {"star-10-3", "star-9-3"}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=None, help="write artifacts under this directory")
    parser.add_argument("--skip-slow", action="store_true")
    args = parser.parse_args()

    header = f"{'preset':14s} {'f':>18s} {'delta':>8s} {'margin':>8s} {'certified':>9s} {'time':>7s}"
    print(header)
    print("-" * len(header))
    failures = 0
    for name in PRESETS:
        if args.skip_slow and name in SLOW:
            print(f"{name:14s} {'(skipped)':>18s}")
            continue
        spec = RealizationSpec(pattern=PRESETS[name], preset=name)
        t0 = time.perf_counter()
        try:
            result = realize(spec)
        except Exception as exc:  # noqa: BLE001 - reporting script
            print(f"{name:14s} FAILED: {exc}")
            failures += 1
            continue
        elapsed = time.perf_counter() - t0
        fs = ",".join(str(h.frequency) for h in result.heights)
        print(
            f"{name:14s} {fs:>18s} {str(result.poly.delta):>8s} "
            f"{float(result.mirror_report.margin):8.3f} "
            f"{str(result.certification.passed):>9s} {elapsed:6.1f}s"
        )
        if not result.passed:
            failures += 1
        if args.out:
            write_artifacts(result, Path(args.out) / name, canonical=True)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
