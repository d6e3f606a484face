"""Run the acceptance criteria and print one PASS/FAIL line each.

    python3 scripts/run_acceptance.py            # all criteria
    python3 scripts/run_acceptance.py 3 4        # a selection
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import test_acceptance as acc  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("criteria", nargs="*", type=int,
                    help=f"criterion numbers (default 1..{len(acc.CRITERIA)})")
    args = ap.parse_args()
    picks = args.criteria or range(1, len(acc.CRITERIA) + 1)
    results = [acc.report(k) for k in picks]
    print(f"{sum(results)}/{len(results)} criteria pass")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
