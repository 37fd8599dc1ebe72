"""Run the default randomized campaign and print a per-checker summary.

    python scripts/run_campaign.py --trials 200 --out campaign.json
"""

import argparse
import sys

from sdlab.harness import default_config, report_json, run_campaign


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--sizes", default="2,4,8,16")
    ap.add_argument("--blocks", default="ones,halves,head1")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()

    cfg = default_config(
        trials=args.trials,
        seed=args.seed,
        sizes=tuple(int(s) for s in args.sizes.split(",")),
        block_structures=tuple(args.blocks.split(",")),
        workers=args.workers,
    )
    rep = run_campaign(cfg)
    print(f"{'checker':<32} {'trials':>7} {'viol':>5} {'eq':>6} {'skip':>5} {'worst rel margin':>17}")
    for label, s in sorted(rep["checkers"].items()):
        worst = s["worst_rel_margin"]
        worst = "-" if worst is None else f"{worst:.3e}"
        print(f"{label:<32} {s['trials']:>7} {s['violated']:>5} {s['equality']:>6} {s['skipped']:>5} {worst:>17}")
    print(f"total {rep['total_trials']} trials, {rep['total_violations']} violations, {rep['wall_time_s']:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report_json(rep) + "\n")
    return 2 if rep["total_violations"] else 0


if __name__ == "__main__":
    sys.exit(main())
