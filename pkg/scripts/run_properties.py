"""Run every harness property at its default trial count and print a summary table.

    python3 scripts/run_properties.py --seed 0 --workers 4 [--json out.json]
"""

import argparse
import json

from pel.harness import PROPERTIES, check_diamond_complete, check_local_confluence, config_for, run_property


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply every trial count")
    ap.add_argument("--only", nargs="*", help="property names")
    ap.add_argument("--json", help="write reports to this file")
    args = ap.parse_args()

    reports = []
    for name in args.only or PROPERTIES:
        cfg, trials = config_for(name, args.seed)
        trials = max(1, int(trials * args.scale))
        if name == "diamond":
            r = check_diamond_complete(cfg, trials, exhaustive_size=8, workers=args.workers)
        elif name == "local-confluence":
            r = check_local_confluence(cfg, trials, args.workers)
        else:
            r = run_property(name, cfg, trials, args.workers)
        print(r.summary(), flush=True)
        for f in r.failures[:5]:
            print(f"    seed {f.seed}: {f.shrunk or f.term}\n      {f.detail}")
        reports.append(r.to_dict())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2)
    raise SystemExit(0 if all(r["ok"] for r in reports) else 1)


if __name__ == "__main__":
    main()
