"""Pilot run that freezes the branch thresholds used by the acceptance suite.

Run once, review, commit the JSON; the acceptance run uses a different seed.

    python3 scripts/pilot_fixture.py [--out tests/fixtures/pilot.json]

Decay sets get a ceiling: the pilot's z = 3 Wilson upper bound at the largest x.
Bounded-below sets get a floor: half the smallest pilot Wilson lower bound
(z = 1.96) over the grid.  A floor of 0 means the pilot saw no positive mass
and cannot certify one.
"""

import argparse
import json
from datetime import datetime, timezone
from pathlib import Path

from rmflab import __version__
from rmflab.characters import Branch, ResidueSet, classify_branch
from rmflab.experiments import ResidueModel, TrialConfig, run_probability_experiment, wilson_interval

PILOT_SEED = 20260101
TRIALS = 2000
GRID = (10**2, 10**3, 10**4, 10**5)
SETS = ((1, (1,)), (5, (1, 4)), (5, (1,)), (4, (3,)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "pilot.json"))
    args = ap.parse_args()
    entries = []
    for m, S in SETS:
        verdict, _ = classify_branch(ResidueSet(m, S))
        rows = run_probability_experiment(TrialConfig(ResidueModel.of(m, S), GRID, TRIALS, PILOT_SEED))
        entry = {"m": m, "set": list(S), "verdict": verdict.value,
                 "counts": [r.count for r in rows],
                 "wilson_lo": [r.wilson_lo for r in rows],
                 "wilson_hi": [r.wilson_hi for r in rows]}
        if verdict is Branch.DECAY:
            entry["ceiling"] = wilson_interval(rows[-1].count, TRIALS, 3.0)[1]
        else:
            entry["floor"] = 0.5 * min(r.wilson_lo for r in rows)
        entries.append(entry)
        print(m, S, verdict.value, entry["counts"])
    fixture = {"seed": PILOT_SEED, "trials": TRIALS, "x_grid": list(GRID), "version": __version__,
               "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
               "sets": entries}
    Path(args.out).write_text(json.dumps(fixture, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
