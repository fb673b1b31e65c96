"""Regenerate tests/data/pilot.json: measured values behind the empirical test thresholds.

Run from the repository root: ``python3 scripts/pilot_runs.py``. Tests compare
fresh runs against these numbers, so only regenerate after an intended change
to sampling or scenario definitions.
"""

import json
import math
import time
from pathlib import Path

import numpy as np

from qthermo.qcore import SpaceLayout
from qthermo.randsrc import SeedSpec
from qthermo.scenarios import ScenarioConfig, run, validate_parameters
from qthermo.typicality import full_space_subspace, typicality_sweep

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "pilot.json"
PILOT_SEED = 77


def scenario(name, **values):
    return run(ScenarioConfig(name, validate_parameters(name, values)))


def main():
    pilot = {"seed": PILOT_SEED}
    t0 = time.perf_counter()

    stats = typicality_sweep(full_space_subspace(SpaceLayout.of(("a", 2), ("b", 2))), ["a"], 1000, SeedSpec(PILOT_SEED))
    pilot["typicality_qubit_pair"] = {"mean_distance": stats.mean_distance, "mean_entropy": stats.mean_entropy}

    recs = scenario("typicality")
    pilot["typicality_sweep"] = {
        "env_dims": [r.extra["env_dim"] for r in recs],
        "mean_distance": [r.observables["trace_distance"] for r in recs],
    }
    recs = scenario("typicality", env_dims=[1024], n_samples=200)
    s = recs[0].observables["entropy_nats"]
    pilot["typicality_env1024"] = {"mean_entropy": s, "gap_to_ln2": math.log(2) - s}

    times = [0.5 * k for k in range(801)]
    recs = scenario("expansion_unitary", times=times)
    occ = np.array([r.extra["right_occupation"] for r in recs])
    pilot["expansion_unitary"] = {
        "times": "0.5*k, k=0..800",
        "initial_occupation": float(occ[0]),
        "max_occupation": float(occ.max()),
        "time_average_occupation": float(occ.mean()),
        "max_abs_entropy_change": float(max(abs(r.extra["entropy_change"]) for r in recs)),
    }

    recs = scenario("expansion_entangling")
    pilot["expansion_entangling"] = {
        "mean_entropy": recs[-1].observables["entropy_nats"],
        "relative_error": recs[-1].extra["relative_error"],
        "std_entropy": recs[-1].extra["std_entropy"],
    }

    recs = scenario("relaxation_scan")
    summary = recs[-1].extra
    pilot["relaxation_scan"] = {
        "mean_curve": [r.observables["entropy_nats"] for r in recs if r.extra["kind"] == "mean"],
        "tau": summary["tau"],
        "plateau": summary["plateau"],
        "plateau_relative_error": summary["plateau_relative_error"],
        "max_early_decrease": summary["max_early_decrease"],
    }

    pilot["elapsed_seconds"] = round(time.perf_counter() - t0, 1)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(pilot, indent=1) + "\n")
    print(json.dumps({k: v for k, v in pilot.items() if k != "relaxation_scan"}, indent=1))
    print("relaxation:", {k: v for k, v in pilot["relaxation_scan"].items() if k != "mean_curve"})


if __name__ == "__main__":
    main()
