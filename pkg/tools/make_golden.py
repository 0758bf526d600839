"""Regenerate the frozen figure grids under tests/golden/.

Each quantum grid is cross-validated before it is written: 10 grid points,
drawn with a fixed seed, are recomputed with the Cesaro average at T = 10**6
and must agree with the spectral value within 1e-4.  The spot checks are
stored next to the grids.

    python tools/make_golden.py            # all presets
    python tools/make_golden.py fig3 fig4  # a subset
"""

import json
import sys
from pathlib import Path

import numpy as np

from parrondo_lab import quantum, sweep

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
SPOT_T = 10**6
SPOT_TOL = 1e-4
SPOT_POINTS = 10


def spot_check(result, seed=0):
    spec = result.spec
    combined = isinstance(spec.base, quantum.ParrondoConfig)
    rho0 = quantum.initial_state(spec.init, spec.base.M, combined)
    obs = quantum.observable_current(spec.base.M, combined)
    rng = np.random.default_rng(seed)
    flat = rng.choice(result.values.size, size=SPOT_POINTS, replace=False)
    rows = []
    for f in sorted(int(i) for i in flat):
        idx = np.unravel_index(f, result.values.shape)
        U = quantum.game_parts(sweep.point_config(spec, idx))[0]
        ces = quantum.current_cesaro(U, rho0, obs, SPOT_T).j
        spectral = float(result.values[idx])
        rows.append({"index": [int(i) for i in idx], "spectral": spectral, "cesaro": ces, "diff": abs(ces - spectral)})
    return rows


def main(names):
    GOLDEN.mkdir(parents=True, exist_ok=True)
    spots = {}
    spot_file = GOLDEN / "spotcheck.json"
    if spot_file.exists():
        spots = json.loads(spot_file.read_text())
    for name in names:
        result = sweep.run_sweep(sweep.figure_preset(name))
        if not result.spec.is_classical:
            rows = spot_check(result)
            worst = max(r["diff"] for r in rows)
            print(f"{name}: worst spectral/cesaro difference {worst:.2e}")
            if worst > SPOT_TOL:
                sys.exit(f"{name}: spot check failed ({worst:.2e} > {SPOT_TOL:g}); golden not written")
            spots[name] = {"T": SPOT_T, "tol": SPOT_TOL, "points": rows}
        sweep.write_result(result, str(GOLDEN / f"{name}.csv"))
        print(f"wrote {name}.csv")
    spot_file.write_text(json.dumps(spots, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(sys.argv[1:] or list(sweep.FIGURES))
