"""Freeze independent reference values for the classical games.

Stationary distributions come from the null space of ``L - I`` (scipy),
not from the package's power iteration, so the frozen numbers act as an
outside oracle for tests/test_classical.py.
"""

import json
from pathlib import Path

import numpy as np
from scipy.linalg import null_space

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "oracle_classical.json"


def chain(M, eps1, eps2, pA):
    L = np.zeros((M, M))
    for x in range(M):
        right = 0.5 - eps1 if x == 0 else 0.5 + eps2
        right = pA * 0.5 + (1 - pA) * right
        L[(x + 1) % M, x] += right
        L[(x - 1) % M, x] += 1 - right
    return L


def reference(M, eps1, eps2, pA):
    L = chain(M, eps1, eps2, pA)
    v = null_space(L - np.eye(M))[:, 0].real
    rho = v / v.sum()
    drift = sum(rho[x] * (L[(x + 1) % M, x] - L[(x - 1) % M, x]) for x in range(M))
    return {"M": M, "eps1": eps1, "eps2": eps2, "pA": pA, "rho": rho.tolist(), "scalar_current": float(drift)}


def main():
    cases = [reference(3, 0.4, 0.25, p) for p in (0.0, 0.25, 0.4, 0.41, 0.75)]
    cases += [reference(4, 0.3, 0.2, 0.5), reference(5, 0.1, -0.3, 0.6)]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"source": "null space of L - I", "cases": cases}, indent=2) + "\n")
    print(f"wrote {len(cases)} cases to {OUT}")


if __name__ == "__main__":
    main()
