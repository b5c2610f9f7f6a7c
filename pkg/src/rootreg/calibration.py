"""Frozen calibration constants for the pipeline's inequality checks.

The underlying theory guarantees each inequality with *some* constant
depending only on the degree; the artifact pins concrete ones so the checks
are falsifiable.  Each value was fitted once as 1.5x the maximum observed
ratio LHS / RHS-core over the built-in validation suite (the degree-3 and
degree-4 walkthrough families plus seeded random trigonometric families) and
then frozen here.  Re-run :func:`refit` only when the suite itself changes,
and commit the new table.
"""

from __future__ import annotations

CALIBRATION_VERSION = "2026.08-1"

# keyed by (check name, degree of the polynomial at the node); fitted over
# the walkthrough families and seeded random trigonometric families
# (degrees 2-5, seeds 11, 12, 21, 22, 31, 32, 41, 42), safety factor 1.5
CONSTANTS = {
    ("derivative-bounds", 2): 0.153446,
    ("derivative-bounds", 3): 0.083203,
    ("derivative-bounds", 4): 0.022323,
    ("derivative-bounds", 5): 0.016909,
    ("factor-derivative-bounds", 2): 0.054774,
    ("factor-derivative-bounds", 3): 0.005497,
    ("factor-derivative-bounds", 4): 0.008427,
    ("factor-radical-lp", 2): 0.02598,
    ("factor-radical-lp", 3): 0.007413,
    ("factor-radical-lp", 4): 0.007298,
    ("factor-shift-derivative", 2): 0.047944,
    ("factor-shift-derivative", 3): 0.003145,
    ("factor-shift-derivative", 4): 0.000395,
}

DEFAULT_CONSTANT = 10.0


def constant_for(name: str, degree: int) -> float:
    return CONSTANTS.get((name, degree), DEFAULT_CONSTANT)


def refit(observed: dict, safety: float = 1.5) -> dict:
    """Turn a {key: max observed ratio} table into frozen constants."""
    return {key: safety * ratio for key, ratio in observed.items() if ratio > 0}
