"""Size caps and runtime configuration.

Every brute-force or table-building operation takes an explicit cap so a
mis-sized input fails loudly instead of hanging.  The defaults here are the
package-wide ones; the CLI can override them from a config file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

ENUMERATION_CAP = 24          # max projection variables for model enumeration
QBF_PREFIX_CAP = 24           # max prefix length for quantifier expansion
BRUTEFORCE_CAP = 20           # max true atoms for subset-based minimality
ASP_UNIVERSE_CAP = 20         # max atoms for answer-set enumeration
LAYOUT_VAR_CAP = 200_000      # max variable count of a computation table

SOLVER_PATH_ENV = "MODEQ_SOLVER"


@dataclass(frozen=True)
class Limits:
    enumeration_cap: int = ENUMERATION_CAP
    qbf_prefix_cap: int = QBF_PREFIX_CAP
    bruteforce_cap: int = BRUTEFORCE_CAP
    asp_universe_cap: int = ASP_UNIVERSE_CAP
    layout_var_cap: int = LAYOUT_VAR_CAP
    solver_path: str | None = None


def load_limits(path: str | None = None) -> Limits:
    """Build a Limits record from an optional JSON config file and environment.

    Recognized keys mirror the field names.  The MODEQ_SOLVER environment
    variable overrides the solver_path key when set.
    """
    limits = Limits()
    if path is not None:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        known = {k: v for k, v in raw.items() if k in Limits.__dataclass_fields__}
        limits = replace(limits, **known)
    env_solver = os.environ.get(SOLVER_PATH_ENV)
    if env_solver:
        limits = replace(limits, solver_path=env_solver)
    return limits
