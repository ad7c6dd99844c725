"""Python front end for the micro-asp solver."""

import json

from ._microasp import (
    GroundingError,
    OracleLimitError,
    ParseError,
    enumerate_models,
    gen_3sat,
    gen_marriage,
    gen_packing,
    ground,
    normalize,
    oracle_models,
    solve_json,
    strategies,
)

__all__ = [
    "GroundingError",
    "OracleLimitError",
    "ParseError",
    "enumerate_models",
    "gen_3sat",
    "gen_marriage",
    "gen_packing",
    "ground",
    "normalize",
    "oracle_models",
    "solve",
    "solve_json",
    "strategies",
]


def solve(text, strategy="full", seed=0, conflicts=None, timeout_s=None, max_lazy_per_check=None):
    """Solve a program; returns the JSON report as a dict."""
    return json.loads(solve_json(text, strategy, seed, conflicts, timeout_s, max_lazy_per_check))
