"""Triangle-free process simulation, survival calculus and acceptance checks."""

import json as _json

from ._core import (
    ComplexityGuardError,
    DomainError,
    RoundContext,
    __version__,
    closed_form,
    count_copies,
    erfi,
    finite_m_p_delta,
    lambda_counts,
    limit_recursion,
    pattern_info,
    phi_big,
    phi_small,
    predict_copies,
    run_process,
    simulate_tree,
    variance_margin,
)
from . import _core


def exhaustive_oracle(n):
    """Exact outcome law of the process on K_n for n in {3, 4, 5}."""
    return _json.loads(_core.exhaustive_oracle_json(n))


def run_criterion(criterion, seed=1):
    """Runs one acceptance criterion and returns its result record."""
    return _json.loads(_core.run_criterion_json(criterion, seed))[0]


__all__ = [
    "ComplexityGuardError",
    "DomainError",
    "RoundContext",
    "__version__",
    "closed_form",
    "count_copies",
    "erfi",
    "exhaustive_oracle",
    "finite_m_p_delta",
    "lambda_counts",
    "limit_recursion",
    "pattern_info",
    "phi_big",
    "phi_small",
    "predict_copies",
    "run_criterion",
    "run_process",
    "simulate_tree",
    "variance_margin",
]
