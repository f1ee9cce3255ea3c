"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import os

import numpy as np
from sklearn.utils.validation import check_array

from .core import Family, WellConfig, _check_cutoff

WORKERS_ENV = "ORTHOWELL_MAX_WORKERS"


def max_workers() -> int | None:
    """Worker cap from the environment; ``None`` lets the executor decide."""
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{WORKERS_ENV} must be >= 1, got {value}")
    return value


def check_family(family) -> Family:
    return Family.parse(family)


def check_cutoff(cutoff) -> int:
    return _check_cutoff(cutoff)


def check_well(a, hbar, mass) -> WellConfig:
    return WellConfig(float(a), float(hbar), float(mass))


def check_positions(X) -> np.ndarray:
    """Accept a 1-d array of positions or a single-column 2-d array; return 1-d."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    X = check_array(X, dtype=float, ensure_2d=True)
    if X.shape[1] != 1:
        raise ValueError(f"expected a single position feature, got {X.shape[1]} columns")
    return X[:, 0]
