"""Well configuration, mode bookkeeping and pointwise evaluation.

A confined mode is labelled by its momentum grid index ``j`` (momentum
``p_j = j*pi*hbar/(2a)``) and its trigonometric kind.  The four basis
families are fixed subsets of these modes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Kind(enum.IntEnum):
    # ordering matters: enumerate_modes sorts by (j, kind)
    CONST = 0
    COS = 1
    SIN = 2


class Family(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"

    @classmethod
    def parse(cls, value: "Family | str") -> "Family":
        if isinstance(value, Family):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(
                f"unknown family {value!r}; expected one of I, II, III, IV"
            ) from None


@dataclass(frozen=True)
class WellConfig:
    """Physical constants and half-width of the well ``[-a, a]``."""

    a: float = 1.0
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for name in ("a", "hbar", "mass"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive number, got {value!r}")

    @property
    def momentum_step(self) -> float:
        return math.pi * self.hbar / (2.0 * self.a)

    def momentum(self, j):
        return j * math.pi * self.hbar / (2.0 * self.a)

    def wavenumber(self, j):
        return j * math.pi / (2.0 * self.a)


@dataclass(frozen=True, order=True)
class ModeId:
    j: int
    kind: Kind

    def __post_init__(self):
        if not isinstance(self.j, (int, np.integer)) or self.j < 0:
            raise ValueError(f"grid index must be a nonnegative integer, got {self.j!r}")
        object.__setattr__(self, "j", int(self.j))
        object.__setattr__(self, "kind", Kind(self.kind))
        if (self.kind is Kind.CONST) != (self.j == 0):
            raise ValueError("the constant mode is exactly the j = 0 mode")

    @property
    def parity(self) -> int:
        return -1 if self.kind is Kind.SIN else 1

    @property
    def label(self) -> str:
        return f"{self.j}{'+' if self.parity > 0 else '-'}"

    def __str__(self):
        return f"({self.j},{self.kind.name.capitalize()})"


CONST_MODE = ModeId(0, Kind.CONST)


def _check_cutoff(cutoff) -> int:
    if isinstance(cutoff, bool) or not isinstance(cutoff, (int, np.integer)):
        raise TypeError(f"cutoff must be an integer, got {type(cutoff).__name__}")
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    return int(cutoff)


def in_family(mode: ModeId, family: Family | str) -> bool:
    family = Family.parse(family)
    if mode.kind is Kind.CONST:
        return family in (Family.II, Family.III)
    even = mode.j % 2 == 0
    if mode.kind is Kind.COS:
        return even if family in (Family.II, Family.III) else not even
    return even if family in (Family.I, Family.III) else not even


def enumerate_modes(family: Family | str, cutoff: int) -> list[ModeId]:
    """Members of ``family`` with grid index ``j <= cutoff``, sorted by (j, kind).

    >>> [str(m) for m in enumerate_modes("I", 4)]
    ['(1,Cos)', '(2,Sin)', '(3,Cos)', '(4,Sin)']
    """
    family = Family.parse(family)
    cutoff = _check_cutoff(cutoff)
    modes = [CONST_MODE] if in_family(CONST_MODE, family) else []
    for j in range(1, cutoff + 1):
        for kind in (Kind.COS, Kind.SIN):
            mode = ModeId(j, kind)
            if in_family(mode, family):
                modes.append(mode)
    return modes


def all_modes(cutoff: int) -> list[ModeId]:
    cutoff = _check_cutoff(cutoff)
    return [CONST_MODE] + [ModeId(j, k) for j in range(1, cutoff + 1) for k in (Kind.COS, Kind.SIN)]


def level_table(family: Family | str, n_levels: int = 8) -> list[str]:
    """First ``n_levels`` energy levels as ``'j+'``/``'j-'`` labels."""
    modes = enumerate_modes(family, n_levels + 1)
    return [m.label for m in modes[:n_levels]]


def energy_of(cfg: WellConfig, j) -> float:
    """Kinetic energy ``p_j**2 / (2m)`` of grid index ``j``."""
    return cfg.momentum(j) ** 2 / (2.0 * cfg.mass)


def eval_mode(cfg: WellConfig, mode: ModeId, x):
    """Normalised mode amplitude at ``x``; exactly zero outside ``[-a, a]``."""
    x = np.asarray(x, dtype=float)
    k = cfg.wavenumber(mode.j)
    if mode.kind is Kind.CONST:
        values = np.full_like(x, 1.0 / math.sqrt(2.0 * cfg.a))
    elif mode.kind is Kind.COS:
        values = np.cos(k * x) / math.sqrt(cfg.a)
    else:
        values = np.sin(k * x) / math.sqrt(cfg.a)
    values = np.where(np.abs(x) <= cfg.a, values, 0.0)
    return values[()] if values.ndim == 0 else values


def eval_mode_derivative(cfg: WellConfig, mode: ModeId, x):
    """Analytic x-derivative of :func:`eval_mode` (zero outside the well)."""
    x = np.asarray(x, dtype=float)
    k = cfg.wavenumber(mode.j)
    if mode.kind is Kind.CONST:
        values = np.zeros_like(x)
    elif mode.kind is Kind.COS:
        values = -k * np.sin(k * x) / math.sqrt(cfg.a)
    else:
        values = k * np.cos(k * x) / math.sqrt(cfg.a)
    values = np.where(np.abs(x) <= cfg.a, values, 0.0)
    return values[()] if values.ndim == 0 else values


def eval_free_doublet(cfg: WellConfig, p_abs: float, parity: int, x):
    """Delta-normalised free-particle energy eigenfunction of given parity.

    Not confined: defined on the whole real line.
    """
    if not p_abs > 0:
        raise ValueError(f"momentum must be positive, got {p_abs!r}")
    if parity not in (1, -1):
        raise ValueError(f"parity must be +1 or -1, got {parity!r}")
    x = np.asarray(x, dtype=float)
    amp = math.sqrt(cfg.mass / (math.pi * cfg.hbar * p_abs))
    trig = np.cos if parity == 1 else np.sin
    values = amp * trig(p_abs * x / cfg.hbar)
    return values[()] if values.ndim == 0 else values
