"""Min-entropy randomness figures derived from behaviors."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from math import log2, sqrt

import numpy as np

from .behavior import Behavior, bell_value_of, max_probability, per_pair_max, validate
from .encoding import EncodingScheme, local_bound_closed, quantum_optimum
from .errors import DomainError, NoViolation

OPTIMALITY_TOL = 1e-9

SUBOPTIMAL_NOTE = "sub-optimal violation: not a DI-guaranteed bound"
NO_VIOLATION_NOTE = "no violation of the local bound: not certified"


def min_entropy(p: float) -> float:
    if not 0 < p <= 1:
        raise DomainError(f"probability must lie in (0, 1], got {p}")
    return -log2(p)


def rmin_closed_form(n: int) -> float:
    """Guaranteed bits at optimal violation with floor(n/2) Bell pairs."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return 2 - log2(1 + 1 / sqrt(n))


# Cells with fewer Bell pairs than the optimum needs.
_UNDER_RESOURCED = {
    (4, 1): lambda: -log2((3 + sqrt(6)) / 12),
    (5, 1): lambda: 2 - log2(1 + (sqrt(2) + 1) / sqrt(2 * sqrt(2) + 5)),
    (6, 1): lambda: 2 - log2(1 + 3 / sqrt(10)),
    (6, 2): lambda: 2 - log2(1 + 1 / sqrt(2)),
}

TABLE1_N = range(2, 7)
TABLE1_M = range(1, 4)


def table1_value(n: int, m: int) -> float:
    """Closed-form entry of the (n, m) randomness table, n in 2..6, m in 1..3."""
    if n not in TABLE1_N or m not in TABLE1_M:
        raise IndexError(f"table cell (n={n}, m={m}) out of range")
    if (n, m) in _UNDER_RESOURCED:
        return _UNDER_RESOURCED[(n, m)]()
    return rmin_closed_form(n)


@dataclass
class RandomnessReport:
    n: int
    m: int
    bell_value: float
    local_bound: int
    violated: bool
    certified: bool
    p_star: float
    r_min: float
    r_max: float
    per_pair_pmax: np.ndarray = field(repr=False)
    note: str = ""

    @property
    def per_pair_entropy(self) -> np.ndarray:
        return -np.log2(self.per_pair_pmax)

    def to_dict(self) -> dict:
        pmax = self.per_pair_pmax
        bits = self.per_pair_entropy
        per_pair = [
            {"i": i + 1, "y": y + 1, "p_max": float(pmax[i, y]), "r_bits": float(bits[i, y])}
            for i, y in np.ndindex(pmax.shape)
        ]
        return {
            "n": self.n,
            "m": self.m,
            "bell_value": self.bell_value,
            "local_bound": self.local_bound,
            "violated": self.violated,
            "certified": self.certified,
            "p_star": self.p_star,
            "r_min_bits": self.r_min,
            "r_max_bits": self.r_max,
            "per_pair": per_pair,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def summary(self) -> str:
        lines = [
            f"n={self.n} m={self.m}",
            f"Bell value   {self.bell_value:.4f}  (local bound {self.local_bound}, "
            f"quantum optimum {quantum_optimum(self.n):.4f})",
            f"p*           {self.p_star:.4f}",
            f"R_min        {self.r_min:.4f} bits",
            f"R_max        {self.r_max:.4f} bits",
            f"certified    {'yes' if self.certified else 'no'}",
        ]
        if self.note:
            lines.append(f"note         {self.note}")
        return "\n".join(lines)


def certify(behavior: Behavior, scheme: EncodingScheme, m: int) -> RandomnessReport:
    """Per-pair min-entropies of a behavior, with R_min and R_max.

    The figures are a device-independent guarantee only at the optimal
    violation, where the behavior is unique. Below it the report is
    returned with ``certified=False`` and an explanatory note.
    """
    problems = validate(behavior)
    if problems:
        raise ValueError(f"behavior fails validation: {problems[0]} ({len(problems)} total)")
    value = bell_value_of(behavior, scheme)
    bound = local_bound_closed(scheme.n)
    violated = value > bound
    optimal = abs(value - quantum_optimum(scheme.n)) <= OPTIMALITY_TOL * max(1.0, value)
    pmax = per_pair_max(behavior)
    p_star, _ = max_probability(behavior)
    note = ""
    if not violated:
        note = NO_VIOLATION_NOTE
        warnings.warn(f"Bell value {value:.6f} does not exceed {bound}", NoViolation, stacklevel=2)
    elif not optimal:
        note = SUBOPTIMAL_NOTE
    return RandomnessReport(
        n=scheme.n,
        m=m,
        bell_value=value,
        local_bound=bound,
        violated=violated,
        certified=violated and optimal,
        p_star=p_star,
        r_min=min_entropy(p_star),
        r_max=min_entropy(float(pmax.min())),
        per_pair_pmax=pmax,
        note=note,
    )
