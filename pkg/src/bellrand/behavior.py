"""Joint outcome probabilities p(a, b | i, y) and their checks.

Outcome a in {0, 1} corresponds to eigenvalue (-1)**a, so for dichotomic
observables

    p(a, b | i, y) = (1 + (-1)**a <A_i> + (-1)**b <B_y> + (-1)**(a+b) E_iy) / 4.

Up to ``TABLE_MAX_N`` settings the full table is stored. Beyond that a
behavior keeps only the correlators and marginals it was built from and
produces table entries on demand.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass

import numpy as np

from .encoding import EncodingScheme
from .errors import SchemeMismatch, TooLargeForDense
from .realization import Realization, correlators, marginals

log = logging.getLogger(__name__)

TABLE_MAX_N = 8
NORMALIZATION_TOL = 1e-12
RANGE_TOL = 1e-12
NO_SIGNALING_TOL = 1e-10
TIE_TOL = 1e-12

_PARITY = np.array([1.0, -1.0])


def _table_from_moments(corr: np.ndarray, ma: np.ndarray, mb: np.ndarray) -> np.ndarray:
    sa = _PARITY[None, None, :, None]
    sb = _PARITY[None, None, None, :]
    return (
        1.0
        + sa * ma[:, None, None, None]
        + sb * mb[None, :, None, None]
        + sa * sb * corr[:, :, None, None]
    ) / 4.0


def _clamp(table: np.ndarray) -> np.ndarray:
    tiny = (table < 0) & (table >= -RANGE_TOL)
    if tiny.any():
        log.info("clamped %d probabilities in [-1e-12, 0) to zero", int(tiny.sum()))
        table = np.where(tiny, 0.0, table)
    return table


@dataclass(frozen=True, eq=False)
class Behavior:
    """Observed statistics for ``n`` Bob settings and 2**(n-1) Alice settings.

    Either ``table`` (shape (2**(n-1), n, 2, 2), 0-based) is given, or the
    compact moments ``corr``, ``alice_marg`` and ``bob_marg``.
    """

    n: int
    table: np.ndarray | None = None
    corr: np.ndarray | None = None
    alice_marg: np.ndarray | None = None
    bob_marg: np.ndarray | None = None

    @classmethod
    def from_table(cls, table: np.ndarray) -> "Behavior":
        table = np.asarray(table, dtype=float)
        n = table.shape[1]
        if table.shape != (1 << (n - 1), n, 2, 2):
            raise ValueError(f"table shape {table.shape} does not match n={n}")
        return cls(n=n, table=table)

    @property
    def materialized(self) -> bool:
        return self.table is not None

    @property
    def size(self) -> int:
        """Number of entries, n * 2**(n+1)."""
        return self.n * (1 << (self.n + 1))

    def probabilities(self) -> np.ndarray:
        if self.table is not None:
            return self.table
        return _clamp(_table_from_moments(self.corr, self.alice_marg, self.bob_marg))

    def correlators(self) -> np.ndarray:
        if self.corr is not None:
            return self.corr
        t = self.table
        return t[..., 0, 0] - t[..., 0, 1] - t[..., 1, 0] + t[..., 1, 1]

    def p(self, i: int, y: int, a: int, b: int) -> float:
        """Entry with 1-based setting indices."""
        return float(self.probabilities()[i - 1, y - 1, a, b])

    def to_rows(self):
        t = self.probabilities()
        for idx in np.ndindex(t.shape):
            i, y, a, b = idx
            yield i + 1, y + 1, a, b, float(t[idx])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "y", "a", "b", "p"])
        for i, y, a, b, p in self.to_rows():
            w.writerow([i, y, a, b, f"{p:.17g}"])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{"i": i, "y": y, "a": a, "b": b, "p": p} for i, y, a, b, p in self.to_rows()]
        return json.dumps({"n": self.n, "entries": rows}, indent=1)


def compute_behavior(real: Realization, route: str = "auto") -> Behavior:
    """Behavior of a realization, from its correlators and marginals.

    ``route="projector"`` instead evaluates every entry as
    <psi| Pi_a (x) Pi_b |psi> with explicit projector matrices.
    """
    if route == "auto":
        if real.symbolic:
            route = "symbolic"
        elif real.dense_ok:
            route = "dense"
        else:
            raise TooLargeForDense("no symbolic shortcut and the dense route is too large")
    if route == "projector":
        return _projector_behavior(real)
    corr = correlators(real, route)
    ma, mb = marginals(real, route)
    if real.n > TABLE_MAX_N:
        return Behavior(n=real.n, corr=corr, alice_marg=ma, bob_marg=mb)
    return Behavior(n=real.n, table=_clamp(_table_from_moments(corr, ma, mb)))


def _projector_behavior(real: Realization) -> Behavior:
    psi = real.state_vector()
    d = real.local_dim
    eye = np.eye(d)
    a_ops = real.alice_stack()
    b_ops = real.bob_stack()
    table = np.zeros((len(a_ops), real.n, 2, 2))
    for i, ai in enumerate(a_ops):
        for y, by in enumerate(b_ops):
            for a in (0, 1):
                pa = (eye + _PARITY[a] * ai) / 2
                for b in (0, 1):
                    pb = (eye + _PARITY[b] * by) / 2
                    table[i, y, a, b] = (psi.conj() @ np.kron(pa, pb) @ psi).real
    return Behavior.from_table(_clamp(table))


def bell_value_of(behavior: Behavior, scheme: EncodingScheme) -> float:
    if scheme.n != behavior.n:
        raise SchemeMismatch(f"behavior has n={behavior.n}, scheme has n={scheme.n}")
    return float(np.sum(scheme.signs * behavior.correlators()))


def max_probability(behavior: Behavior) -> tuple[float, list[tuple[int, int, int, int]]]:
    """Largest entry and every (i, y, a, b), 1-based settings, within 1e-12 of it."""
    t = behavior.probabilities()
    top = float(t.max())
    hits = np.argwhere(t >= top - TIE_TOL)
    return top, [(int(i) + 1, int(y) + 1, int(a), int(b)) for i, y, a, b in hits]


def per_pair_max(behavior: Behavior) -> np.ndarray:
    """max_{a,b} p(a, b | i, y) as a (2**(n-1), n) array."""
    return behavior.probabilities().max(axis=(2, 3))


@dataclass(frozen=True)
class Violation:
    kind: str  # "normalization", "range" or "no-signaling"
    index: tuple
    magnitude: float

    def __str__(self) -> str:
        return f"{self.kind} at {self.index}: {self.magnitude:.3e}"


def validate(behavior: Behavior) -> list[Violation]:
    """Normalization, range and no-signaling checks; empty when all pass.

    Indices in the report are 1-based settings (i, y) and outcomes a, b.
    """
    t = behavior.probabilities()
    out: list[Violation] = []

    norm_err = np.abs(t.sum(axis=(2, 3)) - 1.0)
    for i, y in np.argwhere(norm_err > NORMALIZATION_TOL):
        out.append(Violation("normalization", (int(i) + 1, int(y) + 1), float(norm_err[i, y])))

    low = -t
    high = t - 1.0
    for idx in np.argwhere((low > RANGE_TOL) | (high > RANGE_TOL)):
        i, y, a, b = (int(v) for v in idx)
        mag = float(max(low[i, y, a, b], high[i, y, a, b]))
        out.append(Violation("range", (i + 1, y + 1, a, b), mag))

    alice = t.sum(axis=3)  # p(a | i, y)
    spread_a = alice.max(axis=1) - alice.min(axis=1)
    for i, a in np.argwhere(spread_a > NO_SIGNALING_TOL):
        out.append(Violation("no-signaling", ("alice", int(i) + 1, int(a)), float(spread_a[i, a])))
    bob = t.sum(axis=2)  # p(b | i, y)
    spread_b = bob.max(axis=0) - bob.min(axis=0)
    for y, b in np.argwhere(spread_b > NO_SIGNALING_TOL):
        out.append(Violation("no-signaling", ("bob", int(y) + 1, int(b)), float(spread_b[y, b])))
    return out
