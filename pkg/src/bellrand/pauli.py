"""Phase-tracked Pauli strings in symplectic (bitmask) form.

A string on ``q`` qubits is ``i**phase_exp`` times a tensor product of
single-qubit factors; bit ``k`` of ``xmask``/``zmask`` describes tensor
factor ``k`` counted from the left. (x, z) = (0,0), (1,0), (1,1), (0,1) stand
for I, X, Y, Z, with Y the usual Hermitian matrix (Y = iXZ).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, TooLargeForDense, UnsupportedPhase

DENSE_MAX_QUBITS = 12

_LABELS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LABELS.items()}
_PHASE_PREFIX = ["", "i", "-", "-i"]

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    qubits: int
    xmask: int = 0
    zmask: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError("a Pauli string needs at least one qubit")
        limit = 1 << self.qubits
        if not (0 <= self.xmask < limit and 0 <= self.zmask < limit):
            raise ValueError("mask wider than the qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def identity(cls, qubits: int) -> "PauliString":
        return cls(qubits)

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliString":
        """Build from a label such as ``"XIZ"`` or ``"-YY"``; sign must be +-1."""
        label = label.strip()
        exp = 0
        if label.startswith("-"):
            exp, label = 2, label[1:]
        elif label.startswith("+"):
            label = label[1:]
        if sign == -1:
            exp += 2
        elif sign != 1:
            raise UnsupportedPhase(f"sign must be +1 or -1, got {sign}")
        x = z = 0
        for k, ch in enumerate(label.upper()):
            bx, bz = _BITS[ch]
            x |= bx << k
            z |= bz << k
        return cls(len(label), x, z, exp)

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase_exp]

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    @property
    def sign(self) -> int:
        """Real phase as +-1; only defined for Hermitian strings."""
        if not self.is_hermitian:
            raise UnsupportedPhase(f"{self} carries an imaginary phase")
        return 1 if self.phase_exp == 0 else -1

    @property
    def masks(self) -> tuple[int, int]:
        return self.xmask, self.zmask

    @property
    def label(self) -> str:
        return "".join(
            _LABELS[((self.xmask >> k) & 1, (self.zmask >> k) & 1)] for k in range(self.qubits)
        )

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase_exp] + self.label

    def __neg__(self) -> "PauliString":
        return PauliString(self.qubits, self.xmask, self.zmask, self.phase_exp + 2)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def y_count(self) -> int:
        return _popcount(self.xmask & self.zmask)

    def tensor(self, other: "PauliString") -> "PauliString":
        """``self (x) other`` with ``other`` appended on the right."""
        return PauliString(
            self.qubits + other.qubits,
            self.xmask | (other.xmask << self.qubits),
            self.zmask | (other.zmask << self.qubits),
            self.phase_exp + other.phase_exp,
        )

    def padded(self, qubits: int) -> "PauliString":
        """Extend with identity factors up to ``qubits`` in total."""
        if qubits < self.qubits:
            raise DimensionMismatch(f"cannot pad {self.qubits} qubits down to {qubits}")
        return PauliString(qubits, self.xmask, self.zmask, self.phase_exp)


def _same_size(p: PauliString, q: PauliString) -> None:
    if p.qubits != q.qubits:
        raise DimensionMismatch(f"qubit counts differ: {p.qubits} vs {q.qubits}")


def multiply(p: PauliString, q: PauliString) -> PauliString:
    _same_size(p, q)
    x, z = p.xmask ^ q.xmask, p.zmask ^ q.zmask
    # Y = i X Z on each factor; moving Z's of p past X's of q costs (-1) each.
    exp = (
        p.phase_exp
        + q.phase_exp
        + p.y_count()
        + q.y_count()
        + 2 * _popcount(p.zmask & q.xmask)
        - _popcount(x & z)
    )
    return PauliString(p.qubits, x, z, exp)


def anticommutes(p: PauliString, q: PauliString) -> bool:
    _same_size(p, q)
    return bool((_popcount(p.xmask & q.zmask) + _popcount(p.zmask & q.xmask)) & 1)


def transpose_sign(p: PauliString) -> int:
    """The sign s with P^T = s P (one factor of -1 per Y)."""
    if not p.is_hermitian:
        raise UnsupportedPhase(f"{p} carries an imaginary phase")
    return -1 if p.y_count() & 1 else 1


def to_dense(p: PauliString) -> np.ndarray:
    if p.qubits > DENSE_MAX_QUBITS:
        raise TooLargeForDense(f"{p.qubits} qubits exceeds the dense limit {DENSE_MAX_QUBITS}")
    mat = reduce(np.kron, (SIGMA[ch] for ch in p.label))
    return p.phase * mat


def maxent_expectation(p: PauliString, q: PauliString) -> float:
    """<Phi|P (x) Q|Phi> for |Phi> = sum_j |jj>/sqrt(d), d = 2**qubits.

    Uses <Phi|P (x) Q|Phi> = tr(P^T Q)/d and trace orthogonality of
    distinct Pauli strings, so no matrices are formed.
    """
    _same_size(p, q)
    t = transpose_sign(p)
    qs = q.sign
    if p.masks != q.masks:
        return 0.0
    return float(t * p.sign * qs)


def maxent_state(qubits: int) -> np.ndarray:
    """Dense |Phi_d> on the A|B cut with A as the leading tensor factor."""
    d = 1 << qubits
    if 2 * qubits > DENSE_MAX_QUBITS:
        raise TooLargeForDense(f"global dimension {d * d} exceeds the dense limit")
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return psi
