"""Quantum realizations of the functional: state, Alice's and Bob's observables.

Two evaluation routes are kept side by side. The symbolic route handles
observables that are real combinations of Pauli strings measured on the
maximally entangled state and never forms a matrix. The dense route builds
matrices and works for any state vector; it is limited to a global
dimension of ``DENSE_MAX_DIM``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .encoding import EncodingScheme, build_scheme, copies_required
from .errors import (
    DimensionMismatch,
    InsufficientCopies,
    NotAnticommuting,
    TooLargeForDense,
)
from .pauli import (
    PauliString,
    anticommutes,
    maxent_expectation,
    maxent_state,
    multiply,
    to_dense,
    transpose_sign,
)

DENSE_MAX_DIM = 4096
DICHOTOMIC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Observable:
    """Self-adjoint operator on ``qubits`` qubits.

    Given either as ``terms``, a tuple of (real coefficient, Pauli string),
    or as a dense ``matrix``. Exactly one of the two is set.
    """

    qubits: int
    terms: tuple[tuple[float, PauliString], ...] = ()
    matrix: np.ndarray | None = None
    dichotomic: bool = True

    def __post_init__(self):
        if (self.matrix is None) == (not self.terms):
            raise ValueError("an Observable needs either Pauli terms or a matrix, not both")
        if self.matrix is not None and self.matrix.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"matrix shape {self.matrix.shape} for {self.qubits} qubits")
        for _, p in self.terms:
            if p.qubits != self.qubits:
                raise DimensionMismatch("term acts on the wrong number of qubits")

    @classmethod
    def pauli(cls, p: PauliString, coef: float = 1.0) -> "Observable":
        return cls(p.qubits, terms=((float(coef), p),))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, dichotomic: bool = True) -> "Observable":
        d = matrix.shape[0]
        qubits = d.bit_length() - 1
        if 1 << qubits != d:
            raise DimensionMismatch(f"dimension {d} is not a power of two")
        return cls(qubits, matrix=np.asarray(matrix, dtype=complex), dichotomic=dichotomic)

    @property
    def dim(self) -> int:
        return 1 << self.qubits

    @property
    def symbolic(self) -> bool:
        return self.matrix is None

    def dense(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        if self.qubits > 12:
            raise TooLargeForDense(f"{self.qubits} qubits is too many for a dense matrix")
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for coef, p in self.terms:
            out += coef * to_dense(p)
        return out

    def normalized_trace(self) -> float:
        """tr(O)/d, the expectation on the maximally mixed state."""
        if self.matrix is not None:
            return float(np.trace(self.matrix).real / self.dim)
        return float(sum(c * p.sign for c, p in self.terms if p.masks == (0, 0)))

    def padded(self, qubits: int) -> "Observable":
        if self.matrix is not None:
            extra = np.eye(1 << (qubits - self.qubits))
            return Observable(qubits, matrix=np.kron(self.matrix, extra), dichotomic=self.dichotomic)
        return Observable(
            qubits, terms=tuple((c, p.padded(qubits)) for c, p in self.terms), dichotomic=self.dichotomic
        )

    def transposed(self) -> "Observable":
        if self.matrix is not None:
            return Observable(self.qubits, matrix=self.matrix.T.copy(), dichotomic=self.dichotomic)
        return Observable(
            self.qubits,
            terms=tuple((c * transpose_sign(p), p) for c, p in self.terms),
            dichotomic=self.dichotomic,
        )

    def square_residual(self) -> float:
        """Largest deviation of O @ O from the identity.

        Computed densely up to 4 qubits and by collecting Pauli products
        above that.
        """
        if self.matrix is not None or self.qubits <= 4:
            m = self.dense()
            return float(np.abs(m @ m - np.eye(self.dim)).max())
        acc: dict[tuple[int, int], complex] = defaultdict(complex)
        for (c1, p1), (c2, p2) in itertools.product(self.terms, repeat=2):
            prod = multiply(p1, p2)
            acc[prod.masks] += c1 * c2 * prod.phase
        acc[(0, 0)] -= 1.0
        return float(max(abs(v) for v in acc.values()))


@dataclass(frozen=True)
class MaxEntangled:
    """sum_j |jj>/sqrt(d) with d = 2**qubits on each side."""

    qubits: int

    @property
    def local_dim(self) -> int:
        return 1 << self.qubits

    def vector(self) -> np.ndarray:
        return maxent_state(self.qubits)


State = Union[MaxEntangled, np.ndarray]


@dataclass(frozen=True, eq=False)
class Realization:
    """A shared pure state with Alice's 2**(n-1) and Bob's n observables.

    ``m`` is the number of qubits held by each party, so the local
    dimension is 2**m and the global dimension 4**m.
    """

    n: int
    m: int
    state: State
    alice: tuple[Observable, ...]
    bob: tuple[Observable, ...]
    scheme: EncodingScheme = field(repr=False)
    label: str = ""

    def __post_init__(self):
        if len(self.alice) != self.scheme.size or len(self.bob) != self.n:
            raise DimensionMismatch(
                f"expected {self.scheme.size} Alice and {self.n} Bob observables, "
                f"got {len(self.alice)} and {len(self.bob)}"
            )
        if any(o.qubits != self.m for o in (*self.alice, *self.bob)):
            raise DimensionMismatch(f"all observables must act on {self.m} qubits")
        if isinstance(self.state, MaxEntangled):
            if self.state.qubits != self.m:
                raise DimensionMismatch("state and observables disagree on the local dimension")
        elif np.asarray(self.state).shape != (self.global_dim,):
            raise DimensionMismatch(f"state vector must have length {self.global_dim}")

    @property
    def local_dim(self) -> int:
        return 1 << self.m

    @property
    def global_dim(self) -> int:
        return 1 << (2 * self.m)

    @property
    def symbolic(self) -> bool:
        """True when the Pauli/maximally-entangled shortcut applies."""
        return isinstance(self.state, MaxEntangled) and all(
            o.symbolic for o in (*self.alice, *self.bob)
        )

    @property
    def dense_ok(self) -> bool:
        return self.global_dim <= DENSE_MAX_DIM

    def state_vector(self) -> np.ndarray:
        if isinstance(self.state, MaxEntangled):
            return self.state.vector()
        return np.asarray(self.state, dtype=complex)

    def alice_stack(self) -> np.ndarray:
        self._require_dense()
        return np.stack([o.dense() for o in self.alice])

    def bob_stack(self) -> np.ndarray:
        self._require_dense()
        return np.stack([o.dense() for o in self.bob])

    def _require_dense(self) -> None:
        if not self.dense_ok:
            raise TooLargeForDense(
                f"global dimension {self.global_dim} exceeds the dense limit {DENSE_MAX_DIM}"
            )

    def dichotomic_residual(self) -> float:
        return max(o.square_residual() for o in (*self.alice, *self.bob))


# -- Bob's anticommuting family ----------------------------------------------


def anticommuting_family(m: int) -> list[PauliString]:
    """The 2m+1 pairwise anticommuting strings on m qubits.

    Z..Z X I..I and Z..Z Y I..I for each position, then Z^{(x)m}.
    """
    out = []
    for k in range(m):
        zs = (1 << k) - 1
        out.append(PauliString(m, xmask=1 << k, zmask=zs))
        out.append(PauliString(m, xmask=1 << k, zmask=zs | (1 << k)))
    out.append(PauliString(m, zmask=(1 << m) - 1))
    return out


def canonical_bob_observables(n: int) -> list[PauliString]:
    m = copies_required(n)
    return anticommuting_family(m)[:n]


def _pauli_gram(bob: Sequence[Observable]) -> np.ndarray:
    """G[y, y'] = tr(B_y B_y')/d for Pauli-sum observables."""
    n = len(bob)
    gram = np.zeros((n, n))
    for a in range(n):
        for b in range(a, n):
            val = 0.0
            for c1, p1 in bob[a].terms:
                for c2, p2 in bob[b].terms:
                    if p1.masks == p2.masks:
                        val += c1 * c2 * p1.sign * p2.sign
            gram[a, b] = gram[b, a] = val
    return gram


def _check_anticommuting(bob: Sequence[Observable]) -> None:
    for a, b in itertools.combinations(range(len(bob)), 2):
        x, y = bob[a], bob[b]
        if x.symbolic and y.symbolic and len(x.terms) == 1 and len(y.terms) == 1:
            ok = anticommutes(x.terms[0][1], y.terms[0][1])
        else:
            mx, my = x.dense(), y.dense()
            ok = np.abs(mx @ my + my @ mx).max() < 1e-10
        if not ok:
            raise NotAnticommuting(f"Bob observables {a + 1} and {b + 1} do not anticommute")


def _steering_sum(signs: np.ndarray, bob: Sequence[Observable], scale: float) -> Observable:
    """scale * sum_y signs[y] * B_y^T as an Observable.

    The transpose makes every correlator on the maximally entangled state
    come out with the sign of the coefficient.
    """
    qubits = bob[0].qubits
    if all(o.symbolic for o in bob):
        terms = []
        for s, o in zip(signs, bob):
            for c, p in o.terms:
                terms.append((float(scale * s * c * transpose_sign(p)), p))
        return Observable(qubits, terms=tuple(terms))
    mat = sum(scale * s * o.dense().T for s, o in zip(signs, bob))
    return Observable(qubits, matrix=np.asarray(mat, dtype=complex))


def alice_observable(scheme: EncodingScheme, bob: Sequence[Observable], i: int) -> Observable:
    """Optimal Alice setting ``i`` (1-based) for anticommuting Bob observables.

    The normalized signed sum of Bob's observables with weight 1/sqrt(n),
    transposed so that it pairs with the maximally entangled state.
    """
    if not 1 <= i <= scheme.size:
        raise IndexError(f"Alice index {i} outside 1..{scheme.size}")
    _check_anticommuting(bob)
    return _steering_sum(scheme.signs[i - 1], bob, 1 / np.sqrt(scheme.n))


def steering_realization(
    n: int, m: int, bob_strings: Sequence[PauliString], label: str = ""
) -> Realization:
    """Maximally entangled state with Alice set to the normalized steering sums.

    Alice's setting i is (sum_y c_iy B_y^T) / N_i with N_i the norm of
    the sum on the state. Bob's strings need not anticommute; the result is
    dichotomic whenever each signed sum squares to a multiple of identity.
    """
    scheme = build_scheme(n)
    bob = tuple(Observable.pauli(p) for p in bob_strings)
    gram = _pauli_gram(bob)
    signs = scheme.signs.astype(float)
    norms = np.sqrt(np.einsum("iy,yz,iz->i", signs, gram, signs))
    alice = tuple(_steering_sum(signs[i], bob, 1 / norms[i]) for i in range(scheme.size))
    return Realization(n, m, MaxEntangled(m), alice, bob, scheme, label)


def canonical_realization(n: int) -> Realization:
    m = copies_required(n)
    scheme = build_scheme(n)
    bob = tuple(Observable.pauli(p) for p in canonical_bob_observables(n))
    _check_anticommuting(bob)
    scale = 1 / np.sqrt(n)
    alice = tuple(_steering_sum(scheme.signs[i], bob, scale) for i in range(scheme.size))
    return Realization(n, m, MaxEntangled(m), alice, bob, scheme, label="canonical")


def single_copy_realization_n4() -> Realization:
    """One Bell pair with B = (X, Y, Z, Z); Alice normalized by sqrt(2) or sqrt(6)."""
    strings = [PauliString.from_label(s) for s in ("X", "Y", "Z", "Z")]
    return steering_realization(4, 1, strings, label="single-copy n=4")


def repeated_observable_realization(n: int, m: int) -> Realization:
    """Bob uses the 2m+1 anticommuting strings on m qubits and repeats the last.

    For n = 4, m = 1 this is the single-copy construction above. It is the
    natural extension to any n > 2m + 1 and is not claimed to be optimal.
    """
    if m < 1:
        raise InsufficientCopies("need at least one qubit per party")
    family = anticommuting_family(m)
    strings = [family[min(y, len(family) - 1)] for y in range(n)]
    return steering_realization(n, m, strings, label=f"repeated-observable m={m}")


def padded_realization(n: int, m: int) -> Realization:
    base = canonical_realization(n)
    if m < base.m:
        raise InsufficientCopies(f"n={n} needs at least {base.m} copies, got {m}")
    if m == base.m:
        return base
    return Realization(
        n,
        m,
        MaxEntangled(m),
        tuple(o.padded(m) for o in base.alice),
        tuple(o.padded(m) for o in base.bob),
        base.scheme,
        label=f"canonical padded to m={m}",
    )


# -- expectation values -------------------------------------------------------


def _symbolic_correlators(real: Realization) -> np.ndarray:
    d_terms: dict[tuple[int, int], list[tuple[int, float]]] = defaultdict(list)
    for y, ob in enumerate(real.bob):
        for c, p in ob.terms:
            d_terms[p.masks].append((y, c * p.sign))
    out = np.zeros((len(real.alice), real.n))
    for i, oa in enumerate(real.alice):
        row = out[i]
        for c, p in oa.terms:
            hits = d_terms.get(p.masks)
            if not hits:
                continue
            # maxent_expectation(P, Q) = transpose_sign(P) * sign(P) * sign(Q) for equal masks
            w = c * transpose_sign(p) * p.sign
            for y, cb in hits:
                row[y] += w * cb
    return out


def _reduced(real: Realization) -> np.ndarray:
    d = real.local_dim
    return real.state_vector().reshape(d, d)


def _dense_correlators(real: Realization) -> np.ndarray:
    psi = _reduced(real)
    a = real.alice_stack()
    b = real.bob_stack()
    x = np.einsum("ka,iab,bl->ikl", psi.conj().T, a, psi)
    return np.einsum("ikl,ykl->iy", x, b).real


def correlators(real: Realization, route: str = "auto") -> np.ndarray:
    """Matrix E[i, y] = <A_i (x) B_y>, 0-based indices."""
    if route == "auto":
        route = "symbolic" if real.symbolic else "dense"
    if route == "symbolic":
        if not real.symbolic:
            raise ValueError("symbolic route needs Pauli observables on the maximally entangled state")
        return _symbolic_correlators(real)
    return _dense_correlators(real)


def marginals(real: Realization, route: str = "auto") -> tuple[np.ndarray, np.ndarray]:
    """Single-party expectations <A_i (x) I> and <I (x) B_y>."""
    if route == "auto":
        route = "symbolic" if real.symbolic else "dense"
    if route == "symbolic":
        # both reduced states of |Phi_d> are maximally mixed
        return (
            np.array([o.normalized_trace() for o in real.alice]),
            np.array([o.normalized_trace() for o in real.bob]),
        )
    psi = _reduced(real)
    rho_a = psi @ psi.conj().T
    rho_b = psi.T @ psi.conj()
    ma = np.einsum("ab,iba->i", rho_a, real.alice_stack()).real
    mb = np.einsum("ab,yba->y", rho_b, real.bob_stack()).real
    return ma, mb


def bell_value(real: Realization, route: str = "auto") -> float:
    corr = correlators(real, route)
    return float(np.sum(real.scheme.signs * corr))


def omegas(real: Realization, route: str = "auto") -> np.ndarray:
    """|| sum_y c_iy (I (x) B_y) |psi> || for every Alice index."""
    if route == "auto":
        route = "symbolic" if real.symbolic else "dense"
    signs = real.scheme.signs.astype(float)
    if route == "symbolic":
        gram = _pauli_gram(real.bob)
        return np.sqrt(np.einsum("iy,yz,iz->i", signs, gram, signs))
    psi = _reduced(real)
    steer = np.tensordot(signs, real.bob_stack(), axes=(1, 0))
    # (I (x) C)|psi> reshaped is psi @ C^T
    vecs = np.einsum("ab,icb->iac", psi, steer)
    return np.sqrt(np.einsum("iac,iac->i", vecs.conj(), vecs).real)


def omega(real: Realization, i: int, route: str = "auto") -> float:
    if not 1 <= i <= real.scheme.size:
        raise IndexError(f"Alice index {i} outside 1..{real.scheme.size}")
    return float(omegas(real, route)[i - 1])


def bell_operator(
    scheme: EncodingScheme, alice: Sequence[Observable] | np.ndarray, bob: Sequence[Observable] | np.ndarray
) -> np.ndarray:
    """Dense sum_{i,y} c_iy A_i (x) B_y."""
    a = alice if isinstance(alice, np.ndarray) else np.stack([o.dense() for o in alice])
    b = bob if isinstance(bob, np.ndarray) else np.stack([o.dense() for o in bob])
    d = a.shape[-1]
    if d * d > DENSE_MAX_DIM:
        raise TooLargeForDense(f"global dimension {d * d} exceeds the dense limit {DENSE_MAX_DIM}")
    steer = np.tensordot(scheme.signs.astype(float), b, axes=(1, 0))
    return np.einsum("iab,icd->acbd", a, steer).reshape(d * d, d * d)


@dataclass(frozen=True)
class SosCertificate:
    beta: float
    gap: float
    min_eigenvalue: float | None


def sos_certificate(real: Realization) -> SosCertificate:
    """beta = sum_i omega_i, the gap <gamma> = beta - <B>, and the spectrum floor of gamma.

    ``min_eigenvalue`` is None when the realization is too large for a
    dense matrix.
    """
    beta = float(np.sum(omegas(real)))
    gap = beta - bell_value(real)
    if not real.dense_ok:
        return SosCertificate(beta, gap, None)
    w = bell_operator(real.scheme, real.alice_stack(), real.bob_stack())
    gamma = beta * np.eye(w.shape[0]) - w
    lowest = float(np.linalg.eigvalsh(gamma)[0])
    return SosCertificate(beta, gap, lowest)


def max_anticommuting_set_size_pauli(qubits: int) -> int:
    """Largest pairwise anticommuting set of Pauli strings, by exhaustive clique search."""
    if not 1 <= qubits <= 3:
        raise ValueError(f"exhaustive search limited to 1..3 qubits, got {qubits}")
    strings = [
        PauliString(qubits, x, z)
        for x in range(1 << qubits)
        for z in range(1 << qubits)
        if x or z
    ]
    k = len(strings)
    adj = [0] * k
    for a, b in itertools.combinations(range(k), 2):
        if anticommutes(strings[a], strings[b]):
            adj[a] |= 1 << b
            adj[b] |= 1 << a

    best = 0

    def expand(size: int, candidates: int) -> None:
        nonlocal best
        if candidates == 0:
            best = max(best, size)
            return
        if size + bin(candidates).count("1") <= best:
            return
        while candidates:
            v = candidates.bit_length() - 1
            candidates &= ~(1 << v)
            expand(size + 1, candidates & adj[v])
            if size + bin(candidates).count("1") <= best:
                return

    expand(0, (1 << k) - 1)
    return best
