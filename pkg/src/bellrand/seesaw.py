"""See-saw maximization of the Bell value at fixed local dimension.

Each sweep updates the shared state (top eigenvector of the Bell
operator), then every Alice observable, then every Bob observable. Every
update is the exact maximizer with the rest held fixed, so the value never
decreases within a restart.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .encoding import EncodingScheme, build_scheme
from .realization import DENSE_MAX_DIM, Observable, Realization, bell_operator
from .errors import TooLargeForDense

__all__ = [
    "SeesawConfig",
    "SeesawResult",
    "bell_operator",
    "seesaw_optimize",
    "spectral_sign",
]

log = logging.getLogger(__name__)

TIE_TOL = 1e-12


@dataclass(frozen=True)
class SeesawConfig:
    n: int
    local_dim: int = 2
    restarts: int = 50
    max_iterations: int = 5000
    # a restart stops once the per-sweep gain is below convergence_tol and
    # no observable entry moved by more than observable_tol
    convergence_tol: float = 1e-12
    observable_tol: float = 1e-11
    seed: int = 0

    def __post_init__(self):
        d = self.local_dim
        if d < 2 or d & (d - 1):
            raise ValueError(f"local_dim must be a power of two >= 2, got {d}")
        if d * d > DENSE_MAX_DIM:
            raise TooLargeForDense(f"global dimension {d * d} exceeds {DENSE_MAX_DIM}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.convergence_tol <= 0 or self.observable_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class SeesawResult:
    best_value: float
    best_realization: Realization
    iterations_used: int
    per_restart_values: list[float]
    converged: bool
    best_restart: int = 0
    per_restart_converged: list[bool] = field(default_factory=list)
    histories: list[np.ndarray] = field(default_factory=list, repr=False)


def _sign_2x2(m: np.ndarray) -> np.ndarray:
    a = (m[..., 0, 0].real + m[..., 1, 1].real) / 2
    vz = (m[..., 0, 0].real - m[..., 1, 1].real) / 2
    off = m[..., 1, 0]
    r = np.sqrt(vz**2 + np.abs(off) ** 2)
    s_hi = np.where(a + r <= -TIE_TOL, -1.0, 1.0)
    s_lo = np.where(a - r <= -TIE_TOL, -1.0, 1.0)
    # sign(M) = (s_hi + s_lo)/2 I + (s_hi - s_lo)/2 * (v.sigma)/|v|
    half_sum = (s_hi + s_lo) / 2
    half_diff = np.divide(s_hi - s_lo, 2 * r, out=np.zeros_like(r), where=r > 0)
    out = np.empty(m.shape, dtype=complex)
    out[..., 0, 0] = half_sum + half_diff * vz
    out[..., 1, 1] = half_sum - half_diff * vz
    out[..., 1, 0] = half_diff * off
    out[..., 0, 1] = half_diff * np.conj(off)
    return out


def spectral_sign(m: np.ndarray) -> np.ndarray:
    """U diag(sign(lambda)) U^dagger for a Hermitian matrix or a stack of them.

    Eigenvalues with |lambda| < 1e-12 map to +1.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[-1] == 2:
        return _sign_2x2(m)
    w, u = np.linalg.eigh(m)
    s = np.where(w <= -TIE_TOL, -1.0, 1.0)
    return np.einsum("...ab,...b,...cb->...ac", u, s, u.conj())


def _random_hermitian(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    x = rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))
    return (x + np.swapaxes(x.conj(), -1, -2)) / 2


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    # counter-based stream keyed by (seed, restart): restarts are order independent
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), restart])))


def _top_state(scheme: EncodingScheme, a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    w = bell_operator(scheme, a, b)
    vals, vecs = np.linalg.eigh(w)
    return float(vals[-1]), vecs[:, -1]


def _run_restart(cfg: SeesawConfig, scheme: EncodingScheme, restart: int):
    d = cfg.local_dim
    signs = scheme.signs.astype(float)
    rng = _restart_rng(cfg.seed, restart)
    a = spectral_sign(_random_hermitian(rng, scheme.size, d))
    b = spectral_sign(_random_hermitian(rng, cfg.n, d))

    history: list[float] = []
    converged = False
    prev = -np.inf
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        v_state, psi = _top_state(scheme, a, b)
        mat = psi.reshape(d, d)
        mat_h = mat.conj().T

        steer = np.tensordot(signs, b, axes=(1, 0))
        s_alice = np.einsum("ab,icb,cd->iad", mat, steer, mat_h)
        a_new = spectral_sign(s_alice)
        v_alice = float(np.einsum("iab,iba->", a_new, s_alice).real)

        dual = np.tensordot(signs.T, a_new, axes=(1, 0))
        s_bob = np.einsum("ka,yab,bl->ylk", mat_h, dual, mat)
        b_new = spectral_sign(s_bob)
        v_bob = float(np.einsum("yab,yba->", b_new, s_bob).real)

        history.extend((v_state, v_alice, v_bob))
        moved = max(np.abs(a_new - a).max(), np.abs(b_new - b).max())
        a, b = a_new, b_new
        if v_bob - prev <= cfg.convergence_tol * max(1.0, abs(v_bob)) and moved <= cfg.observable_tol:
            converged = True
            break
        prev = v_bob

    value, psi = _top_state(scheme, a, b)
    history.append(value)
    return value, psi, a, b, it, converged, np.array(history)


def seesaw_optimize(config: SeesawConfig) -> SeesawResult:
    scheme = build_scheme(config.n)
    m = config.local_dim.bit_length() - 1

    values: list[float] = []
    flags: list[bool] = []
    histories: list[np.ndarray] = []
    best = None
    for r in range(config.restarts):
        value, psi, a, b, iters, conv, hist = _run_restart(config, scheme, r)
        values.append(value)
        flags.append(conv)
        histories.append(hist)
        if best is None or value > best[0]:
            best = (value, psi, a, b, iters, conv, r)
        log.debug("restart %d: value %.12f after %d sweeps (converged=%s)", r, value, iters, conv)

    value, psi, a, b, iters, conv, r = best
    real = Realization(
        n=config.n,
        m=m,
        state=psi,
        alice=tuple(Observable.from_matrix(x) for x in a),
        bob=tuple(Observable.from_matrix(x) for x in b),
        scheme=scheme,
        label=f"see-saw d={config.local_dim} seed={config.seed}",
    )
    return SeesawResult(
        best_value=value,
        best_realization=real,
        iterations_used=iters,
        per_restart_values=values,
        converged=conv,
        best_restart=r,
        per_restart_converged=flags,
        histories=histories,
    )
