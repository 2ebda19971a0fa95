import numpy as np
import pytest

from bellrand.behavior import compute_behavior, max_probability, validate
from bellrand.encoding import build_scheme, local_bound_closed, quantum_optimum
from bellrand.errors import TooLargeForDense
from bellrand.pauli import SIGMA
from bellrand.randomness import certify
from bellrand.realization import canonical_realization, single_copy_realization_n4
from bellrand.seesaw import SeesawConfig, bell_operator, seesaw_optimize, spectral_sign

SX, SY, SZ = SIGMA["X"], SIGMA["Y"], SIGMA["Z"]


def _rand_herm(rng, d):
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (x + x.conj().T) / 2


def test_sign_diagonal():
    assert np.allclose(spectral_sign(np.diag([3.0, -2.0])), np.diag([1, -1]))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_sign_zero_is_identity(d):
    assert np.allclose(spectral_sign(np.zeros((d, d))), np.eye(d))


def test_sign_pauli_sum():
    assert np.allclose(spectral_sign(SX + SZ), (SX + SZ) / np.sqrt(2), atol=1e-14)


def test_sign_tie_break_on_degenerate_block():
    # eigenvalues 1 and 0: the zero one maps to +1
    assert np.allclose(spectral_sign(np.diag([1.0, 0.0])), np.eye(2))
    assert np.allclose(spectral_sign(np.diag([0.0, -1.0, 2.0, 0.0])), np.diag([1, -1, 1, 1]))


def test_fast_path_matches_eigh():
    rng = np.random.default_rng(7)
    for _ in range(200):
        m = _rand_herm(rng, 2)
        w, u = np.linalg.eigh(m)
        ref = u @ np.diag(np.where(w <= -1e-12, -1.0, 1.0)) @ u.conj().T
        assert np.abs(spectral_sign(m) - ref).max() < 1e-12


@pytest.mark.parametrize("d", [2, 4, 8])
def test_sign_is_dichotomic(d):
    rng = np.random.default_rng(d)
    s = spectral_sign(np.stack([_rand_herm(rng, d) for _ in range(5)]))
    for x in s:
        assert np.abs(x - x.conj().T).max() < 1e-12
        assert np.abs(x @ x - np.eye(d)).max() < 1e-12


def _top(w):
    assert np.abs(w - w.conj().T).max() < 1e-12
    return np.linalg.eigvalsh(w)[-1]


def test_bell_operator_n2():
    r = canonical_realization(2)
    w = bell_operator(r.scheme, r.alice_stack(), r.bob_stack())
    assert _top(w) == pytest.approx(2 * np.sqrt(2), abs=1e-12)


def test_bell_operator_n4_two_copies():
    r = canonical_realization(4)
    w = bell_operator(r.scheme, r.alice_stack(), r.bob_stack())
    assert _top(w) == pytest.approx(16, abs=1e-12)


def test_bell_operator_single_copy_n4():
    r = single_copy_realization_n4()
    w = bell_operator(r.scheme, r.alice_stack(), r.bob_stack())
    assert _top(w) == pytest.approx(4 * (np.sqrt(2) + np.sqrt(6)), abs=1e-12)


def test_bell_operator_guard():
    big = np.zeros((2, 128, 128))
    with pytest.raises(TooLargeForDense):
        bell_operator(build_scheme(2), big, big)


def test_config_validation():
    for bad in (dict(local_dim=3), dict(local_dim=1), dict(restarts=0), dict(convergence_tol=0), dict(max_iterations=0)):
        with pytest.raises(ValueError):
            SeesawConfig(n=3, **bad)
    with pytest.raises(TooLargeForDense):
        SeesawConfig(n=3, local_dim=128)


def test_n2_reaches_tsirelson(seesaw_run):
    res = seesaw_run(2, 2, 10)
    assert res.best_value == pytest.approx(2 * np.sqrt(2), abs=1e-9)
    assert res.converged


def test_n4_single_qubit(seesaw_run):
    res = seesaw_run(4, 2)
    assert len(res.per_restart_values) == 50
    assert res.best_value == pytest.approx(4 * (np.sqrt(2) + np.sqrt(6)), abs=1e-6)
    beh = compute_behavior(res.best_realization)
    assert validate(beh) == []
    rep = certify(beh, res.best_realization.scheme, 1)
    assert rep.r_min == pytest.approx(1.1388, abs=1e-3)
    p, _ = max_probability(beh)
    assert p == pytest.approx((3 + np.sqrt(6)) / 12, abs=1e-9)


def test_n5_single_qubit(seesaw_run):
    res = seesaw_run(5, 2)
    rep = certify(compute_behavior(res.best_realization), build_scheme(5), 1)
    assert rep.r_min == pytest.approx(1.1025, abs=1e-3)


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="the d=4 optimum (77.3544) exceeds the repeated-observable value 16(2+2*sqrt2) behind 1.2284 bits",
)
def test_n6_two_qubits(seesaw_run):
    res = seesaw_run(6, 4)
    rep = certify(compute_behavior(res.best_realization), build_scheme(6), 2)
    assert rep.r_min == pytest.approx(1.2284, abs=1e-3)


@pytest.mark.slow
def test_n6_two_qubits_value(seesaw_run):
    # value found by see-saw and independently by a gradient search over R^5 unit vectors
    res = seesaw_run(6, 4)
    assert res.best_value == pytest.approx(77.354438, abs=1e-5)
    assert res.best_value > 16 * (2 + 2 * np.sqrt(2))


@pytest.mark.parametrize("n, d", [(2, 2), (3, 2), (4, 2), (5, 2)])
def test_restart_histories_nondecreasing(seesaw_run, n, d):
    res = seesaw_run(n, d, 10)
    for h in res.histories:
        assert np.all(np.diff(h) >= -1e-9 * max(1.0, abs(h[-1])))


@pytest.mark.parametrize("n, d", [(2, 2), (3, 2), (4, 2), (5, 2), (6, 2)])
def test_value_between_local_and_quantum(seesaw_run, n, d):
    res = seesaw_run(n, d, 10)
    assert res.best_value <= quantum_optimum(n) + 1e-9
    assert res.best_value >= local_bound_closed(n) - 1e-9
    assert res.best_value == max(res.per_restart_values)
    assert res.best_value == res.per_restart_values[res.best_restart]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_enough_qubits_recover_optimum(seesaw_run, n):
    res = seesaw_run(n, 2 ** (n // 2), 10)
    assert res.best_value == pytest.approx(quantum_optimum(n), abs=1e-6)


@pytest.mark.slow
def test_enough_qubits_recover_optimum_n6(seesaw_run):
    # most restarts stall at the d=4 optimum 77.354; restart 14 of seed 0 escapes
    res = seesaw_run(6, 8, 15)
    assert res.best_value == pytest.approx(quantum_optimum(6), abs=1e-6)


def test_reproducible():
    cfg = SeesawConfig(n=3, restarts=4, seed=11)
    a, b = seesaw_optimize(cfg), seesaw_optimize(cfg)
    assert a.per_restart_values == b.per_restart_values
    assert np.array_equal(a.best_realization.state_vector(), b.best_realization.state_vector())
    c = seesaw_optimize(SeesawConfig(n=3, restarts=4, seed=12))
    assert c.per_restart_values != a.per_restart_values


def test_restarts_order_independent():
    # restart k draws from its own stream, so a longer run shares its prefix
    short = seesaw_optimize(SeesawConfig(n=3, restarts=2, seed=5))
    long = seesaw_optimize(SeesawConfig(n=3, restarts=5, seed=5))
    assert long.per_restart_values[:2] == short.per_restart_values


def test_non_convergence_is_flagged():
    res = seesaw_optimize(SeesawConfig(n=5, restarts=1, max_iterations=1))
    assert not res.converged
    assert res.iterations_used == 1


def test_best_realization_is_dichotomic(seesaw_run):
    r = seesaw_run(4, 2).best_realization
    assert r.dichotomic_residual() < 1e-10
