import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bellrand.errors import DimensionMismatch, TooLargeForDense, UnsupportedPhase
from bellrand.pauli import (
    SIGMA,
    PauliString,
    anticommutes,
    maxent_expectation,
    maxent_state,
    multiply,
    to_dense,
    transpose_sign,
)

P = PauliString.from_label


def pauli_strings(qubits, hermitian=False):
    hi = (1 << qubits) - 1
    phase = st.sampled_from([0, 2]) if hermitian else st.integers(0, 3)
    return st.builds(PauliString, st.just(qubits), st.integers(0, hi), st.integers(0, hi), phase)


def same_size_pair(hermitian=False):
    return st.integers(1, 4).flatmap(
        lambda q: st.tuples(pauli_strings(q, hermitian), pauli_strings(q, hermitian))
    )


def same_size_triple():
    return st.integers(1, 4).flatmap(
        lambda q: st.tuples(pauli_strings(q), pauli_strings(q), pauli_strings(q))
    )


def test_xy_is_iz():
    assert multiply(P("X"), P("Y")) == PauliString(1, 0, 1, 1)


def test_square_is_identity():
    for lab in ("X", "Y", "Z", "XYZ", "-YY"):
        sq = multiply(P(lab), P(lab))
        assert sq.masks == (0, 0) and sq.phase_exp == 0


def test_two_qubit_product_against_dense():
    prod = multiply(P("XX"), P("XY"))
    expected = np.kron(SIGMA["X"], SIGMA["X"]) @ np.kron(SIGMA["X"], SIGMA["Y"])
    assert np.allclose(to_dense(prod), expected)
    assert prod == PauliString(2, 0, 0b10, 1)  # i (I (x) Z)


def test_mismatched_sizes():
    with pytest.raises(DimensionMismatch):
        multiply(P("X"), P("XX"))
    with pytest.raises(DimensionMismatch):
        anticommutes(P("X"), P("XX"))


def test_anticommutes_examples():
    assert anticommutes(P("X"), P("Y"))
    assert not anticommutes(P("XZ"), P("XZ"))
    assert anticommutes(P("XX"), P("YI"))
    a, b = to_dense(P("XX")), to_dense(P("YI"))
    assert np.abs(a @ b + b @ a).max() < 1e-12


def test_transpose_sign_examples():
    assert transpose_sign(P("Y")) == -1
    assert transpose_sign(P("XZ")) == 1
    assert transpose_sign(P("YY")) == 1
    d = to_dense(P("YY"))
    assert np.allclose(d.T, d)
    with pytest.raises(UnsupportedPhase):
        transpose_sign(PauliString(1, 1, 0, 1))


def test_to_dense_examples():
    assert np.allclose(to_dense(PauliString.identity(3)), np.eye(8))
    assert np.allclose(to_dense(P("Z")), np.diag([1, -1]))
    assert np.allclose(to_dense(P("XY")), np.kron(SIGMA["X"], SIGMA["Y"]))
    with pytest.raises(TooLargeForDense):
        to_dense(PauliString.identity(13))


def _dense_maxent(p, q):
    psi = maxent_state(p.qubits)
    return (psi.conj() @ np.kron(to_dense(p), to_dense(q)) @ psi).real


def test_maxent_examples():
    assert maxent_expectation(P("Z"), P("Z")) == 1
    assert maxent_expectation(P("Y"), P("Y")) == -1
    assert _dense_maxent(P("Y"), P("Y")) == pytest.approx(-1)
    assert maxent_expectation(P("X"), P("Y")) == 0


def test_labels_roundtrip():
    for lab in ("IXYZ", "-ZZ", "Y"):
        assert str(P(lab)) == lab
    assert str(PauliString(1, 1, 1, 1)) == "iY"


@settings(max_examples=400, deadline=None)
@given(same_size_triple())
def test_multiply_associative_and_dense_exact(triple):
    a, b, c = triple
    left = multiply(multiply(a, b), c)
    right = multiply(a, multiply(b, c))
    assert left == right
    assert np.allclose(to_dense(left), to_dense(a) @ to_dense(b) @ to_dense(c), atol=1e-12)


def test_multiply_exhaustive_random_triples():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        q = int(rng.integers(1, 5))
        trip = [
            PauliString(q, int(rng.integers(1 << q)), int(rng.integers(1 << q)), int(rng.integers(4)))
            for _ in range(3)
        ]
        a, b, c = trip
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    # dense homomorphism on a smaller sample
    for _ in range(500):
        q = int(rng.integers(1, 5))
        a, b = (
            PauliString(q, int(rng.integers(1 << q)), int(rng.integers(1 << q)), int(rng.integers(4)))
            for _ in range(2)
        )
        assert np.abs(to_dense(multiply(a, b)) - to_dense(a) @ to_dense(b)).max() < 1e-12


@settings(max_examples=300, deadline=None)
@given(same_size_pair())
def test_anticommutes_symmetric_and_dense(pair):
    a, b = pair
    assert anticommutes(a, b) == anticommutes(b, a)
    da, db = to_dense(a), to_dense(b)
    anti = np.abs(da @ db + db @ da).max() < 1e-12
    assert anti == anticommutes(a, b)


@settings(max_examples=300, deadline=None)
@given(same_size_pair(hermitian=True))
def test_maxent_expectation_against_dense(pair):
    a, b = pair
    assert abs(maxent_expectation(a, b) - _dense_maxent(a, b)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda q: pauli_strings(q, hermitian=True)))
def test_transpose_sign_against_dense(p):
    d = to_dense(p)
    assert np.allclose(d.T, transpose_sign(p) * d)


def test_tensor_and_padding():
    p = P("X").tensor(P("Z"))
    assert p == P("XZ")
    assert P("Y").padded(3) == P("YII")
    assert np.allclose(to_dense(P("Y").padded(2)), np.kron(SIGMA["Y"], np.eye(2)))
