import json

import numpy as np
import pytest

from bellrand.behavior import (
    TABLE_MAX_N,
    Behavior,
    bell_value_of,
    compute_behavior,
    max_probability,
    per_pair_max,
    validate,
)
from bellrand.encoding import build_scheme
from bellrand.errors import SchemeMismatch
from bellrand.realization import bell_value, canonical_realization, single_copy_realization_n4


def uniform(n):
    return Behavior.from_table(np.full((2 ** (n - 1), n, 2, 2), 0.25))


def test_n3_entries():
    t = compute_behavior(canonical_realization(3)).probabilities()
    assert t.size == 48
    hi, lo = (1 + 1 / np.sqrt(3)) / 4, (1 - 1 / np.sqrt(3)) / 4
    assert np.all((np.abs(t - hi) < 1e-12) | (np.abs(t - lo) < 1e-12))


def test_n2_max_entry():
    p, _ = max_probability(compute_behavior(canonical_realization(2)))
    assert p == pytest.approx((1 + 1 / np.sqrt(2)) / 4, abs=1e-12)


def test_single_copy_n4_max_entry():
    p, _ = max_probability(compute_behavior(single_copy_realization_n4()))
    assert p == pytest.approx((3 + np.sqrt(6)) / 12, abs=1e-12)
    assert p == pytest.approx(0.45412, abs=1e-5)


def test_n4_two_copies_max_entry():
    p, wit = max_probability(compute_behavior(canonical_realization(4)))
    assert p == pytest.approx(3 / 8, abs=1e-12)
    # every (i, y) pair attains it, once with a = b and once with a != b
    assert len(wit) == 8 * 4 * 2


@pytest.mark.parametrize("n", range(2, 11))
def test_general_max_entry(n):
    p, _ = max_probability(compute_behavior(canonical_realization(n)))
    assert p == pytest.approx((1 + 1 / np.sqrt(n)) / 4, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 11))
def test_canonical_closed_form_entries(n):
    beh = compute_behavior(canonical_realization(n))
    t = beh.probabilities()
    c = build_scheme(n).signs[:, :, None, None]
    parity = np.array([1, -1])
    expected = (1 + parity[None, None, :, None] * parity[None, None, None, :] * c / np.sqrt(n)) / 4
    assert np.abs(t - expected).max() < 1e-12
    assert np.abs(t.sum(axis=3) - 0.5).max() < 1e-12
    assert np.abs(t.sum(axis=2) - 0.5).max() < 1e-12
    assert beh.materialized == (n <= TABLE_MAX_N)
    assert t.size == beh.size == n * 2 ** (n + 1)


def test_bell_value_of_examples():
    assert bell_value_of(compute_behavior(canonical_realization(2)), build_scheme(2)) == pytest.approx(
        2 * np.sqrt(2), abs=1e-12
    )
    assert bell_value_of(uniform(3), build_scheme(3)) == 0
    assert bell_value_of(compute_behavior(canonical_realization(5)), build_scheme(5)) == pytest.approx(
        16 * np.sqrt(5), abs=1e-10
    )


def test_scheme_mismatch():
    with pytest.raises(SchemeMismatch):
        bell_value_of(uniform(3), build_scheme(4))


@pytest.mark.parametrize("n", range(2, 11))
def test_behavior_and_operator_routes_agree(n):
    r = canonical_realization(n)
    assert abs(bell_value_of(compute_behavior(r), r.scheme) - bell_value(r)) < 1e-10


@pytest.mark.parametrize("n", range(2, 7))
def test_symbolic_dense_projector_agree(n):
    r = canonical_realization(n)
    sym = compute_behavior(r, "symbolic").probabilities()
    dense = compute_behavior(r, "dense").probabilities()
    assert np.abs(sym - dense).max() < 1e-10
    if n <= 4:
        proj = compute_behavior(r, "projector").probabilities()
        assert np.abs(sym - proj).max() < 1e-10


def test_single_copy_projector_route():
    r = single_copy_realization_n4()
    a = compute_behavior(r, "symbolic").probabilities()
    b = compute_behavior(r, "projector").probabilities()
    assert np.abs(a - b).max() < 1e-12


@pytest.mark.parametrize("n", range(2, 11))
def test_canonical_validates(n):
    assert validate(compute_behavior(canonical_realization(n))) == []


def test_perturbed_entry_is_reported():
    t = compute_behavior(canonical_realization(3)).probabilities().copy()
    t[1, 2, 0, 1] += 1e-3
    problems = validate(Behavior.from_table(t))
    kinds = {(v.kind, v.index[:2] if v.kind == "normalization" else None) for v in problems}
    assert ("normalization", (2, 3)) in kinds
    norm = [v for v in problems if v.kind == "normalization"]
    assert len(norm) == 1 and norm[0].magnitude == pytest.approx(1e-3, rel=1e-6)


def test_signaling_and_range_detected():
    t = np.full((2, 2, 2, 2), 0.25)
    # Alice's marginal depends on Bob's setting
    t[0, 0] = [[0.5, 0.0], [0.5, 0.0]]
    t[0, 1] = [[0.5, 0.5], [0.0, 0.0]]
    problems = validate(Behavior.from_table(t))
    assert any(v.kind == "no-signaling" for v in problems)
    t2 = np.full((2, 2, 2, 2), 0.25)
    t2[0, 0] = [[0.6, -0.1], [0.25, 0.25]]
    assert any(v.kind == "range" for v in validate(Behavior.from_table(t2)))


def test_tiny_negative_clamped():
    beh = Behavior(n=2, corr=np.array([[1 + 5e-13, 0], [0, 0.0]]), alice_marg=np.zeros(2), bob_marg=np.zeros(2))
    assert beh.probabilities().min() == 0.0


def test_per_pair_max_shape():
    assert per_pair_max(compute_behavior(canonical_realization(4))).shape == (8, 4)


def test_exports():
    beh = compute_behavior(canonical_realization(2))
    lines = beh.to_csv().splitlines()
    assert lines[0] == "i,y,a,b,p"
    assert len(lines) == 1 + 16
    i, y, a, b, p = lines[1].split(",")
    assert (i, y, a, b) == ("1", "1", "0", "0")
    assert float(p) == pytest.approx((1 + 1 / np.sqrt(2)) / 4, abs=1e-16)
    assert len(p.replace("0.", "").lstrip("0")) >= 16
    data = json.loads(beh.to_json())
    assert data["entries"][0] == {"i": 1, "y": 1, "a": 0, "b": 0, "p": float(p)}
