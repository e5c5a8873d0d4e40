from __future__ import annotations

import itertools

import numpy as np
import pytest

from congames.es_core import build, configurations
from congames.quantum import (
    MAX_DIM,
    PROJECTION,
    UNITARY,
    QuantumES,
    SerializationError,
    config_operator_and_weight,
    linear_extensions,
    local_valuation_check,
    matrix_from_json,
    matrix_to_json,
    operator_along,
    validate_qes,
    weights,
    whole_valuation_check,
)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def rules(vs):
    return {v.rule for v in vs}


def two_qubits() -> QuantumES:
    es = build("abcdf", [("a", "c"), ("b", "d"), ("c", "f"), ("d", "f")])
    assign = {
        "a": (UNITARY, np.kron(X, I2)),
        "b": (UNITARY, np.kron(I2, Z)),
        "c": (PROJECTION, np.kron(P0, I2)),
        "d": (UNITARY, np.kron(I2, H)),
        "f": (UNITARY, CNOT),
    }
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1
    return QuantumES(es, 4, assign, rho)


def conflict_branches() -> QuantumES:
    es = build(["e1", "e2"], conflicts=[["e1", "e2"]])
    return QuantumES(es, 2, {"e1": (PROJECTION, P0), "e2": (PROJECTION, PLUS)}, P0.copy())


def test_distinct_factors_valid():
    es = build(["a", "b"])
    q = QuantumES(es, 4, {"a": (UNITARY, np.kron(X, I2)), "b": (UNITARY, np.kron(I2, Z))}, np.eye(4) / 4)
    assert validate_qes(q) == []


def test_concurrent_x_z_violation():
    q = QuantumES(build(["x", "z"]), 2, {"x": (UNITARY, X), "z": (UNITARY, Z)}, P0.copy())
    out = validate_qes(q)
    assert [v.rule for v in out] == ["commuting"]
    assert out[0].witness["events"] == ["x", "z"]


def test_ordered_x_z_valid():
    q = QuantumES(build(["x", "z"], [("x", "z")]), 2, {"x": (UNITARY, X), "z": (UNITARY, Z)}, P0.copy())
    assert validate_qes(q) == []


def test_conflicting_noncommuting_allowed():
    assert validate_qes(conflict_branches()) == []


def test_structural_violations():
    es = build(["u", "p"])
    q = QuantumES(es, 2, {"u": (UNITARY, 2 * I2), "p": (PROJECTION, X)}, np.eye(2))
    assert {"unitary", "projection", "density trace"} <= rules(validate_qes(q))
    q = QuantumES(build(["u"]), MAX_DIM + 1, {}, np.eye(1))
    assert rules(validate_qes(q)) == {"dimension"}
    q = QuantumES(build(["u"]), 2, {}, P0.copy())
    assert rules(validate_qes(q)) == {"operator missing"}
    neg = np.diag([1.5, -0.5]).astype(complex)
    q = QuantumES(build(["u"]), 2, {"u": (UNITARY, I2)}, neg)
    assert "density positive" in rules(validate_qes(q))


def test_empty_configuration():
    a, v = config_operator_and_weight(two_qubits(), [])
    assert np.allclose(a, np.eye(4)) and abs(v - 1) < 1e-12


def test_projection_on_plus():
    q = QuantumES(build(["e"]), 2, {"e": (PROJECTION, P0)}, PLUS.copy())
    _, v = config_operator_and_weight(q, ["e"])
    assert abs(v - 0.5) <= 1e-12


def test_unitary_weight_one():
    rho = np.array([[0.3, 0.1j], [-0.1j, 0.7]])
    for u in (X, Z, H):
        q = QuantumES(build(["e"]), 2, {"e": (UNITARY, u)}, rho)
        assert abs(config_operator_and_weight(q, ["e"])[1] - 1) <= 1e-12


def test_serialisation_invariance_all_extensions():
    q = two_qubits()
    assert validate_qes(q) == []
    for x in configurations(q.es):
        ref, _ = config_operator_and_weight(q, x)
        exts = list(linear_extensions(q.es, x))
        assert len(exts) >= 1
        for seq in exts:
            assert np.max(np.abs(operator_along(q, seq) - ref)) <= 1e-12


def test_serialisation_error_on_invalid_structure():
    q = QuantumES(build(["x", "z"]), 2, {"x": (UNITARY, X), "z": (UNITARY, Z)}, P0.copy())
    with pytest.raises(SerializationError):
        config_operator_and_weight(q, ["x", "z"])


def test_unitary_only_weights_one():
    es = build(["a", "b", "c"], [("a", "c")])
    q = QuantumES(es, 2, {"a": (UNITARY, H), "b": (UNITARY, I2), "c": (UNITARY, Z)}, PLUS.copy())
    assert all(abs(v - 1) < 1e-12 for v in weights(q).values())
    for w in configurations(es):
        assert local_valuation_check(q, w) == []


def test_projection_chain_telescopes():
    p1 = np.diag([1, 1, 0, 0]).astype(complex)
    p2 = np.diag([1, 0, 0, 0]).astype(complex)
    psi = np.full(4, 0.5, dtype=complex)
    rho = np.outer(psi, psi.conj())
    q = QuantumES(build(["e1", "e2"], [("e1", "e2")]), 4, {"e1": (PROJECTION, p1), "e2": (PROJECTION, p2)}, rho)
    assert validate_qes(q) == []
    w = weights(q)
    assert abs(w[frozenset({"e1"})] - 0.5) < 1e-12
    assert abs(w[frozenset({"e1", "e2"})] - 0.25) < 1e-12
    assert local_valuation_check(q, ["e1", "e2"]) == []
    chain = sorted(w, key=len)
    assert all(w[a] >= w[b] - 1e-12 for a, b in zip(chain, chain[1:]))


def test_local_holds_whole_fails():
    q = conflict_branches()
    for w in configurations(q.es):
        assert local_valuation_check(q, w) == []
    whole = whole_valuation_check(q)
    assert [v.rule for v in whole] == ["drop"]
    assert float(whole[0].witness["drop"]) == pytest.approx(-0.5, abs=1e-12)


def test_matrix_json_round_trip():
    m = np.array([[1 + 2j, 0], [0.5, -1j]])
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)


def test_linear_extension_count():
    es = build(["a", "b", "c"])
    assert len(list(linear_extensions(es, ["a", "b", "c"]))) == 6
    assert len(list(linear_extensions(two_qubits().es, "abcdf"))) == len(
        [p for p in itertools.permutations("abcdf") if p.index("a") < p.index("c") and p.index("b") < p.index("d") and p.index("f") == 4]
    )
