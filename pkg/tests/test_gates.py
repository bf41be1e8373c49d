import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import dagger, embed, exact_equal, exact_eye, h_all, h_on_last, local_matrix
from shallowq.circuit import (
    B,
    BDG,
    CNOT,
    CircuitError,
    Gate,
    GateKind,
    H,
    T,
    X,
    Y,
    Z,
    cz,
    fanout,
    gate,
    mod,
    toffoli,
)
from shallowq.gates import apply_gate, apply_gate_density, gate_matrix
from shallowq.ring import Cyclotomic
from shallowq.simulator import basis_state, partial_trace

S = 1 / math.sqrt(2)

KINDS = (
    [X, Y, Z, H, T, CNOT, B, BDG]
    + [toffoli(n) for n in (1, 2, 3)]
    + [cz(n) for n in (1, 2, 3, 4)]
    + [fanout(n) for n in (1, 2, 3)]
    + [mod(q, n) for q in (2, 3, 4) for n in (1, 2, 3)]
)


def test_x_matrix():
    assert np.array_equal(gate_matrix(X), [[0, 1], [1, 0]])


def test_t_phase_on_one():
    assert gate_matrix(T, "exact")[1, 1] == Cyclotomic.omega(1)
    assert gate_matrix(T, "exact")[1, 1].k == 0
    assert abs(gate_matrix(T)[1, 1] - complex(math.cos(math.pi / 4), math.sin(math.pi / 4))) < 1e-15


def test_b_makes_epr_pair():
    out = apply_gate(basis_state([0, 0]), gate("B", 0, 1))
    assert np.allclose(out, [S, 0, 0, S], atol=1e-15)
    exact = apply_gate(basis_state([0, 0], "exact"), gate("B", 0, 1))
    assert list(exact) == [Cyclotomic(1, k=1), 0, 0, Cyclotomic(1, k=1)]


def test_mod2_is_parity():
    m = gate_matrix(mod(2, 2))
    for x1, x2, b in itertools.product((0, 1), repeat=3):
        col = 4 * x1 + 2 * x2 + b
        row = 4 * x1 + 2 * x2 + (b ^ ((x1 + x2) % 2))
        assert m[row, col] == 1
        assert np.count_nonzero(m[:, col]) == 1


def test_mod3_truth_table():
    m = gate_matrix(mod(3, 3))
    for bits in itertools.product((0, 1), repeat=4):
        *ctl, b = bits
        col = int("".join(map(str, bits)), 2)
        flip = sum(ctl) % 3 != 0
        row = int("".join(map(str, (*ctl, b ^ flip))), 2)
        assert m[row, col] == 1


def test_apply_h_to_zero():
    assert np.allclose(apply_gate(basis_state([0]), gate("H", 0)), [S, S])


def test_apply_cnot_example():
    state = np.array([S, 0, S, 0], dtype=complex)
    assert np.allclose(apply_gate(state, gate("CNOT", 0, 1)), [S, 0, 0, S])


def test_fanout_example():
    out = apply_gate(basis_state([0, 0, 1]), gate("FANOUT", 0, 1, 2))
    assert out[0b111] == 1 and np.count_nonzero(out) == 1


def test_density_x():
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    assert np.array_equal(apply_gate_density(rho, gate("X", 0), (0,)), [[0, 0], [0, 1]])


def test_density_h():
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    assert np.allclose(apply_gate_density(rho, gate("H", 0), (0,)), np.full((2, 2), 0.5))


def test_density_epr_reduced_is_maximally_mixed():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1
    rho = apply_gate_density(rho, gate("B", 0, 1), (0, 1))
    assert np.allclose(partial_trace(rho, (0, 1), {1}), np.eye(2) / 2)
    assert np.allclose(partial_trace(rho, (0, 1), {0}), np.eye(2) / 2)


def test_density_operand_outside_subset():
    with pytest.raises(ValueError, match="outside"):
        apply_gate_density(np.eye(2, dtype=complex), gate("CNOT", 0, 1), (0,))


def test_density_shape_mismatch():
    with pytest.raises(ValueError):
        apply_gate_density(np.eye(2, dtype=complex), gate("H", 0), (0, 1))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_gate(np.zeros(3, dtype=complex), gate("H", 0))
    with pytest.raises(ValueError):
        apply_gate(basis_state([0]), gate("CNOT", 0, 1))


def test_width_cap():
    with pytest.raises(CircuitError):
        gate_matrix(toffoli(20))
    assert gate_matrix(toffoli(3), max_width=4).shape == (16, 16)
    with pytest.raises(ValueError):
        gate_matrix(X, "quad")


@pytest.mark.parametrize("kind", KINDS, ids=str)
def test_matches_basis_definition(kind):
    assert np.allclose(gate_matrix(kind), local_matrix(kind), atol=1e-15)


@pytest.mark.parametrize("kind", KINDS, ids=str)
def test_unitary_float(kind):
    m = gate_matrix(kind)
    assert np.linalg.norm(m @ m.conj().T - np.eye(len(m))) <= 1e-12


@pytest.mark.parametrize("kind", KINDS, ids=str)
def test_unitary_exact(kind):
    m = gate_matrix(kind, "exact")
    assert exact_equal(m @ dagger(m), exact_eye(len(m)))


@pytest.mark.parametrize("kind", KINDS, ids=str)
def test_backends_agree(kind):
    e = np.array([[complex(v) for v in row] for row in gate_matrix(kind, "exact")])
    assert np.max(np.abs(e - gate_matrix(kind))) <= 1e-12


def test_hxh_is_z():
    h, x = gate_matrix(H, "exact"), gate_matrix(X, "exact")
    assert exact_equal(h @ x @ h, gate_matrix(Z, "exact"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cz_is_toffoli_between_hadamards(n):
    hh = h_on_last(n + 1)
    assert exact_equal(hh @ gate_matrix(toffoli(n), "exact") @ hh, gate_matrix(cz(n + 1), "exact"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fanout_is_parity_between_hadamards(n):
    hh = h_all(n + 1)
    assert exact_equal(hh @ gate_matrix(mod(2, n), "exact") @ hh, gate_matrix(fanout(n), "exact"))


def test_bdg_inverts_b():
    assert exact_equal(gate_matrix(BDG, "exact") @ gate_matrix(B, "exact"), exact_eye(4))


def test_matrices_are_read_only():
    with pytest.raises(ValueError):
        gate_matrix(H)[0, 0] = 2


@st.composite
def state_and_gate(draw):
    kind = draw(st.sampled_from(KINDS[:12] + [cz(3), fanout(2), mod(3, 2)]))
    n = draw(st.integers(kind.arity, 5))
    ops = tuple(draw(st.permutations(range(n)))[: kind.arity])
    re = draw(st.lists(st.floats(-1, 1), min_size=1 << n, max_size=1 << n))
    im = draw(st.lists(st.floats(-1, 1), min_size=1 << n, max_size=1 << n))
    return n, Gate(kind, ops), np.array(re) + 1j * np.array(im)


@given(state_and_gate())
def test_apply_gate_matches_full_operator(data):
    n, g, state = data
    expected = embed(g, n) @ state
    assert np.allclose(apply_gate(state, g), expected, atol=1e-12)
    # norm is preserved
    assert math.isclose(np.linalg.norm(apply_gate(state, g)), np.linalg.norm(state), abs_tol=1e-9)


@given(state_and_gate())
def test_density_matches_conjugation(data):
    n, g, state = data
    rho = np.outer(state, state.conj())
    u = embed(g, n)
    assert np.allclose(apply_gate_density(rho, g, tuple(range(n))), u @ rho @ u.conj().T, atol=1e-10)


@given(st.sampled_from(KINDS[:12]), st.data())
def test_exact_application_matches_float(kind, data):
    n = data.draw(st.integers(kind.arity, 4))
    ops = tuple(data.draw(st.permutations(range(n)))[: kind.arity])
    bits = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    g = Gate(kind, ops)
    exact = apply_gate(apply_gate(basis_state(bits, "exact"), gate("H", ops[0])), g)
    flt = apply_gate(apply_gate(basis_state(bits), gate("H", ops[0])), g)
    assert np.allclose([complex(v) for v in exact], flt, atol=1e-12)
