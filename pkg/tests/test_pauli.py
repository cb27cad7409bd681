import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from oracles import dense, dense_to_label
from stslab.pauli import PauliOperator, multiply, symplectic_product


def paulis(n_min=1, n_max=3):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.tuples(
            st.sampled_from(["+", "-", "+i", "-i"]), st.text("IXYZ", min_size=n, max_size=n)
        ).map(lambda t: t[0] + t[1])
    )


def test_x_times_z_is_minus_i_y():
    p = multiply(PauliOperator.from_string("X"), PauliOperator.from_string("Z"))
    assert p.to_string() == "-iY"
    assert (p.x, p.z, p.phase) == (1, 1, 3)


def test_text_round_trip_examples():
    for s in ["+XYZI", "-iZZ", "+iY", "-I"]:
        assert PauliOperator.from_string(s).to_string() == s


@given(paulis())
def test_text_round_trip(s):
    assert PauliOperator.from_string(s).to_string() == s


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(paulis(n, n), paulis(n, n))))
def test_product_matches_dense_matrices(pair):
    a, b = pair
    got = multiply(PauliOperator.from_string(a), PauliOperator.from_string(b))
    n = got.n_qubits
    assert got.to_string() == dense_to_label(dense(a) @ dense(b), n)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(paulis(n, n), paulis(n, n))))
def test_symplectic_product_is_commutator_test(pair):
    a, b = (dense(s) for s in pair)
    commute = np.allclose(a @ b, b @ a)
    pa, pb = (PauliOperator.from_string(s) for s in pair)
    assert symplectic_product(pa, pb) == (0 if commute else 1)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(paulis(n, n), paulis(n, n), paulis(n, n))))
def test_product_is_associative(triple):
    a, b, c = (PauliOperator.from_string(s) for s in triple)
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(paulis(1, 5))
def test_square_is_plus_or_minus_identity(s):
    p = PauliOperator.from_string(s)
    sq = multiply(p, p)
    assert sq.is_identity()
    assert sq.phase == (0 if p.is_hermitian else 2)


def test_hermitian_iff_even_phase():
    for s, herm in [("+X", True), ("-Z", True), ("+iY", False), ("-iI", False)]:
        p = PauliOperator.from_string(s)
        assert p.is_hermitian == herm
        m = dense(s)
        assert np.allclose(m, m.conj().T) == herm


def test_weight_and_support():
    p = PauliOperator.from_string("+IXIYZ")
    assert p.weight == 3
    assert p.support == 0b11010


def test_symplectic_layout_is_x_then_z():
    p = PauliOperator.from_string("XZ")
    assert p.symplectic == 0b1001
    assert PauliOperator.from_symplectic(2, 0b1001) == p
