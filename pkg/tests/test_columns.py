import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import odd_identity_exists
from stslab.columns import (
    BinaryColumnMatrix,
    ColumnOperator,
    apply_matrix,
    binomial_parity,
    characteristic_column,
    characteristic_vector,
    column_star,
    columns_of,
    decompose_periodic,
    f_map,
    find_odd_identity_matrix,
    index_vector,
    is_odd_identity_matrix,
    last_column,
)
from stslab.lattice import build_ising, build_toric, toric_logical, translate_operator
from stslab.pauli import PauliOperator, multiply


def col(*labels):
    return ColumnOperator.from_strings(labels)


def test_f_maps():
    assert f_map(col("X", "X", "X", "X"), 0).is_identity()
    assert f_map(col("X", "I", "X", "I"), 1).key() == col("X", "I").key()
    assert f_map(col("X", "I", "I", "I"), 0).key() == col("X", "I").key()
    with pytest.raises(ValueError):
        f_map(col("X"), 0)


def test_characteristic_examples(columns_fixture):
    for case in columns_fixture["characteristic"]:
        data = characteristic_vector(ColumnOperator.from_strings(case["column"]))
        assert list(data.b) == case["b"]
        assert data.V.same_up_to_phase(PauliOperator.from_string(case["V"]))


def test_characteristic_of_identity_is_undefined():
    with pytest.raises(ValueError):
        characteristic_vector(col("I", "I"))


def all_columns(m, v=1):
    singles = [PauliOperator(v, x, z) for x in range(1 << v) for z in range(1 << v)]
    for ents in itertools.product(singles, repeat=1 << m):
        yield ColumnOperator(ents)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_characteristic_operator_is_nontrivial(m):
    for u in all_columns(m):
        if not u.is_identity():
            assert not characteristic_vector(u).V.is_identity()


def test_characteristic_columns():
    assert characteristic_column((0, 0)) == 0b0001
    assert characteristic_column((1, 0)) == 0b0011
    assert characteristic_column((0, 1)) == 0b0101
    assert characteristic_column((1, 1)) == 0b1111


@pytest.mark.parametrize("m", range(5))
def test_star_law_exhaustive(m):
    h = 1 << m
    for a in range(h):
        for b in range(h):
            got = column_star(characteristic_column(index_vector(a, m)), characteristic_column(index_vector(b, m)), m)
            if a + b < h:
                assert got == characteristic_column(index_vector(a + b, m))
            else:
                # Overflow wraps every selected row onto itself in pairs.
                assert got == 0


def test_star_identity_element():
    for m in range(4):
        one = characteristic_column(index_vector(0, m))
        for x in range(1 << (1 << m)):
            assert column_star(x, one, m) == x


def test_lucas_examples():
    assert binomial_parity(4, 2) == 0
    assert binomial_parity(5, 1) == 1
    with pytest.raises(ValueError):
        binomial_parity(2, 3)


def test_lucas_against_exact_binomials():
    for a in range(256):
        for b in range(a + 1):
            assert binomial_parity(a, b) == math.comb(a, b) % 2


@pytest.mark.parametrize("m", [1, 2])
def test_multiplication_law(m):
    cols = [u for u in all_columns(m) if not u.is_identity()]
    data = {u.key(): characteristic_vector(u) for u in cols}
    for u, w in itertools.product(cols, repeat=2):
        prod = u * w
        if prod.is_identity():
            continue
        a, b, c = data[u.key()], data[w.key()], characteristic_vector(prod)
        if a.g > b.g:
            assert c.b == b.b and c.V.same_up_to_phase(b.V)
        elif a.g == b.g and not a.V.same_up_to_phase(b.V):
            assert c.b == a.b and c.V.same_up_to_phase(multiply(a.V, b.V))
        elif a.g == b.g:
            assert c.g > a.g


@pytest.mark.parametrize("m", [1, 2])
def test_raising_by_characteristic_column(m):
    for u in all_columns(m):
        if u.is_identity():
            continue
        d = characteristic_vector(u)
        for delta in range(1, (1 << m) - d.g):
            raised = u.apply_column(characteristic_column(index_vector(delta, m)))
            r = characteristic_vector(raised)
            assert r.g == d.g + delta
            assert r.V.same_up_to_phase(d.V)


def test_worked_product(columns_fixture):
    case = columns_fixture["worked_product"]
    ell = [ColumnOperator.from_strings(c) for c in case["ell"]]
    B = BinaryColumnMatrix(0, tuple(bits[0] for bits in case["B"]))
    full, last = apply_matrix(ell, B)
    assert [c.key() for c in full] == [ColumnOperator.from_strings(c).key() for c in case["full"]]
    assert last.is_identity()


def test_single_entry_matrix_reproduces_operator():
    ell = [col("XI", "ZZ"), col("YI", "IX"), col("IZ", "XX")]
    B = BinaryColumnMatrix.unit(3, 1, 2)
    full, _ = apply_matrix(ell, B)
    assert [c.key() for c in full[:3]] == [c.key() for c in ell]
    assert all(c.is_identity() for c in full[3:])


def test_last_column_agrees_with_full_product():
    ell = [col("XI", "ZZ"), col("YI", "IX"), col("IZ", "XX")]
    for bits in itertools.product(range(4), repeat=3):
        B = BinaryColumnMatrix(1, bits)
        assert apply_matrix(ell, B)[1].key() == last_column(ell, B).key()


def random_columns(v, m, x):
    entry = st.builds(lambda a, b: PauliOperator(v, a, b), st.integers(0, (1 << v) - 1), st.integers(0, (1 << v) - 1))
    column = st.lists(entry, min_size=1 << m, max_size=1 << m).map(lambda e: ColumnOperator(tuple(e)))
    return st.lists(column, min_size=x, max_size=x)


@given(st.tuples(st.integers(1, 2), st.integers(0, 2), st.integers(0, 2)).flatmap(
    lambda t: random_columns(t[0], t[1], 2 * t[0] + 1 + t[2])))
def test_odd_matrix_found_when_wide(ell):
    B = find_odd_identity_matrix(ell)
    assert B is not None
    assert is_odd_identity_matrix(ell, B)


@given(st.tuples(st.integers(1, 2), st.integers(0, 2), st.integers(1, 4)).flatmap(
    lambda t: random_columns(t[0], t[1], t[2])))
def test_odd_matrix_search_agrees_with_kernel_oracle(ell):
    B = find_odd_identity_matrix(ell)
    cols = [[(e.x, e.z) for e in u.entries] for u in ell]
    if B is not None:
        assert is_odd_identity_matrix(ell, B)
        assert odd_identity_exists(cols, ell[0].m)


def test_odd_matrix_absent_for_independent_narrow_columns():
    ell = [col("XI"), col("ZI"), col("IX"), col("IZ")]
    assert find_odd_identity_matrix(ell) is None
    assert not odd_identity_exists([[(e.x, e.z) for e in u.entries] for u in ell], 0)


def test_odd_matrix_on_toric_strip():
    code, layout = build_toric(2, 1, (6, 2))
    ell = toric_logical(layout, 2, 1, (0,), "Z")
    cols = columns_of(layout, ell, 6, 1)
    B = find_odd_identity_matrix(cols)
    assert B is not None and is_odd_identity_matrix(cols, B)


def test_decompose_toric_string_is_already_periodic():
    code, layout = build_toric(2, 1, 3)
    ell = toric_logical(layout, 2, 1, (0,), "Z")
    dec = decompose_periodic(code, layout, ell)
    assert dec is not None and dec.ell_a.is_identity() and dec.period == 1
    assert dec.ell_b.same_up_to_phase(ell) or code.in_stabilizer_group(multiply(dec.ell_b, ell))


def test_decompose_ising_global_flip():
    code, layout = build_ising(1, 4)
    ell = PauliOperator.from_string("XXXX")
    dec = decompose_periodic(code, layout, ell)
    assert dec is not None and dec.ell_a.is_identity()
    assert dec.ell_b.same_up_to_phase(ell)


def test_decompose_three_dimensional_plane_logical():
    code, layout = build_toric(3, 1, 2)
    ell = toric_logical(layout, 3, 1, (2,), "X")
    dec = decompose_periodic(code, layout, ell)
    assert dec is not None
    plane = ell.support | dec.ell_b.support | dec.ell_a.support
    assert all(layout.particle_coord(q // layout.v)[2] == 0 for q in range(code.n_qubits) if (plane >> q) & 1)
    assert code.in_centralizer(dec.ell_a) and code.in_centralizer(dec.ell_b)
    assert translate_operator(layout, dec.ell_b, 0, dec.period).same_up_to_phase(dec.ell_b)
    recon = multiply(multiply(dec.ell_a, dec.ell_b), dec.stabilizer)
    assert recon.same_up_to_phase(ell)
