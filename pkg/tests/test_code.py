import itertools
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stslab.code import (
    StabilizerCode,
    canonical_pairs,
    code_distance_exact,
    dump_code,
    g_region,
    load_code,
    logical_basis,
    validate,
)
from stslab.gf2 import EchelonBasis
from stslab.lattice import build_ising, build_toric, toric_logical
from stslab.pauli import PauliOperator, multiply, symplectic_product

FIVE_QUBIT = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
STEANE = ["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]


def small_codes():
    return [
        StabilizerCode.from_strings(FIVE_QUBIT),
        StabilizerCode.from_strings(STEANE),
        build_ising(1, 4)[0],
        build_toric(2, 1, 2)[0],
    ]


def test_validate_accepts_known_codes():
    for code in small_codes():
        assert validate(code).ok


def test_validate_rejects_anticommuting_pair():
    rep = validate(StabilizerCode.from_strings(["XI", "ZI"]))
    assert not rep.ok and rep.offending == (0, 1)


def test_validate_rejects_minus_identity():
    # ZZ * ZZ-with-sign gives -I.
    rep = validate(StabilizerCode.from_strings(["+ZZ", "-ZZ"]))
    assert not rep.ok
    rep = validate(StabilizerCode.from_strings(["+ZZI", "+IZZ", "-ZIZ"]))
    assert not rep.ok
    assert validate(StabilizerCode.from_strings(["+ZZI", "+IZZ", "+ZIZ"])).ok


def test_validate_rejects_non_hermitian():
    assert not validate(StabilizerCode.from_strings(["+iZZ"])).ok


def test_k_of_known_codes():
    assert [c.k for c in small_codes()] == [1, 1, 1, 2]


@pytest.mark.parametrize("code", small_codes(), ids=["five", "steane", "ising", "toric"])
def test_logical_basis_spans_centralizer_mod_stabilizers(code):
    ops = logical_basis(code).operators
    assert len(ops) == 2 * code.k
    for op in ops:
        assert code.is_logical(op)


@pytest.mark.parametrize("code", small_codes(), ids=["five", "steane", "ising", "toric"])
def test_canonical_pairs_symplectic_form(code):
    flat = canonical_pairs(code).flat()
    for i, a in enumerate(flat):
        for j, b in enumerate(flat):
            expected = 1 if (i // 2 == j // 2 and i != j) else 0
            assert symplectic_product(a, b) == expected
        assert code.is_logical(a)


def test_ising_chain_pair_is_single_z_and_global_x():
    code, _ = build_ising(1, 4)
    (left, right), = canonical_pairs(code).pairs
    assert code.in_stabilizer_group(multiply(left, PauliOperator.from_string("ZIII")))
    assert code.in_stabilizer_group(multiply(right, PauliOperator.from_string("XXXX")))


def test_toric_pairs_match_string_operators():
    code, layout = build_toric(2, 1, 3)
    pairs = canonical_pairs(code).pairs
    assert len(pairs) == 2
    strings = [toric_logical(layout, 2, 1, (a,), p) for a in (0, 1) for p in "ZX"]
    span = EchelonBasis([g.symplectic for g in code.generators] + [p.symplectic for pair in pairs for p in pair])
    for s in strings:
        assert code.is_logical(s)
        assert span.contains(s.symplectic)


def test_distances():
    assert code_distance_exact(StabilizerCode.from_strings(FIVE_QUBIT), 5) == 3
    assert code_distance_exact(StabilizerCode.from_strings(STEANE), 5) == 3
    for L in range(2, 9):
        assert code_distance_exact(build_ising(1, L)[0], 3) == 1
    assert code_distance_exact(build_toric(2, 1, 2)[0], 4) == 2
    assert code_distance_exact(build_toric(2, 1, 3)[0], 4) == 3


def test_distance_reports_cap():
    assert code_distance_exact(build_toric(2, 1, 3)[0], 2) is None


def test_distance_rejects_k_zero():
    with pytest.raises(ValueError):
        code_distance_exact(StabilizerCode.from_strings(["ZI", "IZ"]), 3)


def test_distance_monotone_under_adding_a_logical_generator():
    code, layout = build_toric(2, 1, 2)
    d = code_distance_exact(code, 4)
    extra = toric_logical(layout, 2, 1, (0,), "Z")
    bigger = StabilizerCode(code.n_qubits, code.generators + (extra,))
    assert validate(bigger).ok and bigger.k == 1
    assert code_distance_exact(bigger, 4) >= d


def brute_g(code: StabilizerCode, region: list[int]) -> int:
    """log2 |centralizer on R| - log2 |stabilizer group on R| by enumeration."""
    n = code.n_qubits
    cent = 0
    for chars in itertools.product("IXYZ", repeat=len(region)):
        p = PauliOperator.from_sparse(n, dict(zip(region, chars)))
        if code.in_centralizer(p):
            cent += 1
    group = set()
    gens = code.generators
    for mask in range(1 << len(gens)):
        acc = PauliOperator.identity(n)
        for j in range(len(gens)):
            if (mask >> j) & 1:
                acc = multiply(acc, gens[j])
        if not acc.support & ~sum(1 << q for q in region):
            group.add(acc.symplectic)
    return round(math.log2(cent)) - round(math.log2(len(group)))


@pytest.mark.parametrize("code", small_codes()[:3], ids=["five", "steane", "ising"])
def test_g_region_matches_enumeration(code):
    n = code.n_qubits
    for size in range(0, min(n, 4) + 1):
        for region in itertools.combinations(range(n), size):
            assert g_region(code, region) == brute_g(code, list(region))


@given(st.data())
def test_bipartition_law(data):
    code = data.draw(st.sampled_from(small_codes() + [build_toric(3, 1, 2)[0], build_ising(2, 3)[0]]))
    mask = data.draw(st.integers(0, (1 << code.n_qubits) - 1))
    comp = ((1 << code.n_qubits) - 1) & ~mask
    assert g_region(code, mask) + g_region(code, comp) == 2 * code.k


def test_json_round_trip(tmp_path):
    code = StabilizerCode.from_strings(STEANE)
    path = tmp_path / "c.json"
    path.write_text(dump_code(code))
    assert load_code(str(path)) == code
    assert load_code(json.loads(dump_code(code))) == code
