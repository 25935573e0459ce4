from fractions import Fraction

import pytest

from src import arquiver
from src.errors import ContractViolation, InjectiveInput, WindowExceeded
from src.exactlin import rank
from src.families import qsl2
from src.families.qsl2 import BlockFamily, InjectiveLabel, StringObject, parse_object, sym_sequence
from src.quiverrep.presentation import Path
from src.quiverrep.representation import direct_sum


# --- objects ---


def test_object_names():
    assert StringObject(0, 1).text() == "S 1"
    assert StringObject(2, 3).text() == "O^2 S 3"
    assert StringObject(-1, 0).label() == "O^-1S(0)"
    assert StringObject(2, 3).node_id() == "O:2:3"
    assert InjectiveLabel(2).label() == "I(2)"
    with pytest.raises(ContractViolation):
        StringObject(0, -1)


def test_parse_object():
    assert parse_object(["O^2", "S", "3"]) == StringObject(2, 3)
    assert parse_object(["O^-1", "S", "0"]) == StringObject(-1, 0)
    assert parse_object(["S", "1"]) == StringObject(0, 1)
    assert parse_object(["I", "2"]) == InjectiveLabel(2)
    with pytest.raises(ContractViolation):
        parse_object(["X", "1"])


def test_family_validation():
    with pytest.raises(ContractViolation):
        BlockFamily(3)
    with pytest.raises(ContractViolation):
        BlockFamily(10, 0)
    with pytest.raises(ContractViolation):
        BlockFamily(10, 10)
    assert BlockFamily.with_depth(10, 2).margin == 6
    assert BlockFamily.with_depth(4, 2).margin == 3
    assert BlockFamily(10, 6).interior == (0, 1, 2, 3, 4)


# --- dimension vectors ---


def test_injective_dimension_vectors(block8):
    assert block8.injective(0).dim_vector() == {0: 2, 1: 1}
    assert block8.injective(3).dim_vector() == {2: 1, 3: 2, 4: 1}


def test_syzygy_dimension_vectors(block8):
    assert block8.dim_vector(StringObject(1, 0)) == {0: 1, 1: 1}
    assert block8.dim_vector(StringObject(1, 2)) == {1: 1, 2: 1, 3: 1}
    assert block8.dim_vector(StringObject(-1, 2)) == {1: 1, 2: 1, 3: 1}
    assert block8.dim_vector(StringObject(2, 3)) == {v: 1 for v in range(1, 6)}
    # next to vertex 0 the support stays two wide
    assert block8.dim_vector(StringObject(3, 0)) == {2: 1, 3: 1}


def test_window_is_enforced(block8):
    with pytest.raises(WindowExceeded):
        block8.realize(StringObject(5, 4))
    with pytest.raises(WindowExceeded):
        block8.injective(8)


def test_identify(block8):
    assert block8.identify(block8.realize(StringObject(-2, 1))) == StringObject(-2, 1)
    assert block8.identify(block8.injective(2)) == InjectiveLabel(2)
    pair = direct_sum(block8.realize(StringObject(0, 1)), block8.realize(StringObject(0, 1)))
    assert block8.identify(pair) is None


# --- sequences ---


def test_sym_sequence_shapes():
    seq = sym_sequence(0, 0)
    assert seq.middle == (StringObject(0, 1), InjectiveLabel(0))
    assert seq.text() == "0 -> O^1S(0) -> S(1) + I(0) -> O^-1S(0) -> 0"
    seq = sym_sequence(1, 2)
    assert seq.left == StringObject(2, 2)
    assert seq.middle == (StringObject(1, 1), StringObject(1, 3))
    assert seq.right == StringObject(0, 2)


def test_almost_split_starting_and_ending(block8):
    assert qsl2.almost_split(block8, StringObject(2, 2)) == sym_sequence(1, 2)
    assert qsl2.almost_split_ending(block8, StringObject(0, 2)) == sym_sequence(1, 2)
    with pytest.raises(InjectiveInput):
        qsl2.almost_split(block8, InjectiveLabel(1))
    with pytest.raises(InjectiveInput):
        qsl2.almost_split_ending(block8, InjectiveLabel(1))


def test_sequences_are_almost_split(block8):
    report = qsl2.verify_sequences(block8, range(0, 2), range(0, 2))
    assert report.all_passed, report.to_text()
    assert {"dim_additivity", "almost_split", "dtr_endpoint", "star_exact"} <= {r.check for r in report.rows}


def test_sequence_beyond_the_window_fails_cleanly():
    report = qsl2.verify_sequences(BlockFamily(4, 1), [2], [2])
    assert not report.all_passed
    assert report.rows[0].observed == "window exceeded"


# --- object checks ---


def test_injectives_check(block8):
    report = qsl2.check_injectives(block8, range(3))
    assert report.all_passed, report.to_text()


def test_radical_sequence(block8):
    realized, report = qsl2.radical_sequence(block8, 2)
    assert realized is not None
    assert realized.non_split is True
    assert report.all_passed, report.to_text()


def test_object_level_identities(block8):
    report = qsl2.verify_objects(block8, 1, 2)
    assert report.all_passed, report.to_text()
    growth = [r for r in report.rows if r.check == "width_growth"]
    assert [r.subject for r in growth] == ["O^-1S(1)", "O^1S(1)", "O^-1S(2)", "O^1S(2)"]


# --- symmetry ---


def test_symmetrizing_form_reads_interior_loops():
    fam = BlockFamily(6, 2)
    assert fam.interior == (0, 1, 2, 3, 4)
    assert qsl2.symmetrizing_form(fam, {Path(1, 1, (1, 0)): Fraction(3)}) == 3
    assert qsl2.symmetrizing_form(fam, {Path(6, 6, (11, 10)): Fraction(1)}) == 0
    assert qsl2.symmetrizing_form(fam, {Path(0, 1, (0,)): Fraction(1)}) == 0


def test_gram_matrix_is_symmetric_and_invertible():
    basis, gram = qsl2.gram_matrix(BlockFamily(6, 2))
    assert len(basis) == 18
    assert gram == gram.transpose()
    assert rank(gram) == 18


def test_check_symmetric():
    report = qsl2.check_symmetric(BlockFamily(6, 2), 1, 1)
    assert report.all_passed, report.to_text()
    assert sum(1 for r in report.rows if r.check == "nakayama_identity") == 8


# --- AR quiver ---


def test_ar_quiver_splits_by_parity():
    q = qsl2.ar_quiver(BlockFamily(6, 2), 1, 1)
    assert arquiver.components(q) == [
        ("O:1:0", "I:0", "O:-1:0", "O:0:1"),
        ("O:0:0", "O:1:1", "I:1", "O:-1:1"),
    ]
    assert q.tau == {"O:1:0": "O:-1:0", "O:1:1": "O:-1:1"}
    assert arquiver.mesh_lint(q) == []


def test_ar_quiver_meshes_hold_inside():
    q = qsl2.ar_quiver(BlockFamily(8, 2), 2, 3)
    assert any(not n.incomplete and n.node_id in q.tau for n in q.nodes)
    assert arquiver.mesh_lint(q) == []
    for group in arquiver.components(q):
        parities = set()
        for node_id in group:
            parts = node_id.split(":")
            if parts[0] == "O":
                parities.add((int(parts[1]) + int(parts[2])) % 2)
            else:
                parities.add((int(parts[1]) + 1) % 2)
        assert len(parities) == 1


# --- census ---


def test_census_is_reproducible(block8):
    first = qsl2.orbit_census(block8, 4, 3)
    second = qsl2.orbit_census(block8, 4, 3)
    assert first.rows == second.rows
    assert len(first.rows) == 5
    assert first.rows[-1].subject == "total"
    assert first.title == "qsl2([0,8]) orbit census (seed 3)"


# --- acceptance sweeps ---


@pytest.mark.slow
def test_injectives_up_to_six():
    report = qsl2.check_injectives(BlockFamily(8, 6), range(7))
    assert report.all_passed, report.to_text()


@pytest.mark.slow
def test_sequence_sweep(block):
    report = qsl2.verify_sequences(block, range(-2, 3), range(5), threads=2)
    assert report.all_passed, report.to_text()


@pytest.mark.slow
def test_symmetry_sweep():
    report = qsl2.check_symmetric(BlockFamily(8, 2), 2, 4)
    assert report.all_passed, report.to_text()
