import pytest

from src import arquiver
from src.errors import ContractViolation, InjectiveInput, WindowExceeded
from src.families import serial
from src.families.serial import ZERO, Interval, SerialFamily, Side, parse_interval
from src.quiverrep.representation import direct_sum


def V(i, j):
    return Interval(Side.V, i, j)


def U(i, j):
    return Interval(Side.U, i, j)


# --- intervals ---


def test_interval_needs_j_at_least_i_minus_one():
    assert ZERO.is_zero
    with pytest.raises(ContractViolation):
        V(3, 1)


def test_interval_labels():
    assert V(1, 1).label(4) == "S(1)"
    assert V(0, 4).label(4) == "I(4)"
    assert U(0, 4).label(4) == "I'(0)"
    assert U(1, 1).label(4) == "S'(1)"
    assert V(0, 2).label(4) == "V(0,2)"
    assert ZERO.text() == "0"
    assert V(0, 2).node_id() == "V:0:2"


def test_parse_interval():
    assert parse_interval(["V", "0", "2"], 4) == V(0, 2)
    assert parse_interval(["u", "1", "2"], 4) == U(1, 2)
    assert parse_interval(["S", "2"], 4) == V(2, 2)
    assert parse_interval(["I", "3"], 4) == V(-1, 3)
    with pytest.raises(ContractViolation):
        parse_interval(["V", "a", "b"], 4)
    with pytest.raises(ContractViolation):
        parse_interval(["W", "1"], 4)
    with pytest.raises(ContractViolation):
        parse_interval([], 4)


def test_family_validation():
    with pytest.raises(ContractViolation):
        SerialFamily(0, 0, 10)
    with pytest.raises(ContractViolation):
        SerialFamily(4, 0, 5)
    fam = SerialFamily(4, 0, 8)
    with pytest.raises(ContractViolation):
        fam.check(V(0, 5))
    with pytest.raises(ContractViolation):
        fam.safe_range(2)
    assert fam.safe_range() == (5, 3)


# --- closed forms ---


def test_closed_forms_on_right_comodules(serial4):
    assert serial.single_syzygy(serial4, V(0, 0)) == V(1, 4)
    assert serial.single_syzygy(serial4, V(0, 2)) == V(3, 4)
    assert serial.single_cosyzygy(serial4, V(0, 2)) == V(-2, -1)
    assert serial.cosyzygy2(serial4, V(0, 2)) == V(-5, -3)
    assert serial.nakayama_cf(serial4, V(0, 2)) == V(4, 6)
    assert serial.dtr_cf(serial4, V(0, 2)) == V(-1, 1)
    assert serial.dtr_inverse_cf(serial4, V(-1, 1)) == V(0, 2)
    assert serial.transpose_cf(serial4, V(0, 2)) == U(-1, 1)
    assert serial.star_cf(serial4, V(0, 2)) == U(4, 6)


def test_closed_forms_on_left_comodules(serial4):
    assert serial.single_syzygy(serial4, U(0, 2)) == U(-2, -1)
    assert serial.single_cosyzygy(serial4, U(0, 2)) == U(3, 4)
    assert serial.cosyzygy2(serial4, U(0, 2)) == U(5, 7)
    assert serial.dtr_cf(serial4, U(0, 2)) == U(1, 3)
    assert serial.transpose_cf(serial4, U(0, 2)) == V(1, 3)
    assert serial.star_cf(serial4, U(4, 6)) == V(0, 2)


def test_injective_inputs(serial4):
    injective = V(-4, 0)
    assert serial4.is_injective(injective)
    assert serial.single_syzygy(serial4, injective) == ZERO
    assert serial.dtr_cf(serial4, injective) == ZERO
    assert serial.nakayama_cf(serial4, injective) == V(0, 4)
    assert serial.injective_of_simple(serial4, 0) == injective


def test_printed_reading_for_left_inputs(serial4):
    assert serial.printed_u_reading(serial4, "dtr", U(0, 2)) == V(1, 3)
    assert serial.printed_u_reading(serial4, "nakayama", U(4, 6)) == V(0, 2)
    assert serial.printed_u_reading(serial4, "dtr", V(0, 2)) is None
    assert serial.printed_u_reading(serial4, "star", U(0, 2)) is None


def test_results_outside_the_window_raise():
    fam = SerialFamily(4, 0, 8)
    with pytest.raises(WindowExceeded):
        serial.dtr_cf(fam, V(0, 2))
    with pytest.raises(WindowExceeded):
        fam.realize(V(-1, 1))


# --- almost split sequences ---


def test_almost_split_sequence(serial4):
    seq = serial.almost_split(serial4, V(0, 2))
    assert seq.middle == (V(-1, 2), V(0, 1))
    assert seq.right == V(-1, 1)
    assert seq.text() == "0 -> V 0 2 -> V -1 2 + V 0 1 -> V -1 1 -> 0"
    assert serial.almost_split_ending(serial4, V(-1, 1)) == seq


def test_almost_split_from_a_simple_has_one_middle_term(serial4):
    seq = serial.almost_split(serial4, V(1, 1))
    assert seq.middle == (V(0, 1),)
    assert seq.right == V(0, 0)


def test_almost_split_on_injective_raises(serial4):
    with pytest.raises(InjectiveInput):
        serial.almost_split(serial4, V(-4, 0))
    with pytest.raises(InjectiveInput):
        serial.almost_split_ending(serial4, V(0, 4))


def test_almost_split_sequence_is_realized_non_split(serial4):
    realized = serial.realize_sequence(serial4, serial.almost_split(serial4, V(0, 2)))
    assert realized is not None
    assert realized.non_split is True


# --- identification ---


def test_identify(serial4):
    assert serial4.identify(serial4.realize(V(0, 2))) == V(0, 2)
    assert serial4.identify(serial4.realize(U(0, 2))) == U(0, 2)
    assert serial4.identify(direct_sum(serial4.realize(V(0, 0)), serial4.realize(V(0, 1)))) is None


# --- AR quiver ---


def test_ar_quiver_counts():
    q = serial.ar_quiver(SerialFamily(4, -8, 4))
    assert len(q.nodes) == 55
    assert sum(1 for n in q.nodes if n.injective) == 9
    st = arquiver.stable(q)
    assert len(st.nodes) == 46
    assert {row for _, row, _ in st.layout} == {0, 1, 2, 3}
    assert arquiver.mesh_lint(q) == []
    assert arquiver.mesh_lint(st) == []


def test_ar_quiver_orders_nodes_by_length_then_start():
    q = serial.ar_quiver(SerialFamily(1, 0, 3))
    assert [n.node_id for n in q.nodes] == ["V:0:0", "V:1:1", "V:2:2", "V:3:3", "V:0:1", "V:1:2", "V:2:3"]
    assert q.tau == {"V:1:1": "V:0:0", "V:2:2": "V:1:1", "V:3:3": "V:2:2"}
    incomplete = {n.node_id for n in q.nodes if n.incomplete}
    assert incomplete == {"V:0:0", "V:3:3", "V:0:1", "V:2:3"}


# --- verification ---


def test_intervals_in_range():
    found = serial.intervals_in(0, 2, 1, (Side.V,))
    assert found == [V(0, 0), V(0, 1), V(1, 1), V(1, 2), V(2, 2)]


def test_closed_form_coherence(serial4):
    rows = serial.closed_form_coherence(serial4, serial.intervals_in(-1, 2, 4))
    assert rows
    assert all(r.passed for r in rows)


def test_verify_small_family_passes():
    fam = SerialFamily(1, -4, 4)
    report = serial.verify(fam, margin=2)
    assert report.title == "serial(n=1,[-4,4]) on [-2,2]"
    assert report.all_passed, report.to_text()
    checks = {r.check for r in report.rows}
    assert {"dtr", "almost_split", "self_projective", "coherence"} <= checks


def test_verify_is_independent_of_thread_count():
    fam = SerialFamily(1, -4, 4)
    ops = ("syzygy", "dtr", "almost_split")
    single = serial.verify(fam, operations=ops, margin=2, threads=1)
    pooled = serial.verify(fam, operations=ops, margin=2, threads=4)
    assert single.rows == pooled.rows


def test_verify_rejects_bad_requests():
    fam = SerialFamily(1, -4, 4)
    with pytest.raises(WindowExceeded):
        serial.verify(fam, interval_range=(-4, 4))
    with pytest.raises(ContractViolation):
        serial.verify(fam, operations=("frobenius",), margin=2)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_verify_sweep(n):
    fam = SerialFamily(n, -4 * n - 4, 2 * n + 4)
    report = serial.verify(fam, interval_range=(-n, 1))
    assert report.all_passed, report.to_text()
    assert any(r.check == "star_exact" for r in report.rows)
