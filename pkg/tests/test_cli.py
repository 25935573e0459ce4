import io
import json
import sys
from pathlib import Path

import pytest

from src import main as entry
from src.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, EXIT_WINDOW, run

GOLDEN = Path(__file__).resolve().parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("ARQ_THREADS", raising=False)
    monkeypatch.delenv("ARQ_LOG_LEVEL", raising=False)


# --- serial op ---


def test_serial_dtr():
    assert call("serial", "op", "--n", "4", "dtr", "V", "0", "2") == (EXIT_OK, "V -1 1\n", "")


def test_serial_negative_window_and_indices():
    code, out, _ = call("serial", "op", "--n", "4", "--window", "-10:10", "cosyzygy2", "V", "-1", "1")
    assert code == EXIT_OK
    assert out == "V -6 -4\n"


def test_serial_injective_gives_zero():
    assert call("serial", "op", "syzygy", "I", "0")[:2] == (EXIT_OK, "0\n")


def test_serial_almost_split_text():
    code, out, _ = call("serial", "op", "--n", "4", "almost-split", "V", "0", "2")
    assert code == EXIT_OK
    assert out == "0 -> V 0 2 -> V -1 2 + V 0 1 -> V -1 1 -> 0\n"


def test_serial_json_carries_the_printed_reading():
    code, out, _ = call("serial", "op", "--n", "4", "--format", "json", "dtr", "U", "0", "2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["output"] == "U 1 3"
    assert payload["printed_reading"] == "V 1 3"


def test_serial_window_exceeded_exit_code():
    code, out, err = call("serial", "op", "--n", "4", "--window", "0:8", "dtr", "V", "0", "2")
    assert code == EXIT_WINDOW
    assert out == ""
    assert err.startswith("window exceeded:")


@pytest.mark.parametrize(
    "argv",
    [
        ("serial", "op", "almost-split", "V", "-4", "0"),
        ("serial", "op", "dtr", "V", "0", "9"),
        ("serial", "op", "frobenius", "V", "0", "1"),
        ("serial", "op", "--window", "5:1", "dtr", "V", "0", "1"),
        ("serial",),
        (),
    ],
)
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == EXIT_USAGE
    assert err.startswith("error:")


def test_help_exits_cleanly(capsys):
    assert call("--help")[0] == EXIT_OK
    assert "serial" in capsys.readouterr().out


# --- serial ar ---


def test_serial_ar_dot_golden():
    code, out, _ = call("serial", "ar", "--n", "1", "--window", "0:3", "--format", "dot")
    assert code == EXIT_OK
    assert out == (GOLDEN / "serial_n1.dot").read_text(encoding="utf-8")


def test_serial_ar_ascii_golden():
    code, out, _ = call("serial", "ar", "--n", "1", "--window", "0:3")
    assert code == EXIT_OK
    assert out == (GOLDEN / "serial_n1.txt").read_text(encoding="utf-8")


def test_serial_ar_json_golden():
    code, out, _ = call("serial", "ar", "--n", "1", "--window", "0:3", "--format", "json")
    assert code == EXIT_OK
    assert out == (GOLDEN / "serial_n1.json").read_text(encoding="utf-8")


def test_serial_ar_summary():
    code, out, _ = call("serial", "ar", "--n", "4", "--window", "-8:4", "--format", "text")
    assert code == EXIT_OK
    assert "nodes: 55" in out
    assert "mesh violations: 0" in out


def test_serial_ar_stable_json():
    code, out, _ = call("serial", "ar", "--n", "4", "--window", "-8:4", "--stable", "--format", "json")
    assert code == EXIT_OK
    assert len(json.loads(out)["nodes"]) == 46


# --- serial verify, realize, dimvec ---


def test_serial_verify_small():
    code, out, _ = call("serial", "verify", "--n", "1", "--window", "-4:4", "--margin", "2")
    assert code == EXIT_OK
    assert out.rstrip().endswith("checks passed")


def test_serial_verify_tsv_subset():
    code, out, _ = call(
        "serial", "verify", "--n", "1", "--window", "-4:4", "--margin", "2",
        "--ops", "dtr,syzygy", "--side", "V", "--format", "tsv",
    )
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("family\tcheck")
    assert {line.split("\t")[1] for line in lines[1:]} == {"dtr", "syzygy", "coherence"}


def test_serial_verify_thread_count_does_not_change_output():
    base = ("serial", "verify", "--n", "1", "--window", "-4:4", "--margin", "2", "--format", "tsv")
    assert call(*base, "--threads", "1") == call(*base, "--threads", "3")


@pytest.mark.parametrize(
    "argv",
    [
        ("serial", "verify", "--n", "1", "--window", "-4:4", "--margin", "2", "--format", "tsv"),
        ("serial", "ar", "--n", "2", "--window", "-4:4", "--format", "json"),
        ("qsl2", "verify", "--window", "6", "--kmax", "1", "--nmax", "1", "--format", "tsv"),
        ("qsl2", "ar", "--window", "6", "--kmax", "1", "--nmax", "1", "--format", "dot"),
    ],
)
def test_output_does_not_depend_on_thread_environment(monkeypatch, argv):
    monkeypatch.setenv("ARQ_THREADS", "1")
    single = call(*argv)
    monkeypatch.setenv("ARQ_THREADS", "4")
    pooled = call(*argv)
    assert single[0] == EXIT_OK
    assert single == pooled


def test_serial_verify_window_errors():
    assert call("serial", "verify", "--n", "1", "--window", "-4:4")[0] == EXIT_WINDOW
    assert call("serial", "verify", "--n", "1", "--window", "-4:4", "--range", "-4:4")[0] == EXIT_WINDOW
    assert call("serial", "verify", "--n", "1", "--window", "-4:4", "--margin", "2", "--threads", "0")[0] == EXIT_USAGE


def test_serial_realize_json():
    code, out, _ = call("serial", "realize", "--n", "1", "--window", "0:3", "S", "1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["dim"] == {"1": "1"}
    assert data["name"] == "S(1)"


def test_serial_dimvec():
    assert call("serial", "dimvec", "--n", "4", "I", "3")[:2] == (EXIT_OK, "-1:1 0:1 1:1 2:1 3:1\n")


# --- qsl2 ---


def test_qsl2_dimvec():
    assert call("qsl2", "dimvec", "--k", "1", "--n", "2", "--window", "8")[:2] == (EXIT_OK, "1:1 2:1 3:1\n")


def test_qsl2_dimvec_outside_window():
    assert call("qsl2", "dimvec", "--k", "5", "--n", "4", "--window", "8")[0] == EXIT_WINDOW


def test_qsl2_symbolic_operations():
    assert call("qsl2", "op", "syzygy", "S", "2")[:2] == (EXIT_OK, "O^1 S 2\n")
    assert call("qsl2", "op", "dtr", "O^1", "S", "2")[:2] == (EXIT_OK, "O^-1 S 2\n")
    assert call("qsl2", "op", "dtr", "I", "1")[:2] == (EXIT_OK, "0\n")
    assert call("qsl2", "op", "nakayama", "O^2", "S", "1")[:2] == (EXIT_OK, "O^2 S 1\n")
    code, out, _ = call("qsl2", "op", "almost-split", "S", "0")
    assert out == "0 -> S(0) -> O^-1S(1) -> O^-2S(0) -> 0\n"
    assert call("qsl2", "op", "almost-split", "I", "1")[0] == EXIT_USAGE


def test_qsl2_ar_dot_golden():
    code, out, _ = call("qsl2", "ar", "--window", "6", "--kmax", "1", "--nmax", "1", "--format", "dot")
    assert code == EXIT_OK
    assert out == (GOLDEN / "qsl2_k1_n1.dot").read_text(encoding="utf-8")


@pytest.mark.parametrize("fmt, suffix", [("ascii", "txt"), ("json", "json")])
def test_qsl2_ar_goldens(fmt, suffix):
    code, out, _ = call("qsl2", "ar", "--window", "6", "--kmax", "1", "--nmax", "1", "--format", fmt)
    assert code == EXIT_OK
    assert out == (GOLDEN / f"qsl2_k1_n1.{suffix}").read_text(encoding="utf-8")


def test_qsl2_ar_ascii_draws_each_component():
    code, out, _ = call("qsl2", "ar", "--window", "6", "--kmax", "1", "--nmax", "1")
    assert code == EXIT_OK
    first, second = out.split("\n\n")
    assert "I(0)" in first and "O^1S(0)" in first
    assert "I(1)" in second and "O^1S(1)" in second


def test_qsl2_check_symmetric():
    code, out, _ = call("qsl2", "check-symmetric", "--window", "6", "--margin", "2", "--kmax", "1", "--nmax", "1")
    assert code == EXIT_OK, out
    assert "gram_rank" in out


def test_qsl2_verify():
    code, out, _ = call("qsl2", "verify", "--window", "6", "--kmax", "1", "--nmax", "1", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["all_passed"] is True


def test_qsl2_realize():
    code, out, _ = call("qsl2", "realize", "--window", "6", "O^1", "S", "0")
    assert code == EXIT_OK
    assert json.loads(out)["dim"] == {"0": "1", "1": "1"}


def test_qsl2_census_is_seeded():
    argv = ("qsl2", "census", "--window", "8", "--samples", "2", "--seed", "1", "--format", "json")
    first, second = call(*argv), call(*argv)
    assert first == second
    assert first[0] in (EXIT_OK, EXIT_FAILED)
    assert len(json.loads(first[1])["rows"]) == 3


# --- environment ---


def test_bad_environment_is_a_usage_error(monkeypatch):
    monkeypatch.setenv("ARQ_THREADS", "many")
    code, _, err = call("serial", "op", "dtr", "V", "0", "2")
    assert code == EXIT_USAGE
    assert "ARQ_THREADS" in err


def test_main_exits_with_the_run_code(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["arq", "serial", "op", "--n", "4", "dtr", "V", "0", "2"])
    with pytest.raises(SystemExit) as exc:
        entry.main()
    assert exc.value.code == 0
    assert capsys.readouterr().out == "V -1 1\n"
