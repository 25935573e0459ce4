import json
import threading

from src.batch import run_batch
from src.reports import CheckResult, Report


def _report() -> Report:
    rows = [
        CheckResult("fam", "dtr", "V 0 2", "V -1 1", "V -1 1", True),
        CheckResult("fam", "star", "U 0 2", "V -4 -2", "differs", False, "printed reading"),
    ]
    return Report.collect("demo", [rows[:1], rows[1:]])


def test_report_summary_and_failures():
    report = _report()
    assert not report.all_passed
    assert report.summary() == "demo: 1/2 checks passed"
    assert [r.check for r in report.failures()] == ["star"]


def test_report_tsv():
    lines = _report().to_tsv().splitlines()
    assert lines[0] == "family\tcheck\tsubject\texpected\tobserved\tpassed\tnote"
    assert lines[1] == "fam\tdtr\tV 0 2\tV -1 1\tV -1 1\tpass\t"
    assert lines[2].endswith("\tFAIL\tprinted reading")


def test_report_json():
    data = json.loads(_report().to_json())
    assert data["all_passed"] is False
    assert data["rows"][1]["note"] == "printed reading"


def test_report_text():
    text = _report().to_text()
    assert "FAIL star" in text
    assert "[printed reading]" in text
    assert text.endswith("demo: 1/2 checks passed\n")


def test_empty_report_passes():
    report = Report("empty", ())
    assert report.all_passed
    assert report.to_text() == "empty: 0/0 checks passed\n"


def test_run_batch_keeps_task_order():
    names = []

    def task(k):
        names.append(threading.current_thread().name)
        return k * k

    tasks = [lambda k=k: task(k) for k in range(20)]
    assert run_batch(tasks, threads=4) == [k * k for k in range(20)]
    assert run_batch(tasks, threads=1) == [k * k for k in range(20)]
    assert run_batch([], threads=4) == []
