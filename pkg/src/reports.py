import json
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional, Tuple

_COLUMNS = ("family", "check", "subject", "expected", "observed", "passed", "note")


@dataclass(frozen=True)
class CheckResult:
    family: str
    check: str
    subject: str
    expected: str
    observed: str
    passed: bool
    note: Optional[str] = None


@dataclass(frozen=True)
class Report:
    title: str
    rows: Tuple[CheckResult, ...]

    @classmethod
    def collect(cls, title: str, chunks: Iterable[Iterable[CheckResult]]) -> "Report":
        rows: List[CheckResult] = []
        for chunk in chunks:
            rows.extend(chunk)
        return cls(title, tuple(rows))

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> Tuple[CheckResult, ...]:
        return tuple(r for r in self.rows if not r.passed)

    def summary(self) -> str:
        passed = sum(1 for r in self.rows if r.passed)
        return f"{self.title}: {passed}/{len(self.rows)} checks passed"

    def to_tsv(self) -> str:
        lines = ["\t".join(_COLUMNS)]
        for r in self.rows:
            lines.append(
                "\t".join(
                    [r.family, r.check, r.subject, r.expected, r.observed, "pass" if r.passed else "FAIL", r.note or ""]
                )
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "title": self.title,
            "all_passed": self.all_passed,
            "rows": [asdict(r) for r in self.rows],
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        width = max((len(r.check) for r in self.rows), default=5)
        lines = []
        for r in self.rows:
            status = "ok  " if r.passed else "FAIL"
            line = f"{status} {r.check.ljust(width)}  {r.subject} -> {r.observed} (expected {r.expected})"
            if r.note:
                line += f"  [{r.note}]"
            lines.append(line)
        lines.append(self.summary())
        return "\n".join(lines) + "\n"
