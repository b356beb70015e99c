"""
Law results and suite reports. Reports are deterministic for a given document
and seed: entries are ordered by id and the JSON rendering sorts its keys.
"""
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

EXIT_OK = 0
EXIT_LAW_FAILURE = 1
EXIT_INPUT_ERROR = 2


@dataclass(frozen=True)
class LawResult:
    id: str
    anchor: str
    instance: str
    passed: bool
    witness: Optional[Dict[str, str]] = None

    def to_dict(self) -> Dict[str, Any]:
        entry: Dict[str, Any] = {
            "id": self.id,
            "anchor": self.anchor,
            "instance": self.instance,
            "pass": self.passed,
        }
        if not self.passed and self.witness:
            entry["witness"] = dict(self.witness)
        return entry


def law(
    id: str, anchor: str, instance: str, passed: bool, **witness: Any
) -> LawResult:
    """law builds a LawResult, keeping the witness only for failures."""
    return LawResult(
        id,
        anchor,
        instance,
        bool(passed),
        None if passed else {k: str(v) for k, v in witness.items()},
    )


@dataclass
class Report:
    suite: str
    seed: int
    entries: List[LawResult] = field(default_factory=list)

    def extend(self, results: List[LawResult]) -> None:
        self.entries.extend(results)

    @property
    def passed(self) -> int:
        return sum(1 for e in self.entries if e.passed)

    @property
    def failed(self) -> int:
        return len(self.entries) - self.passed

    @property
    def failures(self) -> List[LawResult]:
        return [e for e in self.entries if not e.passed]

    def ordered(self) -> List[LawResult]:
        # stable: entries sharing an id keep their insertion order
        return sorted(self.entries, key=lambda e: e.id)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "entries": [e.to_dict() for e in self.ordered()],
            "passed": self.passed,
            "failed": self.failed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def format_text(self, verbose: bool = False) -> str:
        lines = []
        for entry in self.ordered():
            if entry.passed and not verbose:
                continue
            status = "PASS" if entry.passed else "FAIL"
            lines.append(f"{status} {entry.id} [{entry.anchor}] {entry.instance}")
            for key, value in sorted((entry.witness or {}).items()):
                lines.append(f"    {key}: {value}")
        lines.append(f"{self.suite}: {self.passed} passed, {self.failed} failed (seed {self.seed})")
        return "\n".join(lines)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.failed == 0 else EXIT_LAW_FAILURE


def derive_seed(seed: int, label: str) -> int:
    """A 64 bit sub-seed for `label`, independent of the order entries run in."""
    digest = hashlib.blake2b(f"{seed}:{label}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def render(report: Report, as_json: bool, verbose: bool = False) -> str:
    return report.to_json() if as_json else report.format_text(verbose)
