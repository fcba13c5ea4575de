"""Report models shared by the OTM agreement harness, the corpus generator and the suite."""
import json
import os
import time
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class AgreementCase(BaseModel):
    input: str = Field(description="Human readable description of the corpus input")
    expected: str = Field(description="Host-level result")
    got: str = Field(description="Machine-level result, or None when the run did not halt")

    @property
    def agrees(self) -> bool:
        return self.expected == self.got


class OtmAgreementReport(BaseModel):
    checked: Dict[str, int] = Field(default_factory=dict, description="Cases run per operation")
    disagreements: Dict[str, List[AgreementCase]] = Field(
        default_factory=dict, description="Inputs on which machine and host differ, per operation")

    def record(self, operation: str, case: AgreementCase) -> None:
        self.checked[operation] = self.checked.get(operation, 0) + 1
        if not case.agrees:
            self.disagreements.setdefault(operation, []).append(case)

    def agreement(self, operation: str) -> float:
        total = self.checked.get(operation, 0)
        if not total:
            return 1.0
        return 1.0 - len(self.disagreements.get(operation, [])) / total

    @property
    def full_agreement(self) -> bool:
        return not any(self.disagreements.values())

    def summary(self) -> str:
        parts = [f"{op}: {self.checked[op] - len(self.disagreements.get(op, []))}/{self.checked[op]}"
                 for op in sorted(self.checked)]
        return ', '.join(parts)


class CorpusEntry(BaseModel):
    formula: str = Field(description="Formula in s-expression syntax")
    label: str = Field(description="Syntactic class assigned by the generator")
    truth: Optional[int] = Field(default=None, description="Brute-force truth value when computed")


class CriterionResult(BaseModel):
    number: int = Field(description="Acceptance criterion number")
    title: str = Field(description="Short title of the criterion")
    passed: bool = Field(description="Whether every check of the criterion held")
    checked: int = Field(default=0, description="Number of instances checked")
    failures: List[str] = Field(default_factory=list, description="Descriptions of failing instances")
    seconds: Optional[float] = Field(default=None, description="Wall time; omitted in stable mode")


class SuiteReport(BaseModel):
    rank: int = Field(description="Universe rank the suite ran with")
    criteria: List[CriterionResult] = Field(default_factory=list)
    generated_at: Optional[float] = Field(default=None, description="Unix time; omitted in stable mode")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def as_text(self) -> str:
        lines = [f"Acceptance suite (rank {self.rank})", "=" * 40]
        for c in self.criteria:
            glyph = "✅" if c.passed else "❌"
            lines.append(f"{glyph} {c.number}. {c.title}: {c.checked} checked, {len(c.failures)} failing")
            for failure in c.failures[:5]:
                lines.append(f"     - {failure}")
        lines.append("=" * 40)
        lines.append("PASS" if self.passed else "FAIL")
        return '\n'.join(lines) + '\n'

    def save(self, output_dir: str, stable: bool = True) -> Dict[str, str]:
        """Write the text report and the JSON summary; returns both paths."""
        os.makedirs(output_dir, exist_ok=True)
        if not stable:
            self.generated_at = time.time()
        text_path = os.path.join(output_dir, 'suite_report.txt')
        json_path = os.path.join(output_dir, 'suite_summary.json')
        with open(text_path, 'w') as f:
            f.write(self.as_text())
        with open(json_path, 'w') as f:
            f.write(json.dumps(json.loads(self.model_dump_json(exclude_none=stable)), indent=2, sort_keys=True))
        return {'text': text_path, 'json': json_path}
