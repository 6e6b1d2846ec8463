import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from export_data import export, to_csv, to_json

logger = logging.getLogger(__name__)

VERDICTS = ("matches", "typo-suspected", "inconsistent")

MANDATORY = (
    "braid.verbatim_unitarity",
    "braid.yang_baxterization_form",
    "braid.hamiltonian_scale",
    "gates.cnot_distance",
    "kaon.violation_threshold",
    "kaon.entropy_boundary",
)

CSV_HEADER = ("section", "verbatim", "corrected", "residual", "verdict")


@dataclass
class Finding:
    key: str
    rank: int            # position of the cited passage in the source text
    section: str         # citation of the printed formula
    verbatim: str
    corrected: str
    residual: float
    verdict: str
    details: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict '{self.verdict}'")
        if not self.section:
            raise ValueError(f"finding '{self.key}' has no citation")


@dataclass
class DiscrepancyReport:
    findings: List[Finding]
    checks: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def ordered(self) -> List[Finding]:
        return sorted(self.findings, key=lambda f: (f.rank, f.key))

    def missing_mandatory(self) -> List[str]:
        keys = {f.key for f in self.findings}
        return [k for k in MANDATORY if k not in keys]

    @property
    def failed(self) -> List[str]:
        out = [name for name, ok in sorted(self.checks.items()) if not ok]
        out += [f"missing finding: {k}" for k in self.missing_mandatory()]
        return out

    def payload(self) -> dict:
        return {
            "findings": [
                {
                    "key": f.key,
                    "section": f.section,
                    "verbatim": f.verbatim,
                    "corrected": f.corrected,
                    "residual": f.residual,
                    "verdict": f.verdict,
                    "details": f.details,
                }
                for f in self.ordered()
            ],
            "checks": self.checks,
            "failed": self.failed,
            "notes": self.notes,
        }

    def rows(self) -> List[tuple]:
        return [(f.section, f.verbatim, f.corrected, f.residual, f.verdict) for f in self.ordered()]


def render(report: DiscrepancyReport, fmt: str = "json") -> str:
    if fmt == "csv":
        return to_csv(CSV_HEADER, report.rows())
    return to_json(report.payload())


def emit_report(report: DiscrepancyReport, fmt: str = "json", out: Optional[str] = None) -> int:
    """
    Write the report to `out` (stdout when None).
    Returns the exit status: 1 when a check failed or a mandatory finding is missing.
    """
    for f in report.ordered():
        logger.debug("finding %s [%s] residual=%.3e", f.key, f.verdict, f.residual)
    export(render(report, fmt), out)
    if report.failed:
        logger.error("report has failures: %s", ", ".join(report.failed))
        return 1
    return 0
