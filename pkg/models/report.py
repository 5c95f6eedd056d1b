from dataclasses import dataclass, field
from typing import Any, Dict, List
from models.enums import ExitCode


@dataclass
class RunReport:
    """
    Result of one command: digests and results are deterministic, timing is not.
    """

    command: str
    input_digest: str
    version: str
    results: Dict[str, Any] = field(default_factory=dict)
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    exit_code: ExitCode = ExitCode.OK
    timing: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "version": self.version,
            "exit_code": int(self.exit_code),
            "results": self.results,
            "witnesses": self.witnesses,
            "timing": round(self.timing, 6),
        }
