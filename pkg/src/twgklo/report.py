"""Outcome records shared by the DiffOp and Poisson checkers."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import List, Optional

WITNESS_CHARS = 600

# statuses that do not count as failures
OK_STATUSES = ("pass", "expected-fail", "info")


@dataclass
class CheckReport:
    relation: str
    indices: tuple
    shape: str
    status: str
    witness: Optional[str] = None
    ms: float = 0.0
    note: str = ""
    cases: List["CheckReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status in OK_STATUSES

    def to_dict(self) -> dict:
        d = asdict(self)
        d["indices"] = list(self.indices)
        d["ms"] = round(self.ms, 1)
        if not self.cases:
            d.pop("cases")
        return d


def witness_of(d) -> Optional[str]:
    """Smallest nonzero term of a DiffOp, as text."""
    w = d.first_nonzero()
    if w is None:
        return None
    e, f = w
    s = "beta%s: %s" % (list(e), f.numerator().to_str())
    if len(s) > WITNESS_CHARS:
        s = s[:WITNESS_CHARS] + "..."
    return s
