"""
Verification report records.

Field order in these models is the key order of the line-delimited JSON
stream; do not reorder fields.
"""
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, Field

from src.core.perm_groups import SubgroupRef


class Statement(str, Enum):
    L2_1 = "L2.1"
    L2_2 = "L2.2"
    L2_3 = "L2.3"
    L2_4 = "L2.4"
    T2_5 = "T2.5"
    T2_6 = "T2.6"


class Status(str, Enum):
    VERIFIED = "verified"
    HYPOTHESIS_NOT_MET = "hypothesis-not-met"
    COUNTEREXAMPLE = "counterexample"


ALL_STATEMENTS: List[str] = [s.value for s in Statement]
ALL_STATUSES: List[str] = [s.value for s in Status]


class GroupInfo(BaseModel):
    name: str
    order: int


class ReportStats(BaseModel):
    cases_checked: int = 0
    non_vacuous: int = 0
    sampled: bool = False
    population: Optional[int] = None
    extra: Dict[str, int] = Field(default_factory=dict)

    def bump(self, key: str, amount: int = 1):
        self.extra[key] = self.extra.get(key, 0) + amount


class VerificationReport(BaseModel):
    statement: Statement
    group: GroupInfo
    sigma: str
    status: Status
    witness: Dict[str, Any] = Field(default_factory=dict)
    stats: ReportStats = Field(default_factory=ReportStats)

    @property
    def sort_key(self):
        return (self.group.name, self.sigma, self.statement.value)

    def to_line(self) -> str:
        return self.model_dump_json()


def subgroup_witness(H: SubgroupRef) -> Dict[str, Any]:
    """Generators in cycle notation plus the order: enough to rebuild H."""
    return {"generators": [str(g) for g in H.generators], "order": H.order}


def subgroup_list_witness(subgroups: Iterable[SubgroupRef]) -> List[Dict[str, Any]]:
    return [subgroup_witness(H) for H in subgroups]
