from dataclasses import dataclass, field
from typing import Optional

from strenum import StrEnum


class CurveMode(StrEnum):
    REGULATED = "regulated"
    CK = "ck"


class Membership(StrEnum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    INDETERMINATE = "indeterminate"


class CheckStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"


@dataclass
class Check:
    """
    One line of a report
    """

    name: str
    anchor: str
    status: CheckStatus
    value: Optional[float] = None
    bound: Optional[float] = None
    runtime: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status == CheckStatus.FAIL

    def payload(self, timing: bool = True) -> dict:
        data = {
            "name": self.name,
            "anchor": self.anchor,
            "status": str(self.status),
            "value": self.value,
            "bound": self.bound,
        }

        if timing:
            data["runtime"] = round(self.runtime, 6)

        if self.detail:
            data["detail"] = self.detail

        return data
