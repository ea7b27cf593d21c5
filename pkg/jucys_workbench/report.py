"""
Verification reports for JucysWorkbench
Check records, the JSON report document and a pandas text renderer
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

PASS = 'pass'
FAIL = 'fail'
INFO = 'info'

LIMITATION_NOTE = (
    "Group-level identities are checked through representations and finite "
    "quotients; a pass is necessary but not complete evidence."
)


@dataclass
class Check:
    """One verified (or refuted) identity"""

    id: str
    anchor: str
    status: str
    witness: Optional[Dict[str, Any]] = None
    backend: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_json(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}


def check(check_id: str, anchor: str, ok: bool, witness: Optional[Dict[str, Any]] = None,
          backend: Optional[str] = None) -> Check:
    return Check(check_id, anchor, PASS if ok else FAIL, None if ok else witness, backend)


@dataclass
class Report:
    """Collected checks of one suite run"""

    suite: str
    config: Dict[str, Any] = field(default_factory=dict)
    points: List[Dict[str, Any]] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, item: Check) -> Check:
        self.checks.append(item)
        return item

    def extend(self, items: Iterable[Check]) -> None:
        self.checks.extend(items)

    def merge(self, other: 'Report') -> None:
        self.points.extend(p for p in other.points if p not in self.points)
        self.checks.extend(other.checks)
        self.notes.extend(n for n in other.notes if n not in self.notes)

    def add_point(self, point) -> None:
        payload = point.to_json()
        if payload not in self.points:
            self.points.append(payload)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> Dict[str, Any]:
        frame = self.to_frame()
        if frame.empty:
            return {'pass': 0, 'fail': 0, 'by_group': {}}
        frame['group'] = frame['id'].str.split(':').str[0]
        grouped = frame.groupby(['group', 'status']).size().unstack(fill_value=0)
        by_group = {
            group: {status: int(count) for status, count in row.items() if count}
            for group, row in grouped.iterrows()
        }
        counts = frame['status'].value_counts()
        return {
            'pass': int(counts.get(PASS, 0)),
            'fail': int(counts.get(FAIL, 0)),
            'by_group': by_group,
        }

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {'id': c.id, 'anchor': c.anchor, 'status': c.status, 'backend': c.backend or ''}
            for c in self.checks
        ]
        return pd.DataFrame(rows, columns=['id', 'anchor', 'status', 'backend'])

    def to_json(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'config': self.config,
            'points': self.points,
            'checks': [c.to_json() for c in self.checks],
            'notes': self.notes,
            'summary': self.summary(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, default=str)

    def render_text(self) -> str:
        frame = self.to_frame()
        summary = self.summary()
        lines = [f"suite: {self.suite}"]
        if frame.empty:
            lines.append("(no checks)")
        else:
            lines.append(frame.to_string(index=False))
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"pass={summary['pass']} fail={summary['fail']}")
        return '\n'.join(lines) + '\n'


def dims_table(rows: List[Dict[str, Any]]) -> str:
    """Render closure dimensions as a text table"""
    frame = pd.DataFrame(rows)
    return frame.to_string(index=False) + '\n'
