"""Circom ``.sym`` files: ``label,wire,component,name`` per line."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..errors import FormatError


@dataclass(frozen=True)
class SymRow:
    label: int
    wire: int
    component: int
    name: str


@dataclass
class SymTable:
    rows: list = field(default_factory=list)

    def wire_names(self) -> dict:
        """First name seen for each live wire; optimised-out rows (wire -1) skipped."""
        out: dict = {}
        for row in self.rows:
            if row.wire >= 0:
                out.setdefault(row.wire, row.name)
        return out

    def __len__(self):
        return len(self.rows)


def parse_sym(text: str | Iterable[str]) -> SymTable:
    lines = text.splitlines() if isinstance(text, str) else text
    table = SymTable()
    seen: set = set()
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",", 3)
        if len(parts) != 4:
            raise FormatError(f"expected 4 comma-separated fields, got {len(parts)}", line=lineno)
        try:
            label, wire, component = (int(x) for x in parts[:3])
        except ValueError:
            raise FormatError("non-integer id", line=lineno) from None
        name = parts[3].strip()
        if name in seen:
            raise FormatError(f"duplicate signal name {name!r}", line=lineno)
        seen.add(name)
        table.rows.append(SymRow(label, wire, component, name))
    return table


def format_sym(table: SymTable) -> str:
    return "".join(f"{r.label},{r.wire},{r.component},{r.name}\n" for r in table.rows)
