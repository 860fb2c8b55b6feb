"""Instance files: two matroids over a shared universe ``0..n-1``.

The JSON layout is ``{"n": int, "matroid1": {...}, "matroid2": {...}}`` with
an optional ``"metadata"`` object.  Loading validates both descriptors and
truncates the matroid of larger rank so both share the rank ``k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .matroids import (MatroidDescriptor, MatroidView, Truncated, ValidationError,
                       descriptor_from_dict, validate_descriptor)


@dataclass
class Instance:
    n: int
    matroid1: MatroidDescriptor
    matroid2: MatroidDescriptor
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        validate_descriptor(self.matroid1, self.n)
        validate_descriptor(self.matroid2, self.n)
        self.matroid1, self.matroid2 = equalize_ranks(self.matroid1, self.matroid2, self.n)

    @property
    def k(self) -> int:
        return self.matroid1.rank(frozenset(range(self.n)))

    def views(self) -> tuple[MatroidView, MatroidView]:
        return MatroidView(self.matroid1), MatroidView(self.matroid2)

    def to_dict(self) -> dict:
        out = {"n": self.n, "matroid1": self.matroid1.to_dict(),
               "matroid2": self.matroid2.to_dict()}
        if self.metadata:
            out["metadata"] = self.metadata
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        try:
            n = int(data["n"])
            m1 = descriptor_from_dict(data["matroid1"], n)
            m2 = descriptor_from_dict(data["matroid2"], n)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed instance: missing or bad field {exc}") from exc
        return cls(n, m1, m2, dict(data.get("metadata", {})))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Instance":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data)


def equalize_ranks(m1: MatroidDescriptor, m2: MatroidDescriptor, n: int):
    """Truncate the descriptor of larger rank down to the smaller rank."""
    everything = frozenset(range(n))
    r1, r2 = m1.rank(everything), m2.rank(everything)
    if r1 > r2:
        m1 = Truncated(m1, r2)
    elif r2 > r1:
        m2 = Truncated(m2, r1)
    return m1, m2
