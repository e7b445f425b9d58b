"""Symmetric tables of generating-function values keyed by length vectors."""

from __future__ import annotations

from dataclasses import dataclass, field

from .series import Series


def table_key(lengths) -> tuple[int, ...]:
    """Canonical key: lengths sorted descending, boundary-vertices trailing."""
    return tuple(sorted(lengths, reverse=True))


@dataclass
class CoefficientTable:
    """Entries of F/T/tau-hat type for one genus and boundary count.

    Access is symmetric: any permutation of a stored length vector returns
    the same Series.  Entries with zero lengths are boundary-vertex
    channels.  ``provenance`` records how each entry was produced
    (closed-form, insertion or oracle).
    """

    genus: int
    n: int
    entries: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def set(self, lengths, value: Series, provenance: str = "closed-form"):
        key = table_key(lengths)
        if len(key) != self.n:
            raise ValueError(f"length vector {lengths} has arity != {self.n}")
        self.entries[key] = value
        self.provenance[key] = provenance
        return self

    def get(self, lengths) -> Series:
        return self.entries[table_key(lengths)]

    def has(self, lengths) -> bool:
        return table_key(lengths) in self.entries

    def keys(self):
        return sorted(self.entries)

    def __len__(self):
        return len(self.entries)
