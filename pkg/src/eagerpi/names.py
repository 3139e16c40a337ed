"""Channel names with globally unique identities.

Binders are freshened at every introduction (parse, rule instantiation,
copy), so a name's id never collides with another binder's id. The display
string is a hint for printing only; identity is the id.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class Name:
    id: int
    display: str = "x"

    def __repr__(self):
        return f"{self.display}#{self.id}"


class NameSupply:
    """Deterministic fresh-name generator.

    A supply seeded with the same start value produces the same sequence,
    which keeps translations and rule instantiations reproducible.
    """

    def __init__(self, start: int = 1):
        self._counter = itertools.count(start)

    def fresh(self, display: str = "x") -> Name:
        return Name(next(self._counter), display)

    def variant(self, name: Name) -> Name:
        return self.fresh(name.display)


_GLOBAL = NameSupply(1_000_000)


def fresh_name(display: str = "x") -> Name:
    """Fresh name from the process-wide supply (engine-internal use)."""
    return _GLOBAL.fresh(display)
