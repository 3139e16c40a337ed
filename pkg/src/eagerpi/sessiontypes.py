"""Session types and duality.

Branch rows are stored as sorted (label, type) tuples so that structural
equality is syntactic equality. Duality is the usual involution; it swaps
units, tensor/par, the labeled rows, the availability modalities, and the
client/server modalities.
"""

from __future__ import annotations

from dataclasses import dataclass


class SessionType:
    __slots__ = ()


@dataclass(frozen=True)
class One(SessionType):
    pass


@dataclass(frozen=True)
class Bot(SessionType):
    pass


@dataclass(frozen=True)
class Tensor(SessionType):
    first: SessionType
    rest: SessionType


@dataclass(frozen=True)
class Parr(SessionType):
    first: SessionType
    rest: SessionType


@dataclass(frozen=True)
class Plus(SessionType):
    branches: tuple  # sorted ((label, SessionType), ...), non-empty


@dataclass(frozen=True)
class With(SessionType):
    branches: tuple


@dataclass(frozen=True)
class Query(SessionType):
    body: SessionType


@dataclass(frozen=True)
class Bang(SessionType):
    body: SessionType


@dataclass(frozen=True)
class Maybe(SessionType):
    """May produce a behavior, or fail."""
    body: SessionType


@dataclass(frozen=True)
class ExpectT(SessionType):
    """May consume a behavior that can fail."""
    body: SessionType


def row(items) -> tuple:
    items = tuple(sorted(items, key=lambda kv: kv[0]))
    labels = [k for k, _ in items]
    if not labels or len(set(labels)) != len(labels):
        raise ValueError("labeled rows must be non-empty with distinct labels")
    return items


def plus(items) -> Plus:
    return Plus(row(items))


def with_(items) -> With:
    return With(row(items))


def dual(t: SessionType) -> SessionType:
    match t:
        case One():
            return Bot()
        case Bot():
            return One()
        case Tensor(a, b):
            return Parr(dual(a), dual(b))
        case Parr(a, b):
            return Tensor(dual(a), dual(b))
        case Plus(branches):
            return With(tuple((k, dual(v)) for k, v in branches))
        case With(branches):
            return Plus(tuple((k, dual(v)) for k, v in branches))
        case Query(a):
            return Bang(dual(a))
        case Bang(a):
            return Query(dual(a))
        case Maybe(a):
            return ExpectT(dual(a))
        case ExpectT(a):
            return Maybe(dual(a))
    # metavariables carry their own dual partner
    partner = getattr(t, "partner", None)
    if partner is not None:
        return partner
    raise TypeError(f"not a session type: {t!r}")
