"""Resource caps shared by the engine, with environment overrides."""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Caps:
    max_hom: int = 12
    max_rank: int = 200
    max_degree: int = 40

    @classmethod
    def from_env(cls) -> Caps:
        c = cls()
        if os.environ.get("STABLEMOD_MAXDEG"):
            c = replace(c, max_degree=int(os.environ["STABLEMOD_MAXDEG"]))
        if os.environ.get("STABLEMOD_MAXRANK"):
            c = replace(c, max_rank=int(os.environ["STABLEMOD_MAXRANK"]))
        if min(c.max_hom, c.max_rank, c.max_degree) <= 0:
            raise ValueError("caps must be positive")
        return c

    def as_dict(self) -> dict:
        return {"max_hom": self.max_hom, "max_rank": self.max_rank, "max_degree": self.max_degree}


_state = threading.local()
_default: Caps | None = None


def active() -> Caps:
    c = getattr(_state, "caps", None)
    if c is not None:
        return c
    global _default
    if _default is None:
        _default = Caps.from_env()
    return _default


@contextmanager
def using(caps: Caps):
    prev = getattr(_state, "caps", None)
    _state.caps = caps
    try:
        yield caps
    finally:
        _state.caps = prev
