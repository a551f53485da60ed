"""The bundled corpus rings and named example modules."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .textio import parse_input


@lru_cache(maxsize=1)
def load() -> tuple[dict, dict]:
    text = resources.files("stablemod").joinpath("data/library.txt").read_text(encoding="utf-8")
    return parse_input(text, verify=False)


def rings() -> dict:
    return load()[0]


def modules() -> dict:
    return load()[1]


def module(name: str):
    """The named library module as a `Module`."""
    return modules()[name].module
