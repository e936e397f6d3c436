"""Bundled example graphs used by the documentation and the test suite."""

from __future__ import annotations

import json
from importlib import resources

from ..graph import Graph, parse_graph

NAMES = ("loop", "o2", "m2", "y", "fork", "fib", "c3", "inf")


def fixture_document(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {NAMES}")
    text = resources.files(__package__).joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


def fixture_graph(name: str) -> Graph:
    return parse_graph(fixture_document(name))
