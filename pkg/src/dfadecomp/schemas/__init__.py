"""JSON Schemas for the documents read and written by the package."""
from __future__ import annotations

import json
from importlib import resources

NAMES = ("sample", "decomposition", "frontier", "identify", "score")


def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"no schema named {name!r}; known: {', '.join(NAMES)}")
    return json.loads(resources.files(__name__).joinpath(f"{name}.schema.json").read_text())
