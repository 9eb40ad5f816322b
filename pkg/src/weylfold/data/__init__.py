"""Bundled example inputs."""
from __future__ import annotations

import json
from importlib import resources


def load_json(name: str) -> dict:
    return json.loads(resources.files(__name__).joinpath(name).read_text())
