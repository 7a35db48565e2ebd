"""Presety eksperymentów dołączone do pakietu (`--config preset:<nazwa>`)."""

from __future__ import annotations

import copy
import json
from functools import lru_cache
from importlib import resources
from typing import Any

from poisson_eigenpath.shared.errors import InstanceError

_DATA_PACKAGE = "poisson_eigenpath.data"
_DEFAULT_FILE = "presets.json"


class UnknownPreset(InstanceError):
    def __init__(self, name: str, available: list[str]) -> None:
        super().__init__(f"Nieznany preset {name!r}; dostępne: {', '.join(available)}")
        self.name = name


@lru_cache(maxsize=1)
def load_presets() -> dict[str, dict[str, Any]]:
    text = resources.files(_DATA_PACKAGE).joinpath(_DEFAULT_FILE).read_text(encoding="utf-8")
    return json.loads(text)


def preset_names() -> list[str]:
    return sorted(load_presets())


def preset(name: str) -> dict[str, Any]:
    """Kopia presetu; modyfikacje nie wpływają na pamięć podręczną."""

    presets = load_presets()
    if name not in presets:
        raise UnknownPreset(name, preset_names())
    return copy.deepcopy(presets[name])
