"""Built-in digit systems used throughout the experiments."""

from __future__ import annotations

from .ifs import AffineIfs, new_ifs

BUILTIN_SYSTEMS: dict[str, tuple[int, tuple[int, ...], str]] = {
    "cantor3": (3, (0, 2), "middle-third Cantor measure, scale 3, digits {0,2}"),
    "cantor4": (4, (0, 2), "quarter Cantor measure, scale 4, digits {0,2}"),
    "cantor4c": (4, (0, 1), "scale-4 digits {0,1}; complement of cantor4 in the unit split"),
    "lebesgue": (2, (0, 1), "scale-2 digits {0,1}; invariant measure is Lebesgue on [0,1]"),
}


def get_system(name: str) -> AffineIfs:
    if name not in BUILTIN_SYSTEMS:
        raise KeyError(f"unknown system {name!r}; known: {sorted(BUILTIN_SYSTEMS)}")
    scale, digits, _ = BUILTIN_SYSTEMS[name]
    return new_ifs(scale, digits)


def list_catalog() -> list[dict]:
    return [
        {"name": name, "R": scale, "B": list(digits), "description": desc}
        for name, (scale, digits, desc) in sorted(BUILTIN_SYSTEMS.items())
    ]
