"""Run-time caps and knobs. Every output embeds the config it ran under."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class Config:
    child_bound: int = 4          # B: children tried per node of an index tree
    max_depth: int = 64           # deepest cylinder a search may refine to
    class_cap: int = 5000         # largest E-class a BFS may return
    alphabet_cap: int = 100_000   # largest alphabet / product we enumerate
    cell_cap: int = 200_000       # largest cell set of a ClopenSet
    comp_bound: int = 3           # L for composition words
    xi: str = "2"
    seed: int = 20240601

    def to_json(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        raw = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(raw).hexdigest()[:16]

    @classmethod
    def from_json(cls, data: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        for f in fields(cls):
            if f.type == "int" and f.name != "seed" and getattr(cfg, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")
        return cfg


DEFAULT = Config()
