"""Weighted node similarity and the thresholded node-equality relation."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

from .dom import DomNode

# Absorbs float noise such as 0.4 + 0.15 + 0.15 == 0.7000000000000001.
_EPS = 1e-9

WEIGHT_KEYS = ("w_tag", "w_class", "w_attrs", "w_children", "w_position")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EqualityConfig:
    """Weights of the five similarity terms plus the equality threshold.

    Weights must be non-negative and sum to 1; ``0 < threshold <= 1``.
    """

    w_tag: float = 0.4
    w_class: float = 0.2
    w_attrs: float = 0.15
    w_children: float = 0.15
    w_position: float = 0.10
    threshold: float = 0.7

    def __post_init__(self):
        weights = [getattr(self, k) for k in WEIGHT_KEYS]
        if any(not math.isfinite(w) or w < 0 for w in weights):
            raise ConfigError(f"weights must be finite and non-negative: {weights}")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise ConfigError(f"weights must sum to 1 (got {sum(weights):.12g})")
        if not (0 < self.threshold <= 1):
            raise ConfigError(f"threshold must be in (0, 1] (got {self.threshold})")

    @classmethod
    def from_mapping(cls, values: Mapping[str, object], base: "EqualityConfig | None" = None) -> "EqualityConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        current = {f.name: getattr(base or cls(), f.name) for f in fields(cls)}
        for key, value in values.items():
            try:
                current[key] = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{key}: not a number: {value!r}") from None
        return cls(**current)

    @classmethod
    def from_file(cls, path: str | Path) -> "EqualityConfig":
        """Load ``key=value`` lines (``#`` starts a comment). Missing keys keep defaults."""
        values = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
        return cls.from_mapping(values)

    def to_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_CONFIG = EqualityConfig()


def _attr_jaccard(a: DomNode, b: DomNode) -> float:
    pa = {(k, v) for k, v in a.attrs.items() if k != "class"}
    pb = {(k, v) for k, v in b.attrs.items() if k != "class"}
    if not pa and not pb:
        return 1.0
    return len(pa & pb) / len(pa | pb)


def similarity(a: DomNode, b: DomNode, cfg: EqualityConfig = DEFAULT_CONFIG) -> float:
    """Weighted similarity in [0, 1].

    Text nodes score the label term on exact (normalized) text instead of tag.
    """
    if a.is_text and b.is_text:
        label = a.text == b.text
    else:
        label = a.kind == b.kind and a.tag == b.tag
    ka, kb = len(a.child_ids), len(b.child_ids)
    score = (
        cfg.w_tag * label
        + cfg.w_class * (a.classname == b.classname)
        + cfg.w_attrs * _attr_jaccard(a, b)
        + cfg.w_children * (1 - abs(ka - kb) / max(ka, kb, 1))
        + cfg.w_position * (a.sibling_index == b.sibling_index)
    )
    return min(1.0, max(0.0, score))


def nodes_equal(a: DomNode, b: DomNode, cfg: EqualityConfig = DEFAULT_CONFIG) -> bool:
    """Same tag (hard gate) and similarity at or above the threshold."""
    if a.kind != b.kind or a.tag != b.tag:
        return False
    return similarity(a, b, cfg) >= cfg.threshold - _EPS
