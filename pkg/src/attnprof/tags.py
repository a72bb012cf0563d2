"""Layer taxonomy used for every cost attribution in the package.

Each profiled or parameterized submodule carries exactly one tag: a kind
(one of the six below) plus a layer index.  Index 0 is reserved for
pre/post-encoder layers; encoder blocks are numbered from 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class TagKind(enum.Enum):
    INPUT_EMBEDDING = "input_embedding"
    POSITIONAL_EMBEDDING = "positional_embedding"
    SELF_ATTENTION = "self_attention"
    INTERMEDIATE = "intermediate"
    OUTPUT = "output"
    OTHER = "other"

    def __str__(self) -> str:
        return self.value


#: Canonical ordering used by reports and stacked charts.
TAG_ORDER = (
    TagKind.INPUT_EMBEDDING,
    TagKind.POSITIONAL_EMBEDDING,
    TagKind.SELF_ATTENTION,
    TagKind.INTERMEDIATE,
    TagKind.OUTPUT,
    TagKind.OTHER,
)


@dataclass(frozen=True, slots=True)
class LayerTag:
    kind: TagKind
    index: int = 0

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("layer index must be >= 0")

    def __str__(self) -> str:
        return f"{self.kind.value}[{self.index}]"

    @property
    def key(self) -> str:
        return f"{self.kind.value}.{self.index}"

    @staticmethod
    def parse(key: str) -> "LayerTag":
        name, _, idx = key.rpartition(".")
        return LayerTag(TagKind(name), int(idx))


def tag_kind(name: str) -> TagKind:
    """Look up a kind by its serialized name."""
    return TagKind(name)
