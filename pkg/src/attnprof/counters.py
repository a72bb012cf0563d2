"""Multiply-accumulate counting, the instruction-level twin of the timer.

When a counter is attached to the active trace, every dense kernel reports
the exact number of MACs it performs, attributed to the enclosing layer
tag.  The analytic cost model is validated against these tallies.
"""

from __future__ import annotations

from .tags import LayerTag, TagKind

_UNTAGGED = LayerTag(TagKind.OTHER, 0)


class MacCounter:
    def __init__(self):
        self.by_tag: dict[LayerTag, int] = {}

    def add(self, tag: LayerTag | None, macs: int) -> None:
        tag = tag or _UNTAGGED
        self.by_tag[tag] = self.by_tag.get(tag, 0) + macs

    @property
    def total(self) -> int:
        return sum(self.by_tag.values())

    def by_kind(self) -> dict[TagKind, int]:
        out: dict[TagKind, int] = {}
        for tag, n in self.by_tag.items():
            out[tag.kind] = out.get(tag.kind, 0) + n
        return out
