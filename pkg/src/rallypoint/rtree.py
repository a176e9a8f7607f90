"""Static R-tree over member locations.

Bulk-loaded with sort-tile-recursive packing, so the structure is a pure
function of the input points. Supports radius range queries, exact
point-to-MBR lower bounds, and best-first incremental distance browsing.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .model import Location, MemberId, distance


@dataclass(frozen=True)
class Mbr:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if self.min_x > self.max_x or self.min_y > self.max_y:
            raise ValueError("MBR min corner must not exceed max corner")

    def contains_point(self, loc: Location) -> bool:
        return self.min_x <= loc.x <= self.max_x and self.min_y <= loc.y <= self.max_y

    def contains_mbr(self, other: "Mbr") -> bool:
        return (
            self.min_x <= other.min_x
            and self.min_y <= other.min_y
            and self.max_x >= other.max_x
            and self.max_y >= other.max_y
        )

    @staticmethod
    def around_points(locs: Sequence[Location]) -> "Mbr":
        return Mbr(
            min(l.x for l in locs),
            min(l.y for l in locs),
            max(l.x for l in locs),
            max(l.y for l in locs),
        )

    @staticmethod
    def around_mbrs(mbrs: Sequence["Mbr"]) -> "Mbr":
        return Mbr(
            min(m.min_x for m in mbrs),
            min(m.min_y for m in mbrs),
            max(m.max_x for m in mbrs),
            max(m.max_y for m in mbrs),
        )


def mindist_point_mbr(a: Location, m: Mbr) -> float:
    """Exact minimum distance from ``a`` to any point of ``m`` (0 if inside)."""
    dx = max(m.min_x - a.x, 0.0, a.x - m.max_x)
    dy = max(m.min_y - a.y, 0.0, a.y - m.max_y)
    return math.hypot(dx, dy)


class RtreeNode:
    __slots__ = ("mbr", "children", "entries", "is_leaf", "node_id")

    def __init__(self, mbr: Mbr, *, children=None, entries=None, node_id: int = -1):
        self.mbr = mbr
        self.children: Optional[List[RtreeNode]] = children
        self.entries: Optional[List[Tuple[MemberId, Location]]] = entries
        self.is_leaf = entries is not None
        self.node_id = node_id


class Rtree:
    """Immutable R-tree; share freely, browse with per-iterator private state."""

    def __init__(self, root: Optional[RtreeNode], size: int, fanout: int):
        self.root = root
        self.size = size
        self.fanout = fanout

    def nodes(self) -> Iterator[RtreeNode]:
        if self.root is None:
            return
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.extend(node.children)

    def points_under(self, node: RtreeNode) -> Iterator[Tuple[MemberId, Location]]:
        stack = [node]
        while stack:
            n = stack.pop()
            if n.is_leaf:
                yield from n.entries
            else:
                stack.extend(n.children)

    def range_query(self, center: Location, radius: float) -> Set[MemberId]:
        """Exactly the ids whose location is within ``radius`` of ``center``."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        result: Set[MemberId] = set()
        if self.root is None:
            return result
        stack = [self.root]
        while stack:
            node = stack.pop()
            if mindist_point_mbr(center, node.mbr) > radius:
                continue
            if node.is_leaf:
                for member, loc in node.entries:
                    if distance(center, loc) <= radius:
                        result.add(member)
            else:
                stack.extend(node.children)
        return result

    def distance_browse(self, center: Location) -> Iterator[Tuple[MemberId, float]]:
        """Yield (member, distance) pairs in nondecreasing distance.

        Equal distances come out in ascending member-id order. The generator
        is lazy, so early termination and resumption are free.
        """
        if self.root is None:
            return
        counter = 0
        # Nodes sort ahead of points at equal keys so tied points are all
        # discovered before any of them is emitted.
        heap: List[tuple] = [(0.0, 0, counter, self.root, None)]
        while heap:
            key, kind, _, node, payload = heapq.heappop(heap)
            if kind == 1:
                yield payload, key
                continue
            if node.is_leaf:
                for member, loc in node.entries:
                    counter += 1
                    heapq.heappush(heap, (distance(center, loc), 1, member, None, member))
            else:
                for child in node.children:
                    counter += 1
                    heapq.heappush(
                        heap, (mindist_point_mbr(center, child.mbr), 0, counter, child, None)
                    )


def _pack_level(items: Sequence[tuple], fanout: int, key_x, key_y) -> List[List[tuple]]:
    """Sort-tile-recursive grouping of ``items`` into runs of at most ``fanout``."""
    n = len(items)
    leaf_count = math.ceil(n / fanout)
    slab_count = math.ceil(math.sqrt(leaf_count))
    slab_size = slab_count * fanout
    ordered = sorted(items, key=key_x)
    groups: List[List[tuple]] = []
    for s in range(0, n, slab_size):
        slab = sorted(ordered[s : s + slab_size], key=key_y)
        for i in range(0, len(slab), fanout):
            groups.append(slab[i : i + fanout])
    return groups


def build_rtree(points: Mapping[MemberId, Location], max_fanout: int = 16) -> Rtree:
    """Bulk-load an R-tree with STR packing; deterministic for a given input."""
    if max_fanout < 2:
        raise ValueError("max_fanout must be >= 2")
    items = sorted(points.items(), key=lambda kv: kv[0])
    if not items:
        return Rtree(None, 0, max_fanout)

    next_id = 0

    def make_id() -> int:
        nonlocal next_id
        next_id += 1
        return next_id - 1

    leaf_groups = _pack_level(
        items,
        max_fanout,
        key_x=lambda kv: (kv[1].x, kv[1].y, kv[0]),
        key_y=lambda kv: (kv[1].y, kv[1].x, kv[0]),
    )
    level: List[RtreeNode] = [
        RtreeNode(
            Mbr.around_points([loc for _, loc in group]),
            entries=sorted(group, key=lambda kv: kv[0]),
            node_id=make_id(),
        )
        for group in leaf_groups
    ]
    while len(level) > 1:
        def center_x(node: RtreeNode):
            m = node.mbr
            return ((m.min_x + m.max_x) / 2.0, (m.min_y + m.max_y) / 2.0, node.node_id)

        def center_y(node: RtreeNode):
            m = node.mbr
            return ((m.min_y + m.max_y) / 2.0, (m.min_x + m.max_x) / 2.0, node.node_id)

        groups = _pack_level(level, max_fanout, key_x=center_x, key_y=center_y)
        level = [
            RtreeNode(
                Mbr.around_mbrs([child.mbr for child in group]),
                children=list(group),
                node_id=make_id(),
            )
            for group in groups
        ]
    return Rtree(level[0], len(items), max_fanout)
