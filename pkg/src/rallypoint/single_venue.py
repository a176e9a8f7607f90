"""Exact branch-and-bound and the merge heuristic for single-venue queries.

The search keeps an ordered partial group and a pool of remaining candidates.
Candidates are tried in nondecreasing distance to the venue, but a candidate
is only admitted when the socially-aware admission test passes at the current
relaxation level ``theta``; rejected candidates are merely deferred and come
back whenever ``theta`` escalates, so no group is ever lost to the ordering.
An expanded candidate is excluded from the rest of its frame, which yields
each candidate set exactly once.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .indexes import Indexes, build_indexes
from .model import (
    MemberId,
    PRUNE_AVG_FAMILIARITY,
    PRUNE_DISTANCE,
    PRUNE_MERGE,
    Query,
    SearchStats,
    SocialGraph,
    Solution,
    SpatialDataset,
    distance,
    familiarity_ok,
    internal_edge_count,
)
from .pruning import PruneConfig, avg_familiarity_prune, distance_prune


def sso_admits(
    group: Sequence[MemberId],
    candidate: MemberId,
    theta: int,
    p: int,
    graph: SocialGraph,
) -> bool:
    """Socially-aware admission test for adding ``candidate`` to ``group``.

    Admits when the average acquaintance count of the grown group reaches
    ``size - theta*size/(p-1) - 1``. Evaluated in exact integer arithmetic.
    Vacuous for p = 1 and for theta = p - 1.
    """
    if p == 1:
        return True
    members = set(group)
    if candidate in members:
        raise ValueError(f"candidate {candidate!r} is already in the group")
    size = len(members) + 1
    edges = internal_edge_count(members, graph) + len(graph.neighbors(candidate) & members)
    # 2E/size >= size - theta*size/(p-1) - 1, scaled by size*(p-1) > 0
    return 2 * edges * (p - 1) >= size * size * (p - 1) - theta * size * size - size * (p - 1)


class _StopSearch(Exception):
    """Raised to abort the search once a state-generation budget is spent."""


@dataclass
class SearchState:
    """Mutable search context: the root relaxation level and the incumbent.

    Each frame works with its own copy of ``theta`` (inherited from its
    parent at recursion time), so escalations deep in one subtree never leak
    into sibling subtrees.
    """

    theta: int
    best_total: float = math.inf
    best_group: Optional[Tuple[MemberId, ...]] = None


class _SingleVenueSearch:
    """Depth-first search over groups for one venue."""

    def __init__(
        self,
        query: Query,
        graph: SocialGraph,
        data: SpatialDataset,
        order: List[Tuple[float, MemberId]],
        config: PruneConfig,
        stats: SearchStats,
        initial_best: float = math.inf,
        harvest: Optional[Callable[[List[MemberId], float], None]] = None,
        budget: Optional[int] = None,
    ):
        self.query = query
        self.graph = graph
        self.data = data
        self.order = order
        self.config = config
        self.stats = stats
        self.state = SearchState(theta=min(query.k, query.p - 1), best_total=initial_best)
        self.harvest = harvest
        self.budget = budget

    def run(self) -> SearchState:
        try:
            self._frame([], set(), 0.0, self.order, self.state.theta)
        except _StopSearch:
            pass
        return self.state

    def _leaf_feasible(self, group: Sequence[MemberId]) -> bool:
        # Radius holds by construction: the pool is the in-range set.
        return familiarity_ok(group, self.query.k, self.query.familiarity_mode, self.graph)

    def _check_budget(self) -> None:
        if self.budget is not None and self.stats.generated_states >= self.budget:
            raise _StopSearch

    def _frame(
        self,
        prefix: List[MemberId],
        prefix_set: set,
        cur_dist: float,
        pool: List[Tuple[float, MemberId]],
        theta: int,
    ) -> None:
        p = self.query.p
        state = self.state
        remaining = list(pool)
        visited: set = set()

        while len(prefix) + len(remaining) >= p:
            if (
                self.config.distance
                and remaining
                and distance_prune(cur_dist, len(prefix), p, remaining[0][0], state.best_total)
            ):
                self.stats.bump(PRUNE_DISTANCE)
                break

            pick = next(((d, u) for d, u in remaining if u not in visited), None)
            if pick is None:
                if not visited:
                    break
                if theta < p - 1:
                    theta += 1
                    self.stats.theta_escalations += 1
                visited.clear()
                continue
            d_u, u = pick
            visited.add(u)

            if not sso_admits(prefix, u, theta, p, self.graph):
                continue

            remaining.remove(pick)
            child = prefix + [u]
            child_set = prefix_set | {u}
            child_dist = cur_dist + d_u
            self.stats.generated_states += 1

            if len(child) == p:
                if self.harvest is not None:
                    self.harvest(child, child_dist)
                self.stats.explored_states += 1
                if child_dist < state.best_total and self._leaf_feasible(child):
                    state.best_total = child_dist
                    state.best_group = tuple(sorted(child))
                self._check_budget()
                continue

            pool_ids = [m for _, m in remaining]
            if self.config.avg_familiarity and avg_familiarity_prune(
                child, pool_ids, p, self.query.k, self.graph
            ):
                self.stats.bump(PRUNE_AVG_FAMILIARITY)
                self._check_budget()
                continue
            if self.harvest is not None:
                self.harvest(child, child_dist)
            if self.config.distance and distance_prune(
                child_dist, len(child), p, remaining[0][0], state.best_total
            ):
                self.stats.bump(PRUNE_DISTANCE)
                self._check_budget()
                continue

            self.stats.explored_states += 1
            self._check_budget()
            self._frame(child, child_set, child_dist, remaining, theta)


def candidate_order(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    venue,
    indexes: Optional[Indexes],
) -> List[Tuple[float, MemberId]]:
    """In-range candidates sorted by (distance to venue, id)."""
    rtree = indexes.members if indexes is not None else build_indexes(data).members
    center = data.venue_locations[venue]
    in_range = rtree.range_query(center, query.t)
    return sorted((distance(data.member_locations[m], center), m) for m in in_range)


def run_single_venue_search(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    venue,
    indexes: Optional[Indexes],
    config: PruneConfig,
    stats: SearchStats,
    initial_best: float = math.inf,
    harvest=None,
    budget: Optional[int] = None,
) -> SearchState:
    order = candidate_order(query, graph, data, venue, indexes)
    search = _SingleVenueSearch(
        query, graph, data, order, config, stats, initial_best, harvest, budget
    )
    return search.run()


def ssgs_solve(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    indexes: Optional[Indexes] = None,
    *,
    config: Optional[PruneConfig] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Solution]:
    """Exact optimum for a single-venue query, or None when nothing qualifies."""
    if not query.is_single_venue:
        raise ValueError("ssgs_solve expects a single-venue query")
    config = config or PruneConfig()
    stats = stats if stats is not None else SearchStats()
    start = time.perf_counter()
    state = run_single_venue_search(
        query, graph, data, query.venues[0], indexes, config, stats
    )
    stats.elapsed_seconds = time.perf_counter() - start
    if state.best_group is None:
        return None
    return Solution(state.best_group, query.venues[0], state.best_total, stats)


# ---------------------------------------------------------------------------
# Merge heuristic
# ---------------------------------------------------------------------------


def minimal_order_theta(
    group_in_order: Sequence[MemberId],
    p: int,
    k: int,
    graph: SocialGraph,
) -> int:
    """Smallest relaxation level (at least ``k``) under which every prefix
    insertion of the group, in stored order, passes the admission test."""
    if p == 1:
        return k
    theta = k
    members: set = set()
    edges = 0
    for v in group_in_order:
        gained = len(graph.neighbors(v) & members)
        members.add(v)
        edges += gained
        size = len(members)
        # theta >= (size^2 - 2*E*size/(p-1)... scaled: exact ceil of
        # (size^2*(p-1) - 2*E*(p-1) - size*(p-1)) / size^2
        numerator = size * size * (p - 1) - 2 * edges * (p - 1) - size * (p - 1)
        if numerator > 0:
            needed = -((-numerator) // (size * size))
            theta = max(theta, needed)
    return min(theta, p - 1)


def merge_rank(
    group_in_order: Sequence[MemberId],
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
) -> float:
    """Queue priority for an intermediate group: tighter and closer is smaller."""
    theta_bar = minimal_order_theta(group_in_order, query.p, query.k, graph)
    venue_loc = data.venue_locations[query.venues[0]]
    total = sum(distance(data.member_locations[v], venue_loc) for v in group_in_order)
    return query.p * query.t * theta_bar + total


def merge_prune(
    total: float,
    size: int,
    p: int,
    mu_by_size: Dict[int, float],
    best: float,
) -> bool:
    """True when even the cheapest way of topping the group up to ``p`` members
    (one per missing slot, each at the smallest member distance present in any
    usable queue) cannot beat the incumbent."""
    if size >= p:
        return total >= best
    unit = min((mu_by_size.get(j, math.inf) for j in range(size, p)), default=math.inf)
    if math.isinf(unit):
        return True
    return total + (p - size) * unit >= best


@dataclass
class _QueueEntry:
    members_in_order: Tuple[MemberId, ...]
    key: frozenset
    total: float
    rank: float


@dataclass
class MergeQueues:
    """Per-size queues of intermediate groups plus the trim capacity."""

    p: int
    capacity: int
    queues: Dict[int, Dict[frozenset, _QueueEntry]] = field(default_factory=dict)

    def insert(self, entry: _QueueEntry) -> None:
        size = len(entry.key)
        bucket = self.queues.setdefault(size, {})
        existing = bucket.get(entry.key)
        if existing is None or (entry.rank, entry.members_in_order) < (
            existing.rank,
            existing.members_in_order,
        ):
            bucket[entry.key] = entry

    def entries(self, size: int) -> List[_QueueEntry]:
        return sorted(
            self.queues.get(size, {}).values(),
            key=lambda e: (e.rank, tuple(sorted(e.key))),
        )

    def trim(self, size: int) -> None:
        kept = self.entries(size)[: self.capacity]
        self.queues[size] = {e.key: e for e in kept}

    def min_member_distance(self, size: int, dist_of: Dict[MemberId, float]) -> float:
        best = math.inf
        for entry in self.queues.get(size, {}).values():
            for v in entry.key:
                d = dist_of[v]
                if d < best:
                    best = d
        return best


def ssgmerge_solve(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    indexes: Optional[Indexes] = None,
    *,
    w: int = 20000,
    lam: int = 200,
    config: Optional[PruneConfig] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Solution]:
    """Polynomial-time heuristic: harvest up to ``w`` generated states from the
    branch-and-bound expansion, then repeatedly merge pairs of small groups
    into larger ones, keeping only the ``lam`` best-ranked per size."""
    if not query.is_single_venue:
        raise ValueError("ssgmerge_solve expects a single-venue query")
    if w < 1 or lam < 1:
        raise ValueError("w and lam must be >= 1")
    config = config or PruneConfig()
    stats = stats if stats is not None else SearchStats()
    start = time.perf_counter()
    venue = query.venues[0]
    p = query.p

    queues = MergeQueues(p=p, capacity=lam)

    def harvest(group_in_order: List[MemberId], total: float) -> None:
        members = tuple(group_in_order)
        rank = merge_rank(members, query, graph, data)
        queues.insert(_QueueEntry(members, frozenset(members), total, rank))

    state = run_single_venue_search(
        query, graph, data, venue, indexes, config, stats, harvest=harvest, budget=w
    )
    best = state.best_total

    venue_loc = data.venue_locations[venue]
    dist_of = {v: distance(data.member_locations[v], venue_loc) for v in graph.vertices}

    for size in range(1, p):
        queues.trim(size)
        mu = {j: queues.min_member_distance(j, dist_of) for j in range(1, p)}
        survivors = []
        for entry in queues.entries(size):
            if merge_prune(entry.total, size, p, mu, best):
                stats.bump(PRUNE_MERGE)
                continue
            survivors.append(entry)
        for i in range(len(survivors)):
            for j in range(i + 1, len(survivors)):
                union = survivors[i].key | survivors[j].key
                if len(union) <= size or len(union) > p:
                    continue
                members = tuple(sorted(union))
                total = sum(dist_of[v] for v in members)
                if merge_prune(total, len(union), p, mu, best):
                    stats.bump(PRUNE_MERGE)
                    continue
                rank = merge_rank(members, query, graph, data)
                queues.insert(_QueueEntry(members, frozenset(union), total, rank))
                if len(union) == p and total < best and familiarity_ok(
                    members, query.k, query.familiarity_mode, graph
                ):
                    best = total

    queues.trim(p)
    answer = None
    answer_key = None
    for entry in queues.entries(p):
        if not familiarity_ok(entry.key, query.k, query.familiarity_mode, graph):
            continue
        key = (entry.total, tuple(sorted(entry.key)))
        if answer_key is None or key < answer_key:
            answer_key = key
            answer = entry
    stats.elapsed_seconds = time.perf_counter() - start
    if answer is None:
        return None
    return Solution(tuple(sorted(answer.key)), venue, answer.total, stats)
