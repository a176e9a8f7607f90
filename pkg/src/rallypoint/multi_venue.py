"""Multi-venue solvers: sequential per-venue runs, one joint search tree with a
fixed reference venue, and index-driven search with adaptive venue selection.

All variants share one recursive engine. Candidate members are extracted
either from a static order toward a reference venue, or adaptively by
co-traversing the member R-tree and the venue ball tree. Venue bookkeeping is
split in two: the ordering universe shrinks only through radius violations
(so toggling prune rules never changes the member extraction order), while
the solution set additionally shrinks through the distance-bound rules.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .balltree import Balltree, BalltreeNode, mindist_mbr_ball, mindist_point_ball
from .graph import core_decompose
from .indexes import Indexes, build_indexes
from .model import (
    FamiliarityMode,
    Location,
    MemberId,
    PRUNE_BALL_DISTANCE,
    PRUNE_AVG_FAMILIARITY,
    PRUNE_INNER_TRIANGLE,
    PRUNE_MEMBER_FAMILIARITY,
    PRUNE_OUTER_TRIANGLE,
    PRUNE_POOL_FAMILIARITY,
    PRUNE_VENUE_DISTANCE,
    PRUNE_VENUE_RADIUS,
    Query,
    SearchStats,
    SocialGraph,
    Solution,
    SpatialDataset,
    VenueId,
    distance,
    familiarity_ok,
)
from .pruning import (
    PruneConfig,
    avg_familiarity_prune,
    ball_distance_bound,
    distance_prune,
    inner_triangle_bound,
    member_familiarity_prune,
    outer_triangle_ball_bound,
    pool_familiarity_prune,
)
from .rtree import Rtree
from .single_venue import run_single_venue_search, sso_admits


@dataclass(frozen=True)
class BoundRecord:
    """One distance-bound evaluation, kept for validity auditing."""

    rule: str
    bound: float
    group: Tuple[MemberId, ...]
    pool: Tuple[MemberId, ...]
    venue_ids: Tuple[VenueId, ...]
    best_at_check: float


@dataclass(frozen=True)
class SelectionRecord:
    """One adaptive candidate selection, kept for argmin auditing."""

    group: Tuple[MemberId, ...]
    candidates: Tuple[MemberId, ...]
    venues: Tuple[VenueId, ...]
    member: MemberId
    venue: VenueId
    score: float


@dataclass
class MagsAudit:
    bounds: List[BoundRecord] = field(default_factory=list)
    selections: List[SelectionRecord] = field(default_factory=list)


@dataclass
class _VenueState:
    """Per-search-state venue bookkeeping; children get copies, so backtracking
    restores the parent state for free."""

    order_alive: FrozenSet[VenueId]
    sol_alive: Set[VenueId]
    sums: Dict[VenueId, float]


def srdo_seed(
    rtree: Rtree,
    balltree: Balltree,
    pool: Set[MemberId],
    degree_of: Optional[Dict[MemberId, int]] = None,
) -> Optional[Tuple[MemberId, VenueId, float]]:
    """Globally closest (member, venue) pair, via best-first co-traversal.

    Member/venue lower bounds come from MBR-to-ball distances, so mutually
    distant subtrees are never opened. Ties prefer higher member degree, then
    ascending ids. Returns None when either side is empty.
    """
    if not pool or rtree.root is None:
        return None
    degree_of = degree_of or {}
    u_r: List[tuple] = [("n", rtree.root)]
    u_b: List[BalltreeNode] = [balltree.root]

    while True:
        best_key = None
        best_pair = None
        for rentry in u_r:
            for bnode in u_b:
                if rentry[0] == "m":
                    g = mindist_point_ball(rentry[2], bnode.ball)
                    rkey = (1, -degree_of.get(rentry[1], 0), rentry[1])
                else:
                    g = mindist_mbr_ball(rentry[1].mbr, bnode.ball)
                    rkey = (0, rentry[1].node_id, 0)
                kind = 1 if (rentry[0] == "m" and bnode.is_leaf) else 0
                bkey = (1, bnode.venue) if bnode.is_leaf else (0, bnode.node_id)
                key = (g, kind, rkey, bkey)
                if best_key is None or key < best_key:
                    best_key = key
                    best_pair = (rentry, bnode)
        if best_pair is None:
            return None
        rentry, bnode = best_pair
        if rentry[0] == "m" and bnode.is_leaf:
            return (rentry[1], bnode.venue, best_key[0])
        if rentry[0] == "n":
            u_r.remove(rentry)
            node = rentry[1]
            if node.is_leaf:
                for member, loc in node.entries:
                    if member in pool:
                        u_r.append(("m", member, loc))
            else:
                u_r.extend(("n", child) for child in node.children)
        if not bnode.is_leaf:
            u_b.remove(bnode)
            u_b.extend(bnode.children)


class _MultiVenueSearch:
    """Joint member/venue branch-and-bound over a shared search tree."""

    def __init__(
        self,
        query: Query,
        graph: SocialGraph,
        data: SpatialDataset,
        pool: List[MemberId],
        alive_venues: List[VenueId],
        config: PruneConfig,
        stats: SearchStats,
        *,
        rtree: Optional[Rtree] = None,
        balltree: Optional[Balltree] = None,
        static_order: Optional[List[MemberId]] = None,
        audit: Optional[MagsAudit] = None,
    ):
        self.query = query
        self.graph = graph
        self.data = data
        self.config = config
        self.stats = stats
        self.rtree = rtree
        self.balltree = balltree
        self.audit = audit
        self.pool = pool
        self.alive_venues = alive_venues
        self.static_order = static_order
        self.root_theta = min(query.k, query.p - 1)
        self.best_total = math.inf
        self.best_group: Optional[Tuple[MemberId, ...]] = None
        self.best_venue: Optional[VenueId] = None
        self.member_loc = data.member_locations
        self.venue_loc = data.venue_locations
        self.degree_of = {v: graph.degree(v) for v in graph.vertices}

    # -- top level ---------------------------------------------------------

    def run(self) -> None:
        if len(self.pool) < self.query.p or not self.alive_venues:
            return
        vstate = _VenueState(
            order_alive=frozenset(self.alive_venues),
            sol_alive=set(self.alive_venues),
            sums={q: 0.0 for q in self.alive_venues},
        )
        if self.static_order is not None:
            pool = list(self.static_order)
        else:
            pool = list(self.pool)
        self._frame([], set(), pool, vstate, 0.0, self.root_theta)

    # -- candidate selection -----------------------------------------------

    def _select_static(self, remaining: List[MemberId], visited: Set[MemberId]):
        return next((u for u in remaining if u not in visited), None)

    def _select_adaptive(
        self,
        prefix: List[MemberId],
        remaining: List[MemberId],
        visited: Set[MemberId],
        vstate: _VenueState,
        pairwise_sum: float,
    ) -> Optional[MemberId]:
        """One co-traversal of the member R-tree and venue ball tree, returning
        the member of the (member, venue) pair minimizing the grown group's
        total distance to the venue. Ball-level distance bounds are evaluated
        on every popped ball and mark hopeless venues as unusable for
        solutions (the traversal itself keeps using the radius-only universe,
        so extraction order is independent of the prune toggles)."""
        if not vstate.order_alive:
            return None
        if all(m in visited for m in remaining):
            return None
        t = self.query.t
        pool_set = set(remaining)
        prefix_locs = [self.member_loc[v] for v in prefix]

        u_r: List[tuple] = [("n", self.rtree.root)] if self.rtree.root else []
        u_b: List[tuple] = []

        def push_ball(node: BalltreeNode) -> None:
            if not any(q in vstate.order_alive for q in node.venue_ids):
                return
            f = sum(mindist_point_ball(loc, node.ball) for loc in prefix_locs)
            u_b.append((node, f))

        push_ball(self.balltree.root)
        checked_balls: Set[int] = set()

        while True:
            best_key = None
            best_pair = None
            for bnode, f in u_b:
                for rentry in u_r:
                    if rentry[0] == "m":
                        g = mindist_point_ball(rentry[2], bnode.ball)
                    else:
                        g = mindist_mbr_ball(rentry[1].mbr, bnode.ball)
                    if g > t:
                        continue
                    if rentry[0] == "m" and rentry[1] in visited:
                        continue
                    if rentry[0] == "m":
                        rkey = (1, -self.degree_of.get(rentry[1], 0), rentry[1])
                    else:
                        rkey = (0, rentry[1].node_id, 0)
                    kind = 1 if (rentry[0] == "m" and bnode.is_leaf) else 0
                    bkey = (1, bnode.venue) if bnode.is_leaf else (0, bnode.node_id)
                    key = (f + g, kind, rkey, bkey)
                    if best_key is None or key < best_key:
                        best_key = key
                        best_pair = (rentry, bnode, f)
            if best_pair is None:
                return None
            rentry, bnode, f = best_pair

            if bnode.node_id not in checked_balls:
                checked_balls.add(bnode.node_id)
                self._ball_lemma_checks(
                    bnode, prefix, prefix_locs, remaining, u_r, u_b, vstate, pairwise_sum
                )

            if best_key[1] == 1:
                member, venue = rentry[1], bnode.venue
                if self.audit is not None:
                    self.audit.selections.append(
                        SelectionRecord(
                            group=tuple(prefix),
                            candidates=tuple(sorted(m for m in pool_set if m not in visited)),
                            venues=tuple(sorted(vstate.order_alive)),
                            member=member,
                            venue=venue,
                            score=best_key[0],
                        )
                    )
                return member
            if rentry[0] == "n":
                u_r.remove(rentry)
                node = rentry[1]
                if node.is_leaf:
                    for member, loc in node.entries:
                        if member in pool_set:
                            u_r.append(("m", member, loc))
                else:
                    u_r.extend(("n", child) for child in node.children)
            if not bnode.is_leaf:
                u_b.remove((bnode, f))
                for child in bnode.children:
                    push_ball(child)

    def _frontier_bound(self, u_r: List[tuple], target: BalltreeNode, pool: Sequence[MemberId]) -> float:
        """Lower bound on the distance from any remaining candidate to the ball."""
        best = math.inf
        for rentry in u_r:
            if rentry[0] == "m":
                g = mindist_point_ball(rentry[2], target.ball)
            else:
                g = mindist_mbr_ball(rentry[1].mbr, target.ball)
            if g < best:
                best = g
        if math.isinf(best):
            # Traversal frontier exhausted; fall back to the exact pool minimum.
            best = min(
                (mindist_point_ball(self.member_loc[v], target.ball) for v in pool),
                default=math.inf,
            )
        return best

    def _ball_lemma_checks(
        self,
        bx: BalltreeNode,
        prefix: List[MemberId],
        prefix_locs: List[Location],
        pool: Sequence[MemberId],
        u_r: List[tuple],
        u_b: List[tuple],
        vstate: _VenueState,
        pairwise_sum: float,
    ) -> None:
        p = self.query.p
        n = len(prefix)
        cfg = self.config

        if cfg.outer_triangle:
            sums_x = [distance(loc, bx.ball.center) for loc in prefix_locs]
            for bnode, _ in u_b:
                if bnode.node_id == bx.node_id:
                    continue
                frontier = self._frontier_bound(u_r, bnode, pool)
                bound = outer_triangle_ball_bound(
                    sums_x,
                    distance(bx.ball.center, bnode.ball.center),
                    bnode.ball.radius,
                    p,
                    frontier,
                )
                self._record_bound(PRUNE_OUTER_TRIANGLE, bound, prefix, pool, bnode.venue_ids)
                if bound >= self.best_total:
                    self._kill_venues(bnode.venue_ids, vstate, PRUNE_OUTER_TRIANGLE)

        if cfg.inner_triangle and n >= 2:
            frontier = self._frontier_bound(u_r, bx, pool)
            bound = inner_triangle_bound(pairwise_sum, n, p, bx.ball.radius, frontier)
            self._record_bound(PRUNE_INNER_TRIANGLE, bound, prefix, pool, bx.venue_ids)
            if bound >= self.best_total:
                self._kill_venues(bx.venue_ids, vstate, PRUNE_INNER_TRIANGLE)

        if cfg.ball_distance:
            frontier = self._frontier_bound(u_r, bx, pool)
            summed = sum(mindist_point_ball(loc, bx.ball) for loc in prefix_locs)
            bound = ball_distance_bound(summed, n, p, frontier)
            self._record_bound(PRUNE_BALL_DISTANCE, bound, prefix, pool, bx.venue_ids)
            if bound >= self.best_total:
                self._kill_venues(bx.venue_ids, vstate, PRUNE_BALL_DISTANCE)

    def _record_bound(self, rule, bound, prefix, pool, venue_ids) -> None:
        if self.audit is not None and math.isfinite(bound):
            self.audit.bounds.append(
                BoundRecord(
                    rule=rule,
                    bound=bound,
                    group=tuple(prefix),
                    pool=tuple(sorted(pool)),
                    venue_ids=tuple(venue_ids),
                    best_at_check=self.best_total,
                )
            )

    def _kill_venues(self, venue_ids, vstate: _VenueState, rule: str) -> None:
        doomed = vstate.sol_alive.intersection(venue_ids)
        if doomed:
            vstate.sol_alive -= doomed
            self.stats.bump(rule, len(doomed))

    # -- search frames -------------------------------------------------------

    def _frame(
        self,
        prefix: List[MemberId],
        prefix_set: Set[MemberId],
        pool: List[MemberId],
        vstate: _VenueState,
        pairwise_sum: float,
        theta: int,
    ) -> None:
        p = self.query.p
        k = self.query.k
        cfg = self.config
        remaining = list(pool)
        visited: Set[MemberId] = set()

        # Smallest candidate-to-venue distance per surviving venue, used by the
        # completion bounds. Computed once per frame; the pool only shrinks
        # afterwards, so the cached value stays a valid lower bound.
        pool_dmin: Dict[VenueId, float] = {}
        for q in vstate.order_alive:
            qloc = self.venue_loc[q]
            pool_dmin[q] = min(
                (distance(self.member_loc[v], qloc) for v in remaining),
                default=math.inf,
            )

        while len(prefix) + len(remaining) >= p:
            if cfg.venue_distance and not self._any_venue_viable(prefix, vstate, pool_dmin):
                self.stats.bump(PRUNE_VENUE_DISTANCE)
                break

            if self.static_order is not None:
                u = self._select_static(remaining, visited)
            else:
                u = self._select_adaptive(prefix, remaining, visited, vstate, pairwise_sum)
            if u is None:
                if not visited:
                    break
                if theta < p - 1:
                    theta += 1
                    self.stats.theta_escalations += 1
                visited.clear()
                continue
            visited.add(u)

            if not sso_admits(prefix, u, theta, p, self.graph):
                continue

            remaining.remove(u)
            child = prefix + [u]
            child_set = prefix_set | {u}
            self.stats.generated_states += 1

            cvstate = self._child_venue_state(u, len(child), vstate, pool_dmin)
            if not cvstate.sol_alive:
                continue

            if self.query.familiarity_mode is FamiliarityMode.PER_VERTEX:
                if cfg.member_familiarity and member_familiarity_prune(child, k, self.graph):
                    self.stats.bump(PRUNE_MEMBER_FAMILIARITY)
                    continue
                if cfg.pool_familiarity and pool_familiarity_prune(
                    child, remaining, p, k, self.graph
                ):
                    self.stats.bump(PRUNE_POOL_FAMILIARITY)
                    continue
            else:
                if cfg.avg_familiarity and avg_familiarity_prune(
                    child, remaining, p, k, self.graph
                ):
                    self.stats.bump(PRUNE_AVG_FAMILIARITY)
                    continue

            if len(child) == p:
                self.stats.explored_states += 1
                self._evaluate_leaf(child, cvstate)
                continue

            u_loc = self.member_loc[u]
            child_pairwise = pairwise_sum + sum(
                distance(self.member_loc[s], u_loc) for s in prefix
            )
            self.stats.explored_states += 1
            self._frame(child, child_set, remaining, cvstate, child_pairwise, theta)

    def _any_venue_viable(
        self, prefix: List[MemberId], vstate: _VenueState, pool_dmin: Dict[VenueId, float]
    ) -> bool:
        n = len(prefix)
        p = self.query.p
        for q in vstate.sol_alive:
            if not distance_prune(
                vstate.sums[q], n, p, pool_dmin.get(q, math.inf), self.best_total
            ):
                return True
        return False

    def _child_venue_state(
        self,
        u: MemberId,
        child_size: int,
        vstate: _VenueState,
        pool_dmin: Dict[VenueId, float],
    ) -> _VenueState:
        u_loc = self.member_loc[u]
        t = self.query.t
        p = self.query.p
        order2 = set()
        sums2: Dict[VenueId, float] = {}
        for q in vstate.order_alive:
            d = distance(u_loc, self.venue_loc[q])
            if d > t:
                if q in vstate.sol_alive:
                    self.stats.bump(PRUNE_VENUE_RADIUS)
                continue
            order2.add(q)
            sums2[q] = vstate.sums[q] + d
        sol2 = set()
        for q in vstate.sol_alive:
            if q not in order2:
                continue
            if self.config.venue_distance and distance_prune(
                sums2[q], child_size, p, pool_dmin.get(q, math.inf), self.best_total
            ):
                self.stats.bump(PRUNE_VENUE_DISTANCE)
                continue
            sol2.add(q)
        return _VenueState(order_alive=frozenset(order2), sol_alive=sol2, sums=sums2)

    def _evaluate_leaf(self, group: List[MemberId], vstate: _VenueState) -> None:
        if not vstate.sol_alive:
            return
        best_here = min(vstate.sol_alive, key=lambda q: (vstate.sums[q], q))
        total = vstate.sums[best_here]
        if total < self.best_total and familiarity_ok(
            group, self.query.k, self.query.familiarity_mode, self.graph
        ):
            self.best_total = total
            self.best_group = tuple(sorted(group))
            self.best_venue = best_here


def _prepare_instance(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    indexes: Optional[Indexes],
    core_preprocess: bool,
):
    """Shared setup: optional core trimming, radius-based venue/member filters."""
    indexes = indexes or build_indexes(data)
    work_graph = graph
    if core_preprocess and query.familiarity_mode is FamiliarityMode.PER_VERTEX:
        work_graph = core_decompose(graph, query.p, query.k)
    vertex_set = set(work_graph.vertices)

    alive_venues: List[VenueId] = []
    reachable: Set[MemberId] = set()
    for q in query.venues:
        if q in alive_venues:
            continue
        in_range = indexes.members.range_query(data.venue_locations[q], query.t)
        in_range &= vertex_set
        # A venue that cannot host even p members can never appear in a solution.
        if len(in_range) >= query.p:
            alive_venues.append(q)
            reachable |= in_range
    pool = sorted(reachable)
    return indexes, work_graph, pool, alive_venues


def ssp_solve(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    indexes: Optional[Indexes] = None,
    *,
    config: Optional[PruneConfig] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Solution]:
    """Solve per venue with the single-venue search, sharing the incumbent so
    later venues start with the best bound found so far."""
    config = config or PruneConfig()
    stats = stats if stats is not None else SearchStats()
    start = time.perf_counter()
    best = math.inf
    best_group = None
    best_venue = None
    for venue in query.venues:
        state = run_single_venue_search(
            query, graph, data, venue, indexes, config, stats, initial_best=best
        )
        if state.best_group is not None and state.best_total < best:
            best = state.best_total
            best_group = state.best_group
            best_venue = venue
    stats.elapsed_seconds = time.perf_counter() - start
    if best_group is None:
        return None
    return Solution(best_group, best_venue, best, stats)


def _closest_pair_scan(
    pool: Sequence[MemberId],
    venues: Sequence[VenueId],
    data: SpatialDataset,
    degree_of: Dict[MemberId, int],
) -> Optional[Tuple[MemberId, VenueId, float]]:
    best = None
    best_key = None
    for v in pool:
        v_loc = data.member_locations[v]
        for q in venues:
            d = distance(v_loc, data.venue_locations[q])
            key = (d, -degree_of.get(v, 0), v, q)
            if best_key is None or key < best_key:
                best_key = key
                best = (v, q, d)
    return best


def _static_order_towards(
    pool: Sequence[MemberId],
    q_ref: VenueId,
    data: SpatialDataset,
    degree_of: Dict[MemberId, int],
) -> List[MemberId]:
    q_loc = data.venue_locations[q_ref]
    return [
        v
        for _, _, v in sorted(
            (distance(data.member_locations[v], q_loc), -degree_of.get(v, 0), v)
            for v in pool
        )
    ]


def sfgp_solve(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    indexes: Optional[Indexes] = None,
    *,
    config: Optional[PruneConfig] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Solution]:
    """One search tree for all venues: a reference venue fixed up front from
    the closest member-venue pair guides the ordering, while every venue is
    tested for radius and distance-bound pruning as the group grows."""
    config = config or PruneConfig()
    stats = stats if stats is not None else SearchStats()
    start = time.perf_counter()
    indexes, work_graph, pool, alive = _prepare_instance(query, graph, data, indexes, False)

    solution = None
    if pool and alive:
        degree_of = {v: work_graph.degree(v) for v in work_graph.vertices}
        seed = _closest_pair_scan(pool, alive, data, degree_of)
        if seed is not None and seed[2] <= query.t:
            order = _static_order_towards(pool, seed[1], data, degree_of)
            search = _MultiVenueSearch(
                query, work_graph, data, pool, alive, config, stats, static_order=order
            )
            search.run()
            if search.best_group is not None:
                solution = (search.best_group, search.best_venue, search.best_total)
    stats.elapsed_seconds = time.perf_counter() - start
    if solution is None:
        return None
    return Solution(solution[0], solution[1], solution[2], stats)


def mags_solve(
    query: Query,
    graph: SocialGraph,
    data: SpatialDataset,
    indexes: Optional[Indexes] = None,
    *,
    ordering: str = "apdo",
    config: Optional[PruneConfig] = None,
    core_preprocess: bool = False,
    stats: Optional[SearchStats] = None,
    audit: Optional[MagsAudit] = None,
) -> Optional[Solution]:
    """Index-driven joint search. ``ordering`` picks the candidate extraction
    strategy: "srdo" fixes the reference venue from the globally closest
    member-venue pair; "apdo" re-selects the best (member, venue) pair before
    every insertion and enables the ball-level distance bounds."""
    if ordering not in ("srdo", "apdo"):
        raise ValueError(f"unknown ordering {ordering!r}")
    config = config or PruneConfig()
    stats = stats if stats is not None else SearchStats()
    start = time.perf_counter()
    indexes, work_graph, pool, alive = _prepare_instance(
        query, graph, data, indexes, core_preprocess
    )

    solution = None
    if pool and alive and indexes.venues is not None:
        degree_of = {v: work_graph.degree(v) for v in work_graph.vertices}
        seed = srdo_seed(indexes.members, indexes.venues, set(pool), degree_of)
        if seed is not None and seed[2] <= query.t:
            if ordering == "srdo":
                order = _static_order_towards(pool, seed[1], data, degree_of)
                search = _MultiVenueSearch(
                    query, work_graph, data, pool, alive, config, stats, static_order=order
                )
            else:
                search = _MultiVenueSearch(
                    query,
                    work_graph,
                    data,
                    pool,
                    alive,
                    config,
                    stats,
                    rtree=indexes.members,
                    balltree=indexes.venues,
                    audit=audit,
                )
            search.run()
            if search.best_group is not None:
                solution = (search.best_group, search.best_venue, search.best_total)
    stats.elapsed_seconds = time.perf_counter() - start
    if solution is None:
        return None
    return Solution(solution[0], solution[1], solution[2], stats)
