import random

import pytest

from rallypoint import Location, Query, SocialGraph, SpatialDataset
from rallypoint.generator import radius_for_quantile, random_instance

# Six-member graph used across the single-venue tests: two loose clusters,
# one triangle (a, c, d) reachable cheaply.
G1_EDGES = [("a", "c"), ("a", "d"), ("c", "d"), ("b", "e"), ("c", "e"), ("e", "f")]
G1_DISTANCES = {"a": 5.0, "b": 6.0, "c": 10.0, "d": 12.0, "e": 19.0, "f": 21.0}


@pytest.fixture
def g1():
    return SocialGraph("abcdef", G1_EDGES)


@pytest.fixture
def g1_instance(g1):
    members = {m: Location(d, 0.0) for m, d in G1_DISTANCES.items()}
    data = SpatialDataset(members, {"q": Location(0.0, 0.0)})
    return g1, data


@pytest.fixture
def g1_query():
    return Query(p=3, k=0, t=100.0, venues=("q",))


# Three-venue instance where the triangle (a, b, c) sits right next to one
# venue: sequential and joint multi-venue solvers must all land on it at
# total distance 6.
@pytest.fixture
def fig4_instance():
    graph = SocialGraph(
        "abcdef",
        [("a", "b"), ("a", "c"), ("b", "c"), ("d", "e"), ("e", "f"), ("d", "f")],
    )
    members = {
        "a": Location(1.0, 0.0),
        "b": Location(2.0, 0.0),
        "c": Location(3.0, 0.0),
        "d": Location(-10.0, 0.0),
        "e": Location(-11.0, 0.0),
        "f": Location(-12.0, 0.0),
    }
    venues = {
        "q1": Location(15.0, 0.0),
        "q2": Location(0.0, 0.0),
        "q3": Location(-20.0, 0.0),
    }
    data = SpatialDataset(members, venues)
    query = Query(p=3, k=0, t=30.0, venues=("q1", "q2", "q3"))
    return graph, data, query


# Single-venue instance tuned for the merge heuristic: member distances are
# 1..6, the two rank anchors evaluate to 806 and 412, and the best group
# {a,b,c,d} at 10 beats the first-found {a,c,d,e} at 13.
@pytest.fixture
def merge_instance():
    graph = SocialGraph(
        "abcdef",
        [
            ("a", "c"),
            ("b", "c"),
            ("a", "d"),
            ("b", "d"),
            ("c", "d"),
            ("c", "e"),
            ("d", "e"),
            ("c", "f"),
            ("d", "f"),
            ("e", "f"),
        ],
    )
    members = {m: Location(float(d), 0.0) for m, d in zip("abcdef", range(1, 7))}
    data = SpatialDataset(members, {"q": Location(0.0, 0.0)})
    query = Query(p=4, k=1, t=100.0, venues=("q",))
    return graph, data, query


# Four members, four venues; the closest pair is (d, q4) and re-selecting the
# reference venue after inserting d switches it to q3.
@pytest.fixture
def srdo_instance():
    graph = SocialGraph("abcd", [("a", "b"), ("a", "d"), ("b", "d"), ("a", "c")])
    members = {
        "a": Location(3.0, 6.0),
        "b": Location(5.0, 7.0),
        "c": Location(0.0, 0.0),
        "d": Location(9.1, 0.0),
    }
    venues = {
        "q1": Location(30.0, 30.0),
        "q2": Location(31.0, 29.0),
        "q3": Location(4.0, 6.0),
        "q4": Location(10.0, 0.0),
    }
    data = SpatialDataset(members, venues)
    query = Query(p=3, k=0, t=12.0, venues=("q1", "q2", "q3", "q4"))
    return graph, data, query


def make_query_instance(seed, *, n_range=(8, 15), p_range=(3, 6), q_range=(1, 5)):
    """Seeded random instance plus a query whose radius sweeps from nearly
    infeasible to permissive."""
    rng = random.Random(977_000 + seed)
    n = rng.randint(*n_range)
    p = rng.randint(*p_range)
    p = min(p, n)
    k = rng.randint(0, p - 1)
    nq = rng.randint(*q_range)
    graph, data = random_instance(seed, n, nq, edge_prob=rng.choice([0.2, 0.35, 0.5, 0.7]))
    t = radius_for_quantile(graph, data, rng.choice([0.03, 0.2, 0.45, 0.7, 0.95]))
    query = Query(p=p, k=k, t=t, venues=tuple(sorted(data.venue_locations)))
    return graph, data, query
