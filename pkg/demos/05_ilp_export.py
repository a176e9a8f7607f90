"""Exporting the query as an integer linear program.

The same problem can be handed to an external optimizer: binary selection
variables per member (plus one per venue in the multi-venue form), a linear
stranger-count budget, and distance-linking constraints. This script writes
the LP text, brute-forces the tiny model's binaries as a sanity check, and
confirms the model optimum equals the search optimum. The stranger budget is
aggregated over the whole group, so the model mirrors average-mode
feasibility.
"""

from rallypoint import (
    FamiliarityMode,
    Location,
    Query,
    SocialGraph,
    SpatialDataset,
    enumerate_binary_optimum,
    export_mrgq_model,
    mags_solve,
    validate_assignment,
)

graph = SocialGraph("uvwx", [("u", "v"), ("v", "w"), ("u", "w"), ("w", "x")])
data = SpatialDataset(
    {
        "u": Location(1, 0),
        "v": Location(2, 1),
        "w": Location(3, -1),
        "x": Location(12, 0),
    },
    {"park": Location(0, 0), "pier": Location(14, 0)},
)
query = Query(
    p=3, k=1, t=25.0, venues=("park", "pier"),
    familiarity_mode=FamiliarityMode.AVERAGE,
)

model = export_mrgq_model(query, graph, data)
print(model.lp_text())

best = enumerate_binary_optimum(model)
objective, assignment = best
picked = sorted(m for m, var in model.member_vars.items() if assignment[var] == 1.0)
venue = next(q for q, var in model.venue_vars.items() if assignment[var] == 1.0)
print("model optimum:", objective, "group:", picked, "venue:", venue)

ok, violated = validate_assignment(model, assignment)
print("assignment validates:", ok, violated)

solution = mags_solve(query, graph, data, ordering="apdo")
print("search optimum:", solution.total_distance, "group:", list(solution.group))
assert abs(solution.total_distance - objective) <= 1e-6
