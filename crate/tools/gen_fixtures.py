#!/usr/bin/env python3
"""Regenerates the JSON fixture corpus in fixtures/.

Each fixture is specified by exact rational node positions and edges with
deck shifts; counterclockwise rotations are derived from the positions.
"""
import json
import math
import os
from fractions import Fraction

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def rot_order(nodes, edges, nid):
    """Edge ids at node nid sorted counterclockwise by departure angle."""
    incident = []
    for e in edges:
        eid, b, w, (sx, sy) = e
        if b == nid:
            bx, by = nodes[b][1]
            wx, wy = nodes[w][1]
            dx = float(wx + sx - bx)
            dy = float(wy + sy - by)
            incident.append((math.atan2(dy, dx) % (2 * math.pi), eid))
        if w == nid:
            bx, by = nodes[b][1]
            wx, wy = nodes[w][1]
            dx = float(bx - wx - sx)
            dy = float(by - wy - sy)
            incident.append((math.atan2(dy, dx) % (2 * math.pi), eid))
    incident.sort()
    return [eid for _, eid in incident]


def emit(name, nodes, edges, rotations=None):
    """nodes: {id: (color, (Fraction x, Fraction y))}; edges: [(id, b, w, (sx, sy))]"""
    if rotations is None:
        rotations = {nid: rot_order(nodes, edges, nid) for nid in sorted(nodes)}
    rec = {
        "nodes": [
            {
                "id": nid,
                "color": color,
                "pos": [pos[0].numerator, pos[0].denominator, pos[1].numerator, pos[1].denominator],
            }
            for nid, (color, pos) in sorted(nodes.items())
        ],
        "edges": [
            {"id": eid, "black": b, "white": w, "shift": [sx, sy]}
            for eid, b, w, (sx, sy) in edges
        ],
        "rotations": {str(nid): rotations[nid] for nid in sorted(nodes)},
    }
    path = os.path.join(OUT, name + ".json")
    with open(path, "w") as f:
        json.dump(rec, f, indent=1)
        f.write("\n")
    print("wrote", path)


F = Fraction

# ---------------------------------------------------------------- conifold
# One black node, one white node, four edges; two diagonal circles on the
# torus. Edge 0 is the reference whose singleton matching is D0.
conifold_nodes = {
    0: ("black", (F(3, 4), F(3, 4))),
    1: ("white", (F(1, 4), F(1, 4))),
}
conifold_edges = [
    (0, 0, 1, (1, 0)),
    (1, 0, 1, (0, 0)),
    (2, 0, 1, (0, 1)),
    (3, 0, 1, (1, 1)),
]
emit("conifold", conifold_nodes, conifold_edges)

# ------------------------------------------------------------ inconsistent
# The 2x2 grid with one vertical wrap edge missing: a pair of zig-zag paths
# intersects twice in the same direction.
inc_nodes = {
    0: ("black", (F(1, 4), F(1, 4))),
    1: ("white", (F(3, 4), F(1, 4))),
    2: ("white", (F(1, 4), F(3, 4))),
    3: ("black", (F(3, 4), F(3, 4))),
}
inc_edges = [
    (0, 0, 2, (0, 0)),
    (1, 0, 2, (0, -1)),
    (2, 3, 1, (0, 0)),
    (3, 0, 1, (0, 0)),
    (4, 0, 1, (-1, 0)),
    (5, 3, 2, (0, 0)),
    (6, 3, 2, (1, 0)),
]
emit("inconsistent", inc_nodes, inc_edges)

# ---------------------------------------------------- inconsistent_trivial
# A hexagonal cycle of three blacks and three whites with a central white
# node spoked to the blacks: the cycle is a zig-zag path that closes up on
# the cover (homologically trivial). The six outer white half-edges are
# closed up through one auxiliary black node; the completion was checked to
# give a cellular torus embedding (tools/complete_trivial.py).
it_nodes = {
    0: ("black", (F(1, 4), F(1, 2))),
    1: ("black", (F(1, 2), F(3, 4))),
    2: ("black", (F(3, 4), F(1, 4))),
    3: ("white", (F(1, 2), F(1, 4))),
    4: ("white", (F(1, 4), F(3, 4))),
    5: ("white", (F(3, 4), F(1, 2))),
    6: ("white", (F(1, 2), F(1, 2))),
    7: ("black", (F(0, 1), F(0, 1))),
}
it_edges = [
    (0, 0, 4, (0, 0)),    # hexagon left
    (1, 1, 4, (0, 0)),    # hexagon top
    (2, 1, 5, (0, 0)),    # hexagon upper-right
    (3, 2, 5, (0, 0)),    # hexagon right
    (4, 2, 3, (0, 0)),    # hexagon bottom
    (5, 0, 3, (0, 0)),    # hexagon lower-left
    (6, 0, 6, (0, 0)),    # spoke
    (7, 1, 6, (0, 0)),    # spoke
    (8, 2, 6, (0, 0)),    # spoke
    (9, 7, 4, (0, 0)),    # outer, W4 leftward
    (10, 7, 4, (0, -1)),  # outer, W4 upward
    (11, 7, 5, (-1, -1)), # outer, W5 rightward
    (12, 7, 5, (0, -1)),  # outer, W5 upward
    (13, 7, 3, (-1, -1)), # outer, W3 downward
    (14, 7, 3, (0, 0)),   # outer, W3 leftward
]
it_rotations = {
    0: [6, 0, 5],
    1: [1, 7, 2],
    2: [3, 8, 4],
    3: [4, 5, 14, 13],
    4: [1, 10, 9, 0],
    5: [11, 12, 2, 3],
    6: [7, 6, 8],
    7: [9, 11, 13, 10, 12, 14],
}
emit("inconsistent_trivial", it_nodes, it_edges, rotations=it_rotations)

# ----------------------------------------------------------------- p1p1_ii
# Consistent but not isoradially embeddable: a pair of zig-zag paths
# intersects twice in opposite directions.
pp_nodes = {
    0: ("white", (F(2, 5), F(4, 5))),
    1: ("black", (F(3, 5), F(4, 5))),
    2: ("black", (F(4, 5), F(2, 5))),
    3: ("black", (F(2, 5), F(1, 5))),
    4: ("black", (F(1, 5), F(3, 5))),
    5: ("white", (F(1, 5), F(2, 5))),
    6: ("white", (F(3, 5), F(1, 5))),
    7: ("white", (F(4, 5), F(3, 5))),
}
pp_edges = [
    (0, 4, 5, (0, 0)),
    (1, 3, 5, (0, 0)),
    (2, 3, 6, (0, 0)),
    (3, 2, 6, (0, 0)),
    (4, 2, 7, (0, 0)),
    (5, 1, 7, (0, 0)),
    (6, 1, 0, (0, 0)),
    (7, 4, 0, (0, 0)),
    (8, 3, 0, (0, -1)),
    (9, 1, 6, (0, 1)),
    (10, 2, 5, (1, 0)),
    (11, 4, 7, (-1, 0)),
]
emit("p1p1_ii", pp_nodes, pp_edges)

# -------------------------------------------------------------- square_2x2
# The dimer model whose lattice polygon is the 2x2 square.
sq_nodes = {
    0: ("white", (F(1, 8), F(7, 8))),
    1: ("black", (F(3, 8), F(5, 8))),
    2: ("black", (F(7, 8), F(1, 8))),
    3: ("black", (F(3, 8), F(1, 8))),
    4: ("black", (F(7, 8), F(5, 8))),
    5: ("white", (F(1, 8), F(3, 8))),
    6: ("white", (F(5, 8), F(3, 8))),
    7: ("white", (F(5, 8), F(7, 8))),
}
sq_edges = [
    (0, 1, 0, (0, 0)),
    (1, 1, 5, (0, 0)),
    (2, 1, 6, (0, 0)),
    (3, 1, 7, (0, 0)),
    (4, 3, 5, (0, 0)),
    (5, 3, 6, (0, 0)),
    (6, 3, 7, (0, -1)),
    (7, 3, 0, (0, -1)),
    (8, 2, 6, (0, 0)),
    (9, 2, 0, (1, -1)),
    (10, 2, 7, (0, -1)),
    (11, 2, 5, (1, 0)),
    (12, 4, 7, (0, 0)),
    (13, 4, 6, (0, 0)),
    (14, 4, 5, (1, 0)),
    (15, 4, 0, (1, 0)),
]
emit("square_2x2", sq_nodes, sq_edges)

# ---------------------------------------------------------------- pentagon
# Square model after removing the top-left polygon vertex: one edge fewer.
pent_edges = [e for e in sq_edges if e[0] != 13]
emit("pentagon", sq_nodes, pent_edges)

# ----------------------------------------------------- hexagon models 1..4
# The four removal choices at the pentagon's lower-right vertex, each
# deleting one further edge.
for name, drop in [
    ("hexagon_model1", 5),   # black(3/8,1/8) - white(5/8,3/8)
    ("hexagon_model2", 15),  # black(7/8,5/8) - white(1/8,7/8), wrap
    ("hexagon_model3", 3),   # black(3/8,5/8) - white(5/8,7/8)
    ("hexagon_model4", 11),  # black(7/8,1/8) - white(1/8,3/8), wrap
]:
    emit(name, sq_nodes, [e for e in pent_edges if e[0] != drop])

# ----------------------------------------------------------- hexagon_graph1
# Hexagon model 1 with its divalent white node contracted.
hg1_nodes = {
    0: ("black", (F(5, 6), F(1, 6))),
    1: ("black", (F(1, 6), F(1, 2))),
    2: ("black", (F(1, 2), F(5, 6))),
    3: ("white", (F(1, 2), F(1, 6))),
    4: ("white", (F(5, 6), F(1, 2))),
    5: ("white", (F(1, 6), F(5, 6))),
}
hg1_edges = [
    (0, 1, 3, (0, 0)),
    (1, 2, 4, (0, 0)),
    (2, 2, 3, (0, 1)),
    (3, 0, 4, (0, 0)),
    (4, 0, 4, (0, -1)),
    (5, 2, 5, (0, 0)),
    (6, 1, 4, (-1, 0)),
    (7, 0, 3, (0, 0)),
    (8, 0, 3, (1, 0)),
    (9, 1, 5, (0, 0)),
    (10, 0, 5, (0, 0)),
    (11, 0, 5, (1, -1)),
]
emit("hexagon_graph1", hg1_nodes, hg1_edges)

# ----------------------------------------------------------- hexagon_graph2
# The model equivalent to hexagon model 3.
hg2_nodes = {
    0: ("black", (F(1, 8), F(5, 8))),
    1: ("white", (F(1, 8), F(3, 8))),
    2: ("white", (F(5, 8), F(1, 8))),
    3: ("white", (F(7, 8), F(5, 8))),
    4: ("black", (F(3, 8), F(1, 8))),
    5: ("black", (F(5, 8), F(7, 8))),
    6: ("black", (F(7, 8), F(3, 8))),
    7: ("white", (F(3, 8), F(7, 8))),
}
hg2_edges = [
    (0, 0, 1, (0, 0)),
    (1, 6, 1, (1, 0)),
    (2, 4, 1, (0, 0)),
    (3, 4, 2, (0, 0)),
    (4, 5, 3, (0, 0)),
    (5, 4, 7, (0, -1)),
    (6, 5, 2, (0, 1)),
    (7, 0, 3, (-1, 0)),
    (8, 0, 7, (0, 0)),
    (9, 6, 2, (0, 0)),
    (10, 6, 3, (0, 0)),
    (11, 5, 7, (0, 0)),
    (12, 6, 7, (0, 0)),
    (13, 0, 2, (0, 0)),
]
emit("hexagon_graph2", hg2_nodes, hg2_edges)

# --------------------------------------------------------- large_square_tile
# The square tiling on a 4x4 torus.
lt_nodes = {}
idx = {}
for i in range(4):
    for j in range(4):
        nid = i * 4 + j
        idx[(i, j)] = nid
        color = "black" if (i + j) % 2 == 0 else "white"
        lt_nodes[nid] = (color, (F(2 * i + 1, 8), F(2 * j + 1, 8)))
lt_edges = []
eid = 0
for i in range(4):
    for j in range(4):
        a = (i, j)
        for di, dj in [(1, 0), (0, 1)]:
            bx, by = (i + di) % 4, (j + dj) % 4
            b = (bx, by)
            wrap_x = 1 if i + di == 4 else 0
            wrap_y = 1 if j + dj == 4 else 0
            if (i + j) % 2 == 0:
                # a black, b white; shift measured black -> white.
                lt_edges.append((eid, idx[a], idx[b], (wrap_x * di, wrap_y * dj)))
            else:
                # a white, b black: black -> white runs backwards.
                lt_edges.append((eid, idx[b], idx[a], (-wrap_x * di, -wrap_y * dj)))
            eid += 1
emit("large_square_tile", lt_nodes, lt_edges)
