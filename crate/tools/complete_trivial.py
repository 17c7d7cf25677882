#!/usr/bin/env python3
"""Searches for a valid completion of the trivial-zigzag motif.

The motif: a hexagonal cycle B0-W4-B1-W5-B2-W3 with a central white node W6
spoked to the three blacks, plus six dangling white half-edges. The search
adds one auxiliary black node B7 of degree six and looks for deck shifts and
a rotation at B7 making the whole thing a valid dimer model on the torus
(V - E + F = 0, every face boundary shift-trivial, no bigons).
"""
import itertools

# node ids: B0=0 B1=1 B2=2 W3=3 W4=4 W5=5 W6=6 B7=7
color = {0: "b", 1: "b", 2: "b", 3: "w", 4: "w", 5: "w", 6: "w", 7: "b"}

# motif edges: id -> (black, white, shift)
motif = {
    0: (0, 4, (0, 0)),   # h0 hexagon left
    1: (1, 4, (0, 0)),   # h1 top
    2: (1, 5, (0, 0)),   # h2 top-right diag
    3: (2, 5, (0, 0)),   # h3 right
    4: (2, 3, (0, 0)),   # h4 bottom
    5: (0, 3, (0, 0)),   # h5 bottom-left diag
    6: (0, 6, (0, 0)),   # s0 spoke
    7: (1, 6, (0, 0)),   # s1 spoke
    8: (2, 6, (0, 0)),   # s2 spoke
}
# stubs: 9: W4-left, 10: W4-up, 11: W5-right, 12: W5-up, 13: W3-down, 14: W3-left
stub_white = {9: 4, 10: 4, 11: 5, 12: 5, 13: 3, 14: 3}

# fixed rotations at the motif nodes (counterclockwise), from the drawing
rot_fixed = {
    0: [6, 0, 5],           # B0: spoke right, hex up, hex down-right
    1: [1, 7, 2],           # B1: hex left, spoke down, hex down-right
    2: [3, 8, 4],           # B2: hex up, spoke up-left, hex left
    6: [7, 6, 8],           # W6: spoke up, spoke left, spoke down-right
    4: [1, 10, 9, 0],       # W4: hex right, stub up, stub left, hex down
    5: [11, 12, 2, 3],      # W5: stub right, stub up, hex up-left, hex down
    3: [4, 5, 14, 13],      # W3: hex right, hex up-left, stub left, stub down
}

CANDS = {
    9: [(0, 0), (0, -1), (1, -1), (1, 0)],
    10: [(0, -1)],
    11: [(-1, 0), (-1, -1), (-1, 1)],
    12: [(0, -1), (-1, -1), (1, -1)],
    13: [(0, -1), (-1, -1), (1, -1), (0, 1)],
    14: [(0, 0), (1, 0), (1, -1), (1, 1)],
}


def analyze(edges, rotations):
    sides = [(e, d) for e in edges for d in (0, 1)]
    seen = set()
    faces = []
    for start in sides:
        if start in seen:
            continue
        cur = start
        off = (0, 0)
        n = 0
        while True:
            seen.add(cur)
            n += 1
            eid, d = cur
            b, w, (sx, sy) = edges[eid]
            head = w if d == 0 else b
            off = (off[0] + (sx if d == 0 else -sx), off[1] + (sy if d == 0 else -sy))
            rot = rotations[head]
            i = rot.index(eid)
            nxt = rot[(i - 1) % len(rot)]
            cur = (nxt, 0 if color[head] == "b" else 1)
            if cur == start:
                break
        faces.append((n, off))
    return faces


def main():
    best = None
    for shifts in itertools.product(*(CANDS[s] for s in sorted(stub_white))):
        edges = dict(motif)
        for sid, sh in zip(sorted(stub_white), shifts):
            edges[sid] = (7, stub_white[sid], sh)
        # no two parallel stubs with equal endpoints and shift
        sig = set()
        dup = False
        for sid in stub_white:
            key = (stub_white[sid], edges[sid][2])
            if key in sig:
                dup = True
            sig.add(key)
        if dup:
            continue
        for perm in itertools.permutations([10, 11, 12, 13, 14]):
            rotations = dict(rot_fixed)
            rotations[7] = [9] + list(perm)
            faces = analyze(edges, rotations)
            v, e = 8, len(edges)
            f = len(faces)
            if v - e + f != 0:
                continue
            if any(off != (0, 0) for _, off in faces):
                continue
            if any(n < 3 for n, _ in faces):
                continue
            print("FOUND shifts:", dict(zip(sorted(stub_white), shifts)), "rot7:", rotations[7])
            print("faces:", sorted(n for n, _ in faces))
            best = (shifts, rotations[7])
            return best
    print("none found")
    return best


if __name__ == "__main__":
    main()
