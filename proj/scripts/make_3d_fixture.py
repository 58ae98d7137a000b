#!/usr/bin/env python3
"""Periodic 3D Voronoi beam network for the test fixtures.

Seeds are drawn uniformly in the unit cube and replicated 27 times; the
Voronoi edges of the central cell set form a periodic graph, which is cut at
the cube faces. Cut points on opposite faces are paired exactly.

usage: make_3d_fixture.py [--seeds 110] [--seed 11] [--out tests/fixtures/rve3d.net]
"""
import argparse
import itertools
import math

import numpy as np
from scipy.spatial import Voronoi

E, NU, RADIUS = 1000.0, 0.3, 0.02


def periodic_edges(points):
    n = len(points)
    shifts = np.array(list(itertools.product((-1, 0, 1), repeat=3)), dtype=float)
    tiled = np.concatenate([points + s for s in shifts])
    vor = Voronoi(tiled)
    centre = int(np.flatnonzero((shifts == 0).all(axis=1))[0])
    own = set(range(centre * n, (centre + 1) * n))

    # Canonical vertex id: position folded into [0, 1)^3, rounded.
    key_of, canon = {}, []

    def vertex(v):
        p = vor.vertices[v]
        f = np.floor(p)
        q = p - f
        q[q >= 1.0 - 1e-12] = 0.0
        k = tuple(np.round(q, 9))
        if k not in key_of:
            key_of[k] = len(canon)
            canon.append(q)
        return key_of[k], f

    edges = {}
    for (a, b), ridge in zip(vor.ridge_points, vor.ridge_vertices):
        if a not in own and b not in own:
            continue
        if -1 in ridge:
            raise RuntimeError("unbounded ridge next to the central cell")
        for i, j in zip(ridge, ridge[1:] + ridge[:1]):
            (ia, fa), (ib, fb) = vertex(i), vertex(j)
            shift = tuple((fb - fa).astype(int))
            if (ib, ia, tuple(-s for s in shift)) in edges or (ia, ib, shift) in edges:
                continue
            if ia == ib and shift == (0, 0, 0):
                continue
            edges[(ia, ib, shift)] = True
    return np.array(canon), list(edges)


def build(points, tol=1e-9):
    verts, edges = periodic_edges(points)
    nodes = [p.copy() for p in verts]
    index = {}
    elements = []

    def node(p):
        k = tuple(np.round(p, 9))
        if k not in index:
            index[k] = len(nodes)
            nodes.append(p.copy())
        return index[k]

    for ia, ib, shift in edges:
        pa, pb = verts[ia], verts[ib] + np.array(shift, dtype=float)
        if shift == (0, 0, 0):
            elements.append((ia, ib))
            continue
        # Split at every integer plane crossing, then fold each piece back.
        ts = {0.0, 1.0}
        for ax in range(3):
            if shift[ax] == 0:
                continue
            lo, hi = sorted((pa[ax], pb[ax]))
            for k in range(math.floor(lo) + 1, math.floor(hi) + 1):
                ts.add((k - pa[ax]) / (pb[ax] - pa[ax]))
        ts = sorted(ts)
        for t0, t1 in zip(ts, ts[1:]):
            if t1 - t0 < 1e-9:
                raise RuntimeError("edge crosses a cube edge or corner")
            mid = pa + 0.5 * (t0 + t1) * (pb - pa)
            off = np.floor(mid)
            q0 = pa + t0 * (pb - pa) - off
            q1 = pa + t1 * (pb - pa) - off
            ends = []
            for t, q in ((t0, q0), (t1, q1)):
                if t == 0.0:
                    ends.append(ia)
                elif t == 1.0:
                    ends.append(ib)
                else:
                    q = np.where(np.abs(q) < tol, 0.0, q)
                    q = np.where(np.abs(q - 1.0) < tol, 1.0, q)
                    ends.append(node(q))
            elements.append(tuple(ends))

    nodes = np.array(nodes)
    on_face = [(np.flatnonzero(nodes[:, ax] == 0.0), np.flatnonzero(nodes[:, ax] == 1.0)) for ax in range(3)]
    pairs = []
    for ax, (minus, plus) in enumerate(on_face):
        lookup = {tuple(np.round(np.delete(nodes[m], ax), 9)): m for m in minus}
        if len(minus) != len(plus):
            raise RuntimeError("unbalanced face nodes")
        for p in plus:
            k = tuple(np.round(np.delete(nodes[p], ax), 9))
            m = lookup[k]
            nodes[p] = nodes[m]
            nodes[p][ax] = 1.0
            pairs.append((p, m, ax))
    for ax in range(3):
        if len(set(on_face[ax][0]) & set(np.concatenate([on_face[b][0] for b in range(3) if b != ax]))):
            raise RuntimeError("node on two faces")
    elements = sorted({tuple(sorted(e)) for e in elements if e[0] != e[1]})
    # One anchor node fixes the rigid translation; it fills all eight corner slots.
    anchor = int(np.argmin(np.linalg.norm(nodes, axis=1)))
    return nodes, elements, pairs, [anchor] * 8


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=110)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--out", default="tests/fixtures/rve3d.net")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    for attempt in range(50):
        pts = rng.random((args.seeds, 3))
        try:
            nodes, elements, pairs, corners = build(pts)
            break
        except RuntimeError as err:
            print("retry:", err)
    else:
        raise SystemExit("no valid network")

    area = math.pi * RADIUS**2
    inertia = math.pi * RADIUS**4 / 4.0
    with open(args.out, "w") as f:
        f.write("# periodic 3D Voronoi network, %d seeds, rng seed %d\n" % (args.seeds, args.seed))
        f.write("3 %d %d %d %d\n" % (len(nodes), len(elements), len(pairs), len(corners)))
        for p in nodes:
            f.write("%.17g %.17g %.17g\n" % tuple(p))
        for a, b in elements:
            f.write("%d %d\n" % (a, b))
        for p, m, ax in pairs:
            f.write("%d %d %d\n" % (p, m, ax))
        for c in corners:
            f.write("%d\n" % c)
        f.write("%.17g %.17g %.17g %.17g %.17g\n" % (E, NU, area, inertia, 1.0))
    print("%s: %d nodes, %d elements, %d pairs" % (args.out, len(nodes), len(elements), len(pairs)))


if __name__ == "__main__":
    main()
